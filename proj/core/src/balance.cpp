#include "stairlift/balance.hpp"

#include <algorithm>

#include "stairlift/random.hpp"

namespace stairlift {

Dataset random_oversample(const Dataset& data, std::uint64_t seed) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to oversample");
  validate(data);

  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < data.vectors.size(); ++i) {
    members[ordinal(*data.vectors[i].label)].push_back(i);
  }
  std::size_t majority = 0;
  for (const auto& m : members) majority = std::max(majority, m.size());

  Dataset out;
  out.feature_names = data.feature_names;
  out.vectors.reserve(majority * kNumClasses);
  out.vectors.insert(out.vectors.end(), data.vectors.begin(), data.vectors.end());

  Rng rng(seed);
  for (const auto& m : members) {
    if (m.empty()) continue;
    for (std::size_t k = m.size(); k < majority; ++k) {
      out.vectors.push_back(data.vectors[m[rng.uniform_index(m.size())]]);
    }
  }
  return out;
}

}  // namespace stairlift
