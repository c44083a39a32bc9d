#include "stairlift/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "detail/text.hpp"

namespace stairlift {

void validate(const Dataset& data) {
  for (std::size_t i = 0; i < data.vectors.size(); ++i) {
    const auto& v = data.vectors[i];
    if (v.values.size() != data.feature_names.size()) {
      throw Error(ErrorCode::kArityMismatch,
                  "vector " + std::to_string(i) + " has " + std::to_string(v.values.size()) +
                      " values, expected " + std::to_string(data.feature_names.size()));
    }
    if (!v.label) {
      throw Error(ErrorCode::kDegenerateData, "vector " + std::to_string(i) + " has no label");
    }
  }
}

Dataset make_dataset(std::vector<FeatureVector> vectors) {
  Dataset data;
  const std::size_t arity = vectors.empty() ? kNumFeatures : vectors.front().values.size();
  data.feature_names = arity == kNumImuFeatures ? imu_feature_names() : feature_names();
  data.vectors = std::move(vectors);
  validate(data);
  return data;
}

std::array<std::size_t, kNumClasses> class_counts(const Dataset& data) {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& v : data.vectors) {
    if (v.label) ++counts[ordinal(*v.label)];
  }
  return counts;
}

std::vector<std::string> participants(const Dataset& data) {
  std::vector<std::string> ids;
  for (const auto& v : data.vectors) ids.push_back(v.participant_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

Dataset ablate_pressure(const Dataset& data) {
  Dataset out;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.feature_names.size(); ++i) {
    if (!is_pressure_feature(data.feature_names[i])) {
      keep.push_back(i);
      out.feature_names.push_back(data.feature_names[i]);
    }
  }
  out.vectors.reserve(data.vectors.size());
  for (const auto& v : data.vectors) {
    FeatureVector r = v;
    r.values.clear();
    for (auto i : keep) r.values.push_back(v.values.at(i));
    out.vectors.push_back(std::move(r));
  }
  return out;
}

void write_features_csv(std::ostream& out, const Dataset& data) {
  out << "participant_id,start_ms";
  for (const auto& name : data.feature_names) out << ',' << name;
  out << ",label\n";
  char buf[64];
  for (const auto& v : data.vectors) {
    out << v.participant_id << ',' << v.start_ms;
    for (double x : v.values) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << ',' << buf;
    }
    out << ',' << (v.label ? canonical_name(*v.label) : std::string_view()) << '\n';
  }
}

Dataset read_features_csv(std::istream& in) {
  std::string line;
  Dataset data;
  while (std::getline(in, line)) {
    detail::strip_line_ending(line);
    detail::strip_bom(line);
    if (!detail::trim(line).empty()) break;
  }
  const auto header = detail::split_csv_line(line);
  if (header.size() < 3 || detail::trim(header.front()) != "participant_id" ||
      detail::trim(header[1]) != "start_ms" || detail::trim(header.back()) != "label") {
    throw Error(ErrorCode::kMissingColumn, "features CSV header must be participant_id,start_ms,...,label");
  }
  for (std::size_t i = 2; i + 1 < header.size(); ++i) {
    data.feature_names.emplace_back(detail::trim(header[i]));
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    detail::strip_line_ending(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow, "features row " + std::to_string(row) +
                                                ": expected " + std::to_string(header.size()) +
                                                " fields");
    }
    FeatureVector v;
    v.participant_id = std::string(detail::trim(fields[0]));
    const auto start = detail::parse_int(fields[1]);
    if (!start) throw Error(ErrorCode::kMalformedRow, "features row " + std::to_string(row));
    v.start_ms = *start;
    for (std::size_t i = 2; i + 1 < fields.size(); ++i) {
      const auto x = detail::parse_double(fields[i]);
      if (!x) throw Error(ErrorCode::kMalformedRow, "features row " + std::to_string(row));
      v.values.push_back(*x);
    }
    const auto label_text = detail::trim(fields.back());
    if (!label_text.empty()) v.label = parse_label(label_text);
    data.vectors.push_back(std::move(v));
  }
  return data;
}

}  // namespace stairlift
