#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stairlift/features.hpp"

namespace stairlift {

// Labelled feature vectors sharing one ordered feature-name list.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<FeatureVector> vectors;

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
  std::size_t arity() const { return feature_names.size(); }
};

// Throws ArityMismatch or DegenerateData (unlabelled vector).
void validate(const Dataset& data);

Dataset make_dataset(std::vector<FeatureVector> vectors);

std::array<std::size_t, kNumClasses> class_counts(const Dataset& data);

// Sorted, unique participant ids.
std::vector<std::string> participants(const Dataset& data);

Dataset ablate_pressure(const Dataset& data);

// participant_id,start_ms,<feature names>,label. Values round-trip exactly.
void write_features_csv(std::ostream& out, const Dataset& data);
Dataset read_features_csv(std::istream& in);

}  // namespace stairlift
