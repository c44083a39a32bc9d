#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stairlift/dataset.hpp"
#include "stairlift/forest.hpp"

namespace stairlift {

using ConfusionMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

// Rows are truth, columns are predictions. Macro F1 averages all five
// classes, with 0 for classes whose F1 would divide by zero.
struct Metrics {
  double accuracy = 0.0;
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  std::array<double, kNumClasses> f1_per_class{};
  std::array<std::size_t, kNumClasses> support{};
  ConfusionMatrix confusion{};

  std::size_t total() const;
};

Metrics compute_metrics(std::span<const ActivityLabel> truth,
                        std::span<const ActivityLabel> predicted);

struct LosoSplit {
  Dataset train;
  Dataset test;
  std::string held_out_id;
};

// One split per participant, ordered by participant id.
std::vector<LosoSplit> loso_splits(const Dataset& data);

struct LosoConfig {
  std::vector<ForestHyperparams> grid = default_grid();
  int inner_folds = 10;
  std::uint64_t seed = 42;
  bool imu_only = false;
  double window_s = 8.0;  // recorded in the report only
};

struct FoldResult {
  std::string participant_id;
  Metrics metrics;
  ForestHyperparams chosen;
  double grid_cv_accuracy = 0.0;
  std::vector<double> importances;
  std::size_t train_vectors = 0;  // before oversampling
  std::size_t test_vectors = 0;
};

struct EvaluationReport {
  LosoConfig config;
  std::vector<std::string> feature_names;
  std::vector<FoldResult> folds;
  // Unweighted means over folds; confusion and support are summed.
  Metrics aggregate;
  std::vector<double> mean_importances;
};

using FoldCallback = std::function<void(const FoldResult&, std::size_t index, std::size_t total)>;

// Per split: grid search on the training participants (oversampling inside
// each inner fold), oversample the full training set, fit, predict the held
// out participant.
EvaluationReport run_loso(const Dataset& data, const LosoConfig& config,
                          const FoldCallback& on_fold = {});

// Seeds used for fold `index` of a LOSO run; exposed so a single fold can be
// replayed by hand.
struct FoldSeeds {
  std::uint64_t grid;
  std::uint64_t oversample;
  std::uint64_t forest;
};
FoldSeeds fold_seeds(std::uint64_t seed, std::size_t index);

}  // namespace stairlift
