#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stairlift/dataset.hpp"

namespace stairlift {

struct ForestHyperparams {
  std::optional<int> max_depth;  // nullopt: grow until pure
  int n_estimators = 100;

  friend bool operator==(const ForestHyperparams&, const ForestHyperparams&) = default;
};

std::string to_string(const ForestHyperparams& params);

struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t feature = kLeaf;  // kLeaf for leaves
  double threshold = 0.0;        // value <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Bootstrap-weighted class counts of the training rows reaching this node.
  std::array<std::uint32_t, kNumClasses> class_counts{};
  ActivityLabel predicted = ActivityLabel::kNull;

  bool is_leaf() const { return feature == kLeaf; }
  std::uint64_t weight() const;
  double gini() const;
};

// Argmax of counts, ties to the lowest ordinal.
ActivityLabel majority_label(const std::array<std::uint32_t, kNumClasses>& counts);

// Nodes in depth-first preorder; the root is nodes[0].
struct DecisionTree {
  std::vector<TreeNode> nodes;

  // A node at depth == depth_limit acts as a leaf (root has depth 0).
  ActivityLabel predict(std::span<const double> x,
                        std::optional<int> depth_limit = std::nullopt) const;
  std::size_t depth() const;
};

struct TrainedForest {
  std::vector<DecisionTree> trees;
  std::vector<std::string> feature_names;
  ForestHyperparams params;
  std::uint64_t seed = 0;
  std::array<std::uint8_t, kNumClasses> class_ordinals = {0, 1, 2, 3, 4};
};

// CART trees on bootstrap samples with Gini splits over ceil(sqrt(d))
// randomly drawn features per node. Tree t uses derive_seed(seed, t); the
// feature draw at each node is keyed by the node's path, so a tree grown
// with max_depth = D equals the unbounded tree truncated at depth D.
TrainedForest train_forest(const Dataset& data, const ForestHyperparams& params,
                           std::uint64_t seed);

ActivityLabel predict(const TrainedForest& forest, std::span<const double> x);
ActivityLabel predict(const TrainedForest& forest, const FeatureVector& v);
std::vector<ActivityLabel> predict(const TrainedForest& forest, const Dataset& data);

// Mean decrease in Gini impurity, normalised per tree, averaged over trees and
// normalised to sum to 1. All zeros if no tree ever split.
std::vector<double> feature_importances(const TrainedForest& forest);

std::vector<ForestHyperparams> default_grid();

struct GridCellScore {
  ForestHyperparams params;
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracy;
};

struct GridSearchResult {
  ForestHyperparams best;
  std::vector<GridCellScore> cells;  // in grid order
};

// Stratified k-fold CV; each fold's training part is oversampled before
// fitting. Highest mean accuracy wins; ties go to fewer trees, then to the
// shallower bounded depth, with unbounded last. Throws InsufficientData when
// no class has k vectors; rarer classes simply miss some folds.
// Folds come from stratified_folds(data, k, derive_seed(seed, 1)); fold f is
// oversampled with derive_seed(seed, 100 + f) and its forest is trained with
// derive_seed(seed, 200 + f).
GridSearchResult grid_search(const Dataset& data, std::span<const ForestHyperparams> grid,
                             int k, std::uint64_t seed);

// Fold index per row; per class, members are shuffled then dealt round-robin.
std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed);

// True when `a` should be preferred to `b` at equal accuracy.
bool prefer_params(const ForestHyperparams& a, const ForestHyperparams& b);

void save_forest(std::ostream& out, const TrainedForest& forest);
TrainedForest load_forest(std::istream& in);

}  // namespace stairlift
