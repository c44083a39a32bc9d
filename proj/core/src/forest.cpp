#include "stairlift/forest.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>

#include "detail/text.hpp"
#include "stairlift/balance.hpp"
#include "stairlift/random.hpp"

namespace stairlift {
namespace {

constexpr int kUnboundedDepth = INT_MAX;

int depth_or_unbounded(const std::optional<int>& d) { return d ? *d : kUnboundedDepth; }

// Distinct training rows. Identical (values, label) rows are merged: a tree
// only sees them through their summed bootstrap weight, so merging changes
// nothing but speed.
struct TrainingMatrix {
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<std::uint32_t> ranks;             // [feature * rows + row], dense rank
  std::vector<std::vector<double>> sorted_uniq;  // per feature
  std::vector<std::uint8_t> labels;
  std::vector<std::uint32_t> presented_to_row;  // dataset index -> distinct row
  std::vector<std::uint32_t> order;             // [feature * rows + i], rows by ascending value
};

TrainingMatrix build_matrix(const Dataset& data) {
  const std::size_t n = data.vectors.size();
  const std::size_t d = data.arity();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    const auto& va = data.vectors[a];
    const auto& vb = data.vectors[b];
    if (*va.label != *vb.label) return *va.label < *vb.label;
    return va.values < vb.values;
  };
  std::stable_sort(order.begin(), order.end(), less);

  TrainingMatrix m;
  m.features = d;
  m.presented_to_row.assign(n, 0);
  std::vector<std::uint32_t> representative;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || less(order[i - 1], order[i])) representative.push_back(order[i]);
    m.presented_to_row[order[i]] = static_cast<std::uint32_t>(representative.size() - 1);
  }
  m.rows = representative.size();
  m.labels.resize(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    m.labels[r] = static_cast<std::uint8_t>(ordinal(*data.vectors[representative[r]].label));
  }

  m.ranks.resize(d * m.rows);
  m.sorted_uniq.resize(d);
  m.order.resize(d * m.rows);
  std::vector<std::pair<double, std::uint32_t>> column(m.rows);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t r = 0; r < m.rows; ++r) {
      column[r] = {data.vectors[representative[r]].values[f], static_cast<std::uint32_t>(r)};
    }
    std::sort(column.begin(), column.end());
    auto& uniq = m.sorted_uniq[f];
    for (std::size_t i = 0; i < m.rows; ++i) m.order[f * m.rows + i] = column[i].second;
    for (const auto& [value, row] : column) {
      if (uniq.empty() || uniq.back() != value) uniq.push_back(value);
      m.ranks[f * m.rows + row] = static_cast<std::uint32_t>(uniq.size() - 1);
    }
  }
  return m;
}

std::size_t features_per_node(std::size_t d) {
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
}

class TreeGrower {
 public:
  TreeGrower(const TrainingMatrix& m, int max_depth)
      : m_(m), max_depth_(max_depth), mtry_(features_per_node(m.features)) {}

  DecisionTree grow(std::uint64_t tree_seed) {
    // Bootstrap over the presented (possibly oversampled) order.
    const std::size_t n = m_.presented_to_row.size();
    if (n >= (std::size_t{1} << 24)) throw Error(ErrorCode::kInvalidParams, "training set too large");
    weights_.assign(m_.rows, 0);
    Rng rng(tree_seed);
    for (std::size_t i = 0; i < n; ++i) {
      ++weights_[m_.presented_to_row[rng.uniform_index(n)]];
    }

    // Per feature, the drawn rows in ascending value order. Every node owns
    // the same [begin, end) slice of each list.
    const std::size_t d = m_.features;
    present_ = static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](std::uint32_t w) { return w > 0; }));
    sorted_.resize(d * present_);
    for (std::size_t f = 0; f < d; ++f) {
      std::uint64_t* out = sorted_.data() + f * present_;
      const std::uint32_t* ranks = m_.ranks.data() + f * m_.rows;
      for (const std::uint32_t r : std::span(m_.order).subspan(f * m_.rows, m_.rows)) {
        if (weights_[r] > 0) *out++ = pack(ranks[r], r);
      }
    }
    goes_left_.assign(m_.rows, 0);

    DecisionTree tree;
    struct Pending {
      std::size_t node, begin, end;
      int depth;
      std::uint64_t key;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, present_, 0, derive_seed(tree_seed, 0x5EEDull)});

    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      TreeNode& node = tree.nodes[p.node];
      for (std::size_t i = p.begin; i < p.end; ++i) {
        node.class_counts[label_of(sorted_[i])] += weight_of(sorted_[i]);
      }
      node.predicted = majority_label(node.class_counts);

      const auto nonzero = std::count_if(node.class_counts.begin(), node.class_counts.end(),
                                         [](std::uint32_t c) { return c > 0; });
      if (nonzero <= 1 || p.end - p.begin < 2 || p.depth >= max_depth_) continue;

      const Split split = find_split(p.begin, p.end, node.class_counts, p.key);
      if (!split.valid) continue;

      const auto& uniq = m_.sorted_uniq[split.feature];
      // Midpoint between the two closest values present in this node.
      double threshold = 0.5 * (uniq[split.rank] + uniq[split.next_rank]);
      if (!(threshold < uniq[split.next_rank])) threshold = uniq[split.rank];

      const std::size_t split_at = partition(p.begin, p.end, split);

      const auto left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& parent = tree.nodes[p.node];  // re-fetch after growth
      parent.feature = static_cast<std::int32_t>(split.feature);
      parent.threshold = threshold;
      parent.left = left;
      parent.right = left + 1;
      stack.push_back({static_cast<std::size_t>(left + 1), split_at, p.end, p.depth + 1,
                       derive_seed(p.key, 2)});
      stack.push_back({static_cast<std::size_t>(left), p.begin, split_at, p.depth + 1,
                       derive_seed(p.key, 1)});
    }
    return tree;
  }

 private:
  struct Split {
    bool valid = false;
    std::size_t feature = 0;
    std::uint32_t rank = 0;
    std::uint32_t next_rank = 0;
  };

  using Counts = std::array<std::int64_t, kNumClasses>;

  // Sort key: rank (24 bits) | row (24) | label (3) | weight (13). Ordering by
  // key orders by rank. A saturated weight field means "look it up".
  static constexpr std::uint64_t kWeightMask = (1u << 13) - 1;

  std::uint64_t pack(std::uint32_t rank, std::uint32_t row) const {
    const std::uint64_t w = std::min<std::uint64_t>(weights_[row], kWeightMask);
    return std::uint64_t{rank} << 40 | std::uint64_t{row} << 16 | std::uint64_t{m_.labels[row]} << 13 | w;
  }
  static std::uint32_t rank_of(std::uint64_t k) { return static_cast<std::uint32_t>(k >> 40); }
  static std::uint32_t row_of(std::uint64_t k) { return static_cast<std::uint32_t>(k >> 16) & 0xFFFFFFu; }
  static std::size_t label_of(std::uint64_t k) { return (k >> 13) & 7u; }
  std::uint32_t weight_of(std::uint64_t k) const {
    const auto w = static_cast<std::uint32_t>(k & kWeightMask);
    return w == kWeightMask ? weights_[row_of(k)] : w;
  }

  struct SplitSearch {
    Counts totals{};
    std::int64_t total_w = 0;
    // Best proxy so far as the exact fraction num / den.
    __extension__ __int128 best_num = 0;
    std::int64_t best_den = 1;
    Split best;

    // Left side holds ranks <= rank; the next occupied rank is next_rank.
    void consider(std::size_t f, const Counts& left, std::int64_t left_w, std::uint32_t rank,
                  std::uint32_t next_rank) {
      __extension__ using Wide = __int128;
      const std::int64_t right_w = total_w - left_w;
      std::int64_t sl = 0, sr = 0;
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        sl += left[c] * left[c];
        const std::int64_t rc = totals[c] - left[c];
        sr += rc * rc;
      }
      // sl / left_w + sr / right_w; maximising it minimises the weighted
      // child Gini impurity.
      const Wide num = static_cast<Wide>(sl) * right_w + static_cast<Wide>(sr) * left_w;
      const std::int64_t den = left_w * right_w;
      if (!best.valid || num * best_den > best_num * den) {
        best_num = num;
        best_den = den;
        best = {true, f, rank, next_rank};
      }
    }
  };

  Split find_split(std::size_t begin, std::size_t end,
                   const std::array<std::uint32_t, kNumClasses>& totals, std::uint64_t key) {
    const std::size_t d = m_.features;
    perm_.resize(d);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    SplitMix64 draw(key);

    SplitSearch search;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      search.totals[c] = totals[c];
      search.total_w += totals[c];
    }
    std::size_t visited = 0;
    for (std::size_t j = 0; j < d && visited < mtry_; ++j) {
      std::swap(perm_[j], perm_[j + draw.uniform_index(d - j)]);
      if (scan(perm_[j], begin, end, search)) ++visited;
    }
    return search.best;
  }

  // Walks one feature's slice in value order, one group per distinct value.
  // A cut between two groups that are pure in the same class never beats
  // both end cuts of that run (the proxy is convex along it), so it is not
  // scored. The first cut is always scored so zero-gain ties resolve as in a
  // full scan. Returns false when the feature is constant in the node.
  bool scan(std::size_t f, std::size_t begin, std::size_t end, SplitSearch& search) {
    const std::uint64_t* keys = sorted_.data() + f * present_;
    if (rank_of(keys[begin]) == rank_of(keys[end - 1])) return false;
    if (m_.sorted_uniq[f].size() == m_.rows) {
      scan_distinct(f, keys + begin, end - begin, search);
      return true;
    }

    Counts left{};
    std::int64_t left_w = 0;
    std::uint32_t prev_rank = 0;
    int prev_pure = -1;
    bool first = true;
    std::size_t i = begin;
    while (i < end) {
      const std::uint32_t rank = rank_of(keys[i]);
      Counts counts{};
      std::int64_t w = 0;
      int pure = -2;
      for (; i < end && rank_of(keys[i]) == rank; ++i) {
        const auto c = static_cast<int>(label_of(keys[i]));
        const std::uint32_t kw = weight_of(keys[i]);
        counts[static_cast<std::size_t>(c)] += kw;
        w += kw;
        pure = pure == -2 || pure == c ? c : -1;
      }
      if (left_w > 0 && (first || pure < 0 || pure != prev_pure)) {
        search.consider(f, left, left_w, prev_rank, rank);
        first = false;
      }
      for (std::size_t c = 0; c < kNumClasses; ++c) left[c] += counts[c];
      left_w += w;
      prev_rank = rank;
      prev_pure = pure;
    }
    return true;
  }

  // Every value distinct: each group is one row, so a cut is skipped exactly
  // when its two neighbours share a label.
  void scan_distinct(std::size_t f, const std::uint64_t* keys, std::size_t n, SplitSearch& search) {
    Counts left{};
    std::int64_t left_w = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::uint64_t k = keys[i];
      const std::uint32_t w = weight_of(k);
      left[label_of(k)] += w;
      left_w += w;
      if (i == 0 || label_of(k) != label_of(keys[i + 1])) {
        search.consider(f, left, left_w, rank_of(k), rank_of(keys[i + 1]));
      }
    }
  }

  // Stable split of every feature's slice; returns the first right index.
  std::size_t partition(std::size_t begin, std::size_t end, const Split& split) {
    const std::uint64_t* by_split = sorted_.data() + split.feature * present_;
    for (std::size_t i = begin; i < end; ++i) {
      goes_left_[row_of(by_split[i])] = rank_of(by_split[i]) <= split.rank;
    }
    scratch_.resize(end - begin);
    std::size_t split_at = begin;
    for (std::size_t f = 0; f < m_.features; ++f) {
      std::uint64_t* keys = sorted_.data() + f * present_;
      std::size_t out = begin, spill = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint64_t k = keys[i];
        const std::size_t left = goes_left_[row_of(k)];
        keys[out] = k;
        scratch_[spill] = k;
        out += left;
        spill += 1 - left;
      }
      std::copy_n(scratch_.begin(), spill, keys + out);
      split_at = out;
    }
    return split_at;
  }

  const TrainingMatrix& m_;
  int max_depth_;
  std::size_t mtry_;
  std::vector<std::uint32_t> weights_;
  std::size_t present_ = 0;
  std::vector<std::uint64_t> sorted_;  // [feature * present_ + i], see pack()
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::size_t> perm_;
};

void require_trainable(const Dataset& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "no training vectors");
  validate(data);
  if (data.arity() == 0) throw Error(ErrorCode::kDegenerateData, "no features");
  const auto counts = class_counts(data);
  const auto present = std::count_if(counts.begin(), counts.end(),
                                     [](std::size_t c) { return c > 0; });
  if (present < 2) throw Error(ErrorCode::kDegenerateData, "training data has a single class");
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, index); }

// Predicted label of `tree` at several depth limits (ascending) in one descent.
void predict_at_depths(const DecisionTree& tree, std::span<const double> x,
                       std::span<const int> limits, std::span<ActivityLabel> out) {
  std::size_t node = 0;
  int depth = 0;
  std::size_t next_limit = 0;
  while (true) {
    const TreeNode& n = tree.nodes[node];
    while (next_limit < limits.size() && limits[next_limit] == depth) {
      out[next_limit++] = n.predicted;
    }
    if (n.is_leaf()) break;
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                          : n.right);
    ++depth;
  }
  const ActivityLabel leaf = tree.nodes[node].predicted;
  for (; next_limit < limits.size(); ++next_limit) out[next_limit] = leaf;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.vectors.reserve(indices.size());
  for (auto i : indices) out.vectors.push_back(data.vectors[i]);
  return out;
}

}  // namespace

std::string to_string(const ForestHyperparams& params) {
  return "max_depth=" + (params.max_depth ? std::to_string(*params.max_depth) : std::string("None")) +
         " n_estimators=" + std::to_string(params.n_estimators);
}

std::uint64_t TreeNode::weight() const {
  std::uint64_t w = 0;
  for (auto c : class_counts) w += c;
  return w;
}

double TreeNode::gini() const {
  const double w = static_cast<double>(weight());
  if (w <= 0.0) return 0.0;
  double s = 0.0;
  for (auto c : class_counts) s += (c / w) * (c / w);
  return 1.0 - s;
}

ActivityLabel majority_label(const std::array<std::uint32_t, kNumClasses>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return label_from_ordinal(best);
}

ActivityLabel DecisionTree::predict(std::span<const double> x,
                                    std::optional<int> depth_limit) const {
  const int limit = depth_or_unbounded(depth_limit);
  std::size_t node = 0;
  for (int depth = 0; depth < limit && !nodes[node].is_leaf(); ++depth) {
    const TreeNode& n = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                          : n.right);
  }
  return nodes[node].predicted;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[node].is_leaf()) {
      stack.push_back({static_cast<std::size_t>(nodes[node].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes[node].right), d + 1});
    }
  }
  return deepest;
}

TrainedForest train_forest(const Dataset& data, const ForestHyperparams& params,
                           std::uint64_t seed) {
  if (params.n_estimators < 1) throw Error(ErrorCode::kInvalidParams, "n_estimators must be >= 1");
  if (params.max_depth && *params.max_depth < 1) {
    throw Error(ErrorCode::kInvalidParams, "max_depth must be >= 1");
  }
  require_trainable(data);

  const TrainingMatrix matrix = build_matrix(data);
  TreeGrower grower(matrix, depth_or_unbounded(params.max_depth));
  TrainedForest forest;
  forest.feature_names = data.feature_names;
  forest.params = params;
  forest.seed = seed;
  forest.trees.reserve(static_cast<std::size_t>(params.n_estimators));
  for (int t = 0; t < params.n_estimators; ++t) {
    forest.trees.push_back(grower.grow(tree_seed(seed, static_cast<std::size_t>(t))));
  }
  return forest;
}

ActivityLabel predict(const TrainedForest& forest, std::span<const double> x) {
  if (x.size() != forest.feature_names.size()) {
    throw Error(ErrorCode::kArityMismatch, "expected " + std::to_string(forest.feature_names.size()) +
                                               " features, got " + std::to_string(x.size()));
  }
  std::array<std::size_t, kNumClasses> votes{};
  for (const auto& tree : forest.trees) ++votes[ordinal(tree.predict(x))];
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (votes[c] > votes[best]) best = c;
  }
  return label_from_ordinal(best);
}

ActivityLabel predict(const TrainedForest& forest, const FeatureVector& v) {
  return predict(forest, std::span<const double>(v.values));
}

std::vector<ActivityLabel> predict(const TrainedForest& forest, const Dataset& data) {
  std::vector<ActivityLabel> out;
  out.reserve(data.size());
  for (const auto& v : data.vectors) out.push_back(predict(forest, v));
  return out;
}

std::vector<double> feature_importances(const TrainedForest& forest) {
  const std::size_t d = forest.feature_names.size();
  std::vector<double> total(d, 0.0);
  std::vector<double> per_tree(d);
  for (const auto& tree : forest.trees) {
    std::fill(per_tree.begin(), per_tree.end(), 0.0);
    const double root_w = static_cast<double>(tree.nodes.front().weight());
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      const double decrease = static_cast<double>(node.weight()) * node.gini() -
                              static_cast<double>(l.weight()) * l.gini() -
                              static_cast<double>(r.weight()) * r.gini();
      per_tree[static_cast<std::size_t>(node.feature)] += std::max(decrease, 0.0) / root_w;
    }
    const double sum = std::accumulate(per_tree.begin(), per_tree.end(), 0.0);
    if (sum <= 0.0) continue;
    for (std::size_t f = 0; f < d; ++f) total[f] += per_tree[f] / sum;
  }
  const double sum = std::accumulate(total.begin(), total.end(), 0.0);
  if (sum > 0.0) {
    for (auto& v : total) v /= sum;
  }
  return total;
}

std::vector<ForestHyperparams> default_grid() {
  std::vector<ForestHyperparams> grid;
  for (std::optional<int> depth : {std::optional<int>(15), std::optional<int>(20),
                                   std::optional<int>()}) {
    for (int n = 200; n <= 350; n += 25) grid.push_back({depth, n});
  }
  return grid;
}

bool prefer_params(const ForestHyperparams& a, const ForestHyperparams& b) {
  if (a.n_estimators != b.n_estimators) return a.n_estimators < b.n_estimators;
  return depth_or_unbounded(a.max_depth) < depth_or_unbounded(b.max_depth);
}

std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < data.size(); ++i) {
    members[ordinal(*data.vectors[i].label)].push_back(i);
  }
  std::vector<int> fold(data.size(), 0);
  int offset = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& m = members[c];
    Rng rng(derive_seed(seed, c));
    for (std::size_t i = m.size(); i > 1; --i) {
      std::swap(m[i - 1], m[rng.uniform_index(i)]);
    }
    // Continue the deal where the previous class stopped so fold sizes stay even.
    for (std::size_t i = 0; i < m.size(); ++i) {
      fold[m[i]] = static_cast<int>((static_cast<std::size_t>(offset) + i) % static_cast<std::size_t>(k));
    }
    offset = static_cast<int>((static_cast<std::size_t>(offset) + m.size()) % static_cast<std::size_t>(k));
  }
  return fold;
}

GridSearchResult grid_search(const Dataset& data, std::span<const ForestHyperparams> grid,
                             int k, std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidParams, "empty hyperparameter grid");
  for (const auto& cell : grid) {
    if (cell.n_estimators < 1 || (cell.max_depth && *cell.max_depth < 1)) {
      throw Error(ErrorCode::kInvalidParams, "invalid grid cell " + to_string(cell));
    }
  }
  if (k < 2) throw Error(ErrorCode::kInvalidParams, "k must be >= 2");
  require_trainable(data);
  // Rare classes may miss some folds; only a class-wide shortfall is fatal.
  const auto counts = class_counts(data);
  const std::size_t largest = *std::max_element(counts.begin(), counts.end());
  if (largest < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kInsufficientData,
                "every class has fewer than k=" + std::to_string(k) + " vectors");
  }

  // One growth at the deepest/largest setting serves every cell: depth
  // limits truncate trees and smaller ensembles are prefixes.
  std::vector<int> depths;
  int max_trees = 0;
  for (const auto& cell : grid) {
    depths.push_back(depth_or_unbounded(cell.max_depth));
    max_trees = std::max(max_trees, cell.n_estimators);
  }
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  const int grow_depth = depths.back();

  auto depth_slot = [&](const ForestHyperparams& p) {
    return static_cast<std::size_t>(
        std::lower_bound(depths.begin(), depths.end(), depth_or_unbounded(p.max_depth)) -
        depths.begin());
  };

  GridSearchResult result;
  result.cells.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) result.cells[i].params = grid[i];

  const auto fold_of = stratified_folds(data, k, derive_seed(seed, 1));
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (fold_of[i] == f ? val_idx : train_idx).push_back(i);
    }
    const Dataset train = random_oversample(subset(data, train_idx),
                                            derive_seed(seed, 100 + static_cast<std::uint64_t>(f)));
    const std::uint64_t forest_seed = derive_seed(seed, 200 + static_cast<std::uint64_t>(f));
    const TrainingMatrix matrix = build_matrix(train);
    TreeGrower grower(matrix, grow_depth);

    // votes[val][depth slot][class], accumulated tree by tree.
    std::vector<std::array<std::uint32_t, kNumClasses>> votes(val_idx.size() * depths.size());
    std::vector<std::size_t> correct(grid.size(), 0);
    std::vector<ActivityLabel> labels(depths.size());
    for (int t = 0; t < max_trees; ++t) {
      const DecisionTree tree = grower.grow(tree_seed(forest_seed, static_cast<std::size_t>(t)));
      for (std::size_t v = 0; v < val_idx.size(); ++v) {
        predict_at_depths(tree, data.vectors[val_idx[v]].values, depths, labels);
        for (std::size_t s = 0; s < depths.size(); ++s) {
          ++votes[v * depths.size() + s][ordinal(labels[s])];
        }
      }
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g].n_estimators != t + 1) continue;
        const std::size_t s = depth_slot(grid[g]);
        for (std::size_t v = 0; v < val_idx.size(); ++v) {
          const auto& tally = votes[v * depths.size() + s];
          std::size_t best = 0;
          for (std::size_t c = 1; c < kNumClasses; ++c) {
            if (tally[c] > tally[best]) best = c;
          }
          if (label_from_ordinal(best) == *data.vectors[val_idx[v]].label) ++correct[g];
        }
      }
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      result.cells[g].fold_accuracy.push_back(static_cast<double>(correct[g]) /
                                              static_cast<double>(val_idx.size()));
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto& cell = result.cells[g];
    double sum = 0.0;
    for (double a : cell.fold_accuracy) sum += a;
    cell.mean_accuracy = sum / static_cast<double>(k);
    if (g == 0) continue;
    const auto& incumbent = result.cells[best];
    if (cell.mean_accuracy > incumbent.mean_accuracy ||
        (cell.mean_accuracy == incumbent.mean_accuracy &&
         prefer_params(cell.params, incumbent.params))) {
      best = g;
    }
  }
  result.best = result.cells[best].params;
  return result;
}

void save_forest(std::ostream& out, const TrainedForest& forest) {
  out << "stairlift-forest 1\n";
  out << "seed " << forest.seed << '\n';
  out << "max_depth "
      << (forest.params.max_depth ? std::to_string(*forest.params.max_depth) : std::string("none"))
      << '\n';
  out << "n_estimators " << forest.params.n_estimators << '\n';
  out << "classes " << kNumClasses;
  for (auto c : forest.class_ordinals) out << ' ' << static_cast<int>(c);
  out << '\n';
  out << "features " << forest.feature_names.size() << '\n';
  for (const auto& name : forest.feature_names) out << name << '\n';
  out << "trees " << forest.trees.size() << '\n';
  char buf[64];
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    const auto& tree = forest.trees[t];
    out << "tree " << t << ' ' << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes) {
      std::snprintf(buf, sizeof buf, "%a", n.threshold);
      out << n.feature << ' ' << buf << ' ' << n.left << ' ' << n.right;
      for (auto c : n.class_counts) out << ' ' << c;
      out << '\n';
    }
  }
  out << "end\n";
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw Error(ErrorCode::kFormat, "unexpected end of model file");
    return w;
  }

  void expect(std::string_view keyword) {
    const auto w = word();
    if (w != keyword) {
      throw Error(ErrorCode::kFormat, "expected '" + std::string(keyword) + "', got '" + w + "'");
    }
  }

  std::int64_t integer() {
    const auto w = word();
    auto v = detail::parse_int(w);
    if (!v) throw Error(ErrorCode::kFormat, "expected integer, got '" + w + "'");
    return *v;
  }

  std::uint64_t unsigned_integer() {
    const auto w = word();
    try {
      std::size_t used = 0;
      const auto v = std::stoull(w, &used);
      if (used == w.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::kFormat, "expected unsigned integer, got '" + w + "'");
  }

  double real() {
    const auto w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size()) throw Error(ErrorCode::kFormat, "bad number '" + w + "'");
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

TrainedForest load_forest(std::istream& in) {
  TokenReader r(in);
  r.expect("stairlift-forest");
  if (r.integer() != 1) throw Error(ErrorCode::kFormat, "unsupported model version");
  TrainedForest forest;
  r.expect("seed");
  forest.seed = r.unsigned_integer();
  r.expect("max_depth");
  const auto depth = r.word();
  if (depth != "none") {
    auto v = detail::parse_int(depth);
    if (!v || *v < 1) throw Error(ErrorCode::kFormat, "bad max_depth");
    forest.params.max_depth = static_cast<int>(*v);
  }
  r.expect("n_estimators");
  forest.params.n_estimators = static_cast<int>(r.integer());
  r.expect("classes");
  if (r.integer() != static_cast<std::int64_t>(kNumClasses)) {
    throw Error(ErrorCode::kFormat, "class count mismatch");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto v = r.integer();
    if (v != static_cast<std::int64_t>(c)) throw Error(ErrorCode::kFormat, "class ordinal mismatch");
    forest.class_ordinals[c] = static_cast<std::uint8_t>(v);
  }
  r.expect("features");
  const auto d = r.integer();
  if (d < 1) throw Error(ErrorCode::kFormat, "bad feature count");
  for (std::int64_t i = 0; i < d; ++i) forest.feature_names.push_back(r.word());
  r.expect("trees");
  const auto n_trees = r.integer();
  if (n_trees < 0) throw Error(ErrorCode::kFormat, "bad tree count");
  forest.trees.resize(static_cast<std::size_t>(n_trees));
  for (std::int64_t t = 0; t < n_trees; ++t) {
    r.expect("tree");
    if (r.integer() != t) throw Error(ErrorCode::kFormat, "tree index out of sequence");
    const auto n_nodes = r.integer();
    if (n_nodes < 1) throw Error(ErrorCode::kFormat, "tree without nodes");
    auto& nodes = forest.trees[static_cast<std::size_t>(t)].nodes;
    nodes.resize(static_cast<std::size_t>(n_nodes));
    for (auto& n : nodes) {
      n.feature = static_cast<std::int32_t>(r.integer());
      n.threshold = r.real();
      n.left = static_cast<std::int32_t>(r.integer());
      n.right = static_cast<std::int32_t>(r.integer());
      for (auto& c : n.class_counts) c = static_cast<std::uint32_t>(r.unsigned_integer());
      n.predicted = majority_label(n.class_counts);
      if (!n.is_leaf() && (n.feature < 0 || n.feature >= d || n.left <= 0 || n.right <= 0 ||
                           n.left >= n_nodes || n.right >= n_nodes)) {
        throw Error(ErrorCode::kFormat, "corrupt node in tree " + std::to_string(t));
      }
    }
  }
  r.expect("end");
  return forest;
}

}  // namespace stairlift
