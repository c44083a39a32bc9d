#include "stairlift/evaluation.hpp"

#include <algorithm>
#include <map>

#include "stairlift/balance.hpp"
#include "stairlift/random.hpp"

namespace stairlift {

std::size_t Metrics::total() const {
  std::size_t n = 0;
  for (const auto& row : confusion) {
    for (auto c : row) n += c;
  }
  return n;
}

Metrics compute_metrics(std::span<const ActivityLabel> truth,
                        std::span<const ActivityLabel> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(truth.size()) + " truths vs " +
                                                std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw Error(ErrorCode::kEmpty, "no predictions to score");

  Metrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.confusion[ordinal(truth[i])][ordinal(predicted[i])];
  }
  std::size_t correct = 0, fp_total = 0, fn_total = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::size_t tp = m.confusion[c][c];
    std::size_t fn = 0, fp = 0;
    for (std::size_t o = 0; o < kNumClasses; ++o) {
      if (o == c) continue;
      fn += m.confusion[c][o];
      fp += m.confusion[o][c];
    }
    m.support[c] = tp + fn;
    correct += tp;
    fp_total += fp;
    fn_total += fn;
    const std::size_t denom = 2 * tp + fp + fn;
    m.f1_per_class[c] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  const auto n = static_cast<double>(truth.size());
  m.accuracy = static_cast<double>(correct) / n;
  const std::size_t micro_denom = 2 * correct + fp_total + fn_total;
  m.f1_micro = 2.0 * static_cast<double>(correct) / static_cast<double>(micro_denom);
  double macro = 0.0, weighted = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    macro += m.f1_per_class[c];
    weighted += m.f1_per_class[c] * static_cast<double>(m.support[c]);
  }
  m.f1_macro = macro / static_cast<double>(kNumClasses);
  m.f1_weighted = weighted / n;
  return m;
}

std::vector<LosoSplit> loso_splits(const Dataset& data) {
  const auto ids = participants(data);
  if (ids.size() < 2) {
    throw Error(ErrorCode::kSingleParticipant, "LOSO needs at least two participants");
  }
  std::vector<LosoSplit> splits;
  splits.reserve(ids.size());
  for (const auto& id : ids) {
    LosoSplit split;
    split.held_out_id = id;
    split.train.feature_names = data.feature_names;
    split.test.feature_names = data.feature_names;
    for (const auto& v : data.vectors) {
      (v.participant_id == id ? split.test : split.train).vectors.push_back(v);
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

FoldSeeds fold_seeds(std::uint64_t seed, std::size_t index) {
  const std::uint64_t base = derive_seed(seed, 0x1050 + index);
  return {derive_seed(base, 1), derive_seed(base, 2), derive_seed(base, 3)};
}

EvaluationReport run_loso(const Dataset& input, const LosoConfig& config,
                          const FoldCallback& on_fold) {
  validate(input);
  const Dataset data = config.imu_only ? ablate_pressure(input) : input;

  EvaluationReport report;
  report.config = config;
  report.feature_names = data.feature_names;

  auto splits = loso_splits(data);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const auto& split = splits[i];
    for (const auto& v : split.train.vectors) {
      if (v.participant_id == split.held_out_id) {
        throw Error(ErrorCode::kLeakage, "held-out vector of " + split.held_out_id +
                                             " found in training material");
      }
    }
    const FoldSeeds seeds = fold_seeds(config.seed, i);
    const auto search = grid_search(split.train, config.grid, config.inner_folds, seeds.grid);
    const Dataset balanced = random_oversample(split.train, seeds.oversample);
    const TrainedForest forest = train_forest(balanced, search.best, seeds.forest);

    std::vector<ActivityLabel> truth;
    truth.reserve(split.test.size());
    for (const auto& v : split.test.vectors) truth.push_back(*v.label);

    FoldResult fold;
    fold.participant_id = split.held_out_id;
    fold.metrics = compute_metrics(truth, predict(forest, split.test));
    fold.chosen = search.best;
    for (const auto& cell : search.cells) {
      if (cell.params == search.best) fold.grid_cv_accuracy = cell.mean_accuracy;
    }
    fold.importances = feature_importances(forest);
    fold.train_vectors = split.train.size();
    fold.test_vectors = split.test.size();
    if (on_fold) on_fold(fold, i, splits.size());
    report.folds.push_back(std::move(fold));
  }

  const double n = static_cast<double>(report.folds.size());
  auto& agg = report.aggregate;
  report.mean_importances.assign(data.arity(), 0.0);
  for (const auto& fold : report.folds) {
    const auto& m = fold.metrics;
    agg.accuracy += m.accuracy;
    agg.f1_micro += m.f1_micro;
    agg.f1_macro += m.f1_macro;
    agg.f1_weighted += m.f1_weighted;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      agg.f1_per_class[c] += m.f1_per_class[c];
      agg.support[c] += m.support[c];
      for (std::size_t p = 0; p < kNumClasses; ++p) agg.confusion[c][p] += m.confusion[c][p];
    }
    for (std::size_t f = 0; f < data.arity(); ++f) report.mean_importances[f] += fold.importances[f];
  }
  agg.accuracy /= n;
  agg.f1_micro /= n;
  agg.f1_macro /= n;
  agg.f1_weighted /= n;
  for (auto& v : agg.f1_per_class) v /= n;
  for (auto& v : report.mean_importances) v /= n;
  return report;
}

}  // namespace stairlift
