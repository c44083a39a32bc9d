#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stairlift/evaluation.hpp"

namespace stairlift {

// Machine-readable run summary: configuration, per-fold metrics and
// hyperparameters, aggregate, importances. Contains no timestamps, so equal
// runs produce equal bytes.
void write_summary_json(std::ostream& out, const EvaluationReport& report);
EvaluationReport read_summary_json(std::istream& in);

// 5x5 with a header row of predicted labels and a leading truth column.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& confusion);

// name,score sorted by score descending; equal scores keep feature order.
std::vector<std::pair<std::string, double>> ranked_importances(
    std::span<const std::string> names, std::span<const double> scores);
void write_importance_csv(std::ostream& out, std::span<const std::string> names,
                          std::span<const double> scores);

// Accuracy / micro / macro / weighted rows, one column per run, headed by
// sensor set and window length.
std::string render_metrics_table(std::span<const EvaluationReport> runs);

// Participant, accuracy, macro F1, weighted F1, depth, estimators.
std::string render_fold_table(const EvaluationReport& report);

std::string render_importance_svg(std::span<const std::string> names,
                                  std::span<const double> scores);
std::string render_confusion_svg(const ConfusionMatrix& confusion);

}  // namespace stairlift
