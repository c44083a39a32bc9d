#include "stairlift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace stairlift {
namespace {

using nlohmann::json;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

json depth_json(const std::optional<int>& d) { return d ? json(*d) : json(nullptr); }

json metrics_json(const Metrics& m) {
  json j;
  j["accuracy"] = m.accuracy;
  j["f1_micro"] = m.f1_micro;
  j["f1_macro"] = m.f1_macro;
  j["f1_weighted"] = m.f1_weighted;
  json per_class = json::object();
  json support = json::object();
  for (auto label : kAllLabels) {
    per_class[std::string(canonical_name(label))] = m.f1_per_class[ordinal(label)];
    support[std::string(canonical_name(label))] = m.support[ordinal(label)];
  }
  j["f1_per_class"] = per_class;
  j["support"] = support;
  json rows = json::array();
  for (const auto& row : m.confusion) rows.push_back(row);
  j["confusion"] = rows;
  return j;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.f1_micro = j.at("f1_micro").get<double>();
  m.f1_macro = j.at("f1_macro").get<double>();
  m.f1_weighted = j.at("f1_weighted").get<double>();
  for (auto label : kAllLabels) {
    const std::string name(canonical_name(label));
    m.f1_per_class[ordinal(label)] = j.at("f1_per_class").at(name).get<double>();
    m.support[ordinal(label)] = j.at("support").at(name).get<std::size_t>();
  }
  const auto& rows = j.at("confusion");
  for (std::size_t r = 0; r < kNumClasses; ++r) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      m.confusion[r][c] = rows.at(r).at(c).get<std::size_t>();
    }
  }
  return m;
}

std::string depth_text(const std::optional<int>& d) {
  return d ? std::to_string(*d) : std::string("None");
}

std::string run_heading(const EvaluationReport& r) {
  std::string window = fmt("%g", r.config.window_s) + " s";
  return std::string(r.config.imu_only ? "IMU only" : "IMU & Press.") + " " + window;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_summary_json(std::ostream& out, const EvaluationReport& report) {
  json j;
  j["format"] = "stairlift-loso-summary";
  j["version"] = 1;
  json cfg;
  cfg["seed"] = report.config.seed;
  cfg["window_s"] = report.config.window_s;
  cfg["imu_only"] = report.config.imu_only;
  cfg["inner_folds"] = report.config.inner_folds;
  json grid = json::array();
  for (const auto& cell : report.config.grid) {
    grid.push_back({{"max_depth", depth_json(cell.max_depth)}, {"n_estimators", cell.n_estimators}});
  }
  cfg["grid"] = grid;
  j["config"] = cfg;
  j["feature_names"] = report.feature_names;

  json folds = json::array();
  for (const auto& f : report.folds) {
    json jf;
    jf["participant_id"] = f.participant_id;
    jf["metrics"] = metrics_json(f.metrics);
    jf["max_depth"] = depth_json(f.chosen.max_depth);
    jf["n_estimators"] = f.chosen.n_estimators;
    jf["grid_cv_accuracy"] = f.grid_cv_accuracy;
    jf["train_vectors"] = f.train_vectors;
    jf["test_vectors"] = f.test_vectors;
    jf["importances"] = f.importances;
    folds.push_back(jf);
  }
  j["folds"] = folds;
  j["aggregate"] = metrics_json(report.aggregate);
  j["mean_importances"] = report.mean_importances;
  out << j.dump(2) << '\n';
}

EvaluationReport read_summary_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("summary is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "stairlift-loso-summary") {
      throw Error(ErrorCode::kFormat, "not a LOSO summary");
    }
    EvaluationReport r;
    const auto& cfg = j.at("config");
    r.config.seed = cfg.at("seed").get<std::uint64_t>();
    r.config.window_s = cfg.at("window_s").get<double>();
    r.config.imu_only = cfg.at("imu_only").get<bool>();
    r.config.inner_folds = cfg.at("inner_folds").get<int>();
    r.config.grid.clear();
    for (const auto& cell : cfg.at("grid")) {
      ForestHyperparams p;
      if (!cell.at("max_depth").is_null()) p.max_depth = cell.at("max_depth").get<int>();
      p.n_estimators = cell.at("n_estimators").get<int>();
      r.config.grid.push_back(p);
    }
    r.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& jf : j.at("folds")) {
      FoldResult f;
      f.participant_id = jf.at("participant_id").get<std::string>();
      f.metrics = metrics_from_json(jf.at("metrics"));
      if (!jf.at("max_depth").is_null()) f.chosen.max_depth = jf.at("max_depth").get<int>();
      f.chosen.n_estimators = jf.at("n_estimators").get<int>();
      f.grid_cv_accuracy = jf.at("grid_cv_accuracy").get<double>();
      f.train_vectors = jf.at("train_vectors").get<std::size_t>();
      f.test_vectors = jf.at("test_vectors").get<std::size_t>();
      f.importances = jf.at("importances").get<std::vector<double>>();
      r.folds.push_back(std::move(f));
    }
    r.aggregate = metrics_from_json(j.at("aggregate"));
    r.mean_importances = j.at("mean_importances").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed summary: ") + e.what());
  }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& confusion) {
  out << "truth\\predicted";
  for (auto label : kAllLabels) out << ',' << canonical_name(label);
  out << '\n';
  for (auto truth : kAllLabels) {
    out << canonical_name(truth);
    for (auto pred : kAllLabels) out << ',' << confusion[ordinal(truth)][ordinal(pred)];
    out << '\n';
  }
}

std::vector<std::pair<std::string, double>> ranked_importances(
    std::span<const std::string> names, std::span<const double> scores) {
  if (names.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, "feature names and scores differ in length");
  }
  std::vector<std::pair<std::string, double>> ranked;
  for (std::size_t i = 0; i < names.size(); ++i) ranked.emplace_back(names[i], scores[i]);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

void write_importance_csv(std::ostream& out, std::span<const std::string> names,
                          std::span<const double> scores) {
  out << "feature,score\n";
  for (const auto& [name, score] : ranked_importances(names, scores)) {
    out << name << ',' << fmt("%.9f", score) << '\n';
  }
}

std::string render_metrics_table(std::span<const EvaluationReport> runs) {
  constexpr std::size_t kLabelWidth = 24;
  constexpr std::size_t kColWidth = 20;
  std::ostringstream os;
  os << pad("", kLabelWidth);
  for (const auto& r : runs) os << pad(run_heading(r), kColWidth);
  os << '\n';
  struct Row {
    const char* name;
    double Metrics::*field;
  };
  const Row rows[] = {{"Accuracy", &Metrics::accuracy},
                      {"F1-Score (Micro-Avg)", &Metrics::f1_micro},
                      {"F1-Score (Macro-Avg)", &Metrics::f1_macro},
                      {"F1-Score (Weighted)", &Metrics::f1_weighted}};
  for (const auto& row : rows) {
    os << pad(row.name, kLabelWidth);
    for (const auto& r : runs) os << pad(fmt("%.2f", r.aggregate.*row.field), kColWidth);
    os << '\n';
  }
  return os.str();
}

std::string render_fold_table(const EvaluationReport& report) {
  std::ostringstream os;
  os << "participant  acc   macroF1  weightedF1  depth  estimators\n";
  for (const auto& f : report.folds) {
    os << pad(f.participant_id, 13) << pad(fmt("%.2f", f.metrics.accuracy), 6)
       << pad(fmt("%.2f", f.metrics.f1_macro), 9) << pad(fmt("%.2f", f.metrics.f1_weighted), 12)
       << pad(depth_text(f.chosen.max_depth), 7) << f.chosen.n_estimators << '\n';
  }
  return os.str();
}

std::string render_importance_svg(std::span<const std::string> names,
                                  std::span<const double> scores) {
  const auto ranked = ranked_importances(names, scores);
  const double top = ranked.empty() ? 1.0 : std::max(ranked.front().second, 1e-12);
  constexpr int kRow = 18, kLabel = 160, kBar = 400;
  const int height = static_cast<int>(ranked.size()) * kRow + 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLabel + kBar + 80
     << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const int y = 10 + static_cast<int>(i) * kRow;
    const int w = static_cast<int>(std::lround(ranked[i].second / top * kBar));
    os << "  <text x=\"" << kLabel - 6 << "\" y=\"" << y + 12 << "\" text-anchor=\"end\">"
       << xml_escape(ranked[i].first) << "</text>\n";
    os << "  <rect x=\"" << kLabel << "\" y=\"" << y + 2 << "\" width=\"" << w
       << "\" height=\"" << kRow - 4 << "\" fill=\"#3b6ea5\"/>\n";
    os << "  <text x=\"" << kLabel + w + 4 << "\" y=\"" << y + 12 << "\">"
       << fmt("%.3f", ranked[i].second) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_confusion_svg(const ConfusionMatrix& confusion) {
  constexpr int kCell = 70, kMargin = 90;
  std::ostringstream os;
  const int size = kMargin + kCell * static_cast<int>(kNumClasses) + 10;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t r = 0; r < kNumClasses; ++r) {
    std::size_t row_total = 0;
    for (auto c : confusion[r]) row_total += c;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double share = row_total == 0 ? 0.0 : static_cast<double>(confusion[r][c]) / row_total;
      const int shade = 255 - static_cast<int>(std::lround(share * 200.0));
      const int x = kMargin + static_cast<int>(c) * kCell;
      const int y = kMargin + static_cast<int>(r) * kCell;
      os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
         << kCell << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\" stroke=\"#999\"/>\n";
      os << "  <text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
         << "\" text-anchor=\"middle\">" << confusion[r][c] << "</text>\n";
    }
    const std::string name(canonical_name(label_from_ordinal(r)));
    os << "  <text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + static_cast<int>(r) * kCell + kCell / 2 + 4
       << "\" text-anchor=\"end\">" << name << "</text>\n";
    os << "  <text x=\"" << kMargin + static_cast<int>(r) * kCell + kCell / 2 << "\" y=\""
       << kMargin - 8 << "\" text-anchor=\"middle\">" << name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stairlift
