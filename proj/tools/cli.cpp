#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "stairlift/balance.hpp"
#include "stairlift/evaluation.hpp"
#include "stairlift/features.hpp"
#include "stairlift/random.hpp"
#include "stairlift/report.hpp"
#include "stairlift/synth.hpp"

namespace stairlift::cli {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int to_int(const std::string& s, const char* what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::optional<int> to_depth(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "none" || lower == "null" || lower == "unbounded") return std::nullopt;
  const int d = to_int(s, "depth");
  if (d < 1) throw Error(ErrorCode::kInvalidConfig, "depth must be >= 1");
  return d;
}

// Everything any subcommand can be configured with.
struct Settings {
  std::string out;
  std::string data;
  std::string features;
  std::string config;
  std::uint64_t seed = 42;
  double window_s = 8.0;
  double stride_s = 0.0;  // 0: same as the window
  double coverage = 0.8;
  double rate_hz = 50.0;
  bool no_resample = false;
  bool skip_malformed = false;
  std::vector<std::string> columns;
  bool imu_only = false;
  std::string grid = "default";
  int folds = 10;
  // synth
  int participants = 20;
  double minutes = 30.0;
  bool noiseless = false;
  // train
  std::string depth;
  int trees = 0;
  // importance / report
  std::string model;
  std::vector<std::string> summaries;
};

WindowingParams windowing(const Settings& s) {
  if (!(s.window_s > 0.0)) throw Error(ErrorCode::kInvalidConfig, "window must be > 0");
  if (!(s.stride_s >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "stride must be >= 0");
  if (!(s.coverage > 0.0) || s.coverage > 1.0) {
    throw Error(ErrorCode::kInvalidConfig, "coverage must be in (0, 1]");
  }
  WindowingParams p;
  p.window_s = s.window_s;
  p.stride_s = s.stride_s > 0.0 ? s.stride_s : s.window_s;
  p.coverage_threshold = s.coverage;
  return p;
}

LoadOptions load_options(const Settings& s) {
  LoadOptions o;
  o.ingest.nominal_rate_hz = s.rate_hz;
  o.ingest.skip_malformed_rows = s.skip_malformed;
  o.resample = !s.no_resample;
  for (const auto& entry : s.columns) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidConfig, "column mapping needs key=name");
    const std::string key = trim(entry.substr(0, eq));
    const std::string name = trim(entry.substr(eq + 1));
    auto& c = o.ingest.columns;
    if (key == "time") c.time = name;
    else if (key == "timestamp") c.timestamp = name;
    else if (key == "x") c.x = name;
    else if (key == "y") c.y = name;
    else if (key == "z") c.z = name;
    else if (key == "magnitude") c.magnitude = name;
    else if (key == "pressure") c.pressure = name;
    else if (key == "label") c.label = name;
    else throw Error(ErrorCode::kInvalidConfig, "unknown column key '" + key + "'");
  }
  return o;
}

fs::path output_dir(const Settings& s) {
  if (s.out.empty()) throw Error(ErrorCode::kInvalidConfig, "--out is required");
  fs::path dir(s.out);
  fs::create_directories(dir);
  return dir;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

Dataset input_dataset(const Settings& s, std::ostream& out) {
  if (!s.features.empty()) {
    std::ifstream in(s.features, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + s.features);
    return read_features_csv(in);
  }
  if (s.data.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string("no input: pass --data, --features or set ") + kDataEnv);
  }
  Extraction ex = extract_directory(s.data, load_options(s), windowing(s));
  out << "extracted " << ex.dataset.size() << " windows from " << s.data << "\n";
  return std::move(ex.dataset);
}

void print_counts(std::ostream& out, const Dataset& data) {
  const auto counts = class_counts(data);
  for (ActivityLabel l : kAllLabels) {
    out << "  " << canonical_name(l) << ": " << counts[ordinal(l)] << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_synth(const Settings& s, std::ostream& out) {
  if (s.participants < 1) throw Error(ErrorCode::kInvalidConfig, "--participants must be >= 1");
  const fs::path dir = output_dir(s);
  SynthConfig config;
  config.session_minutes = s.minutes;
  config.rate_hz = s.rate_hz;
  if (s.noiseless) config = config.noiseless();
  const auto cohort = generate_cohort(s.participants, config, s.seed);

  ordered_json manifest;
  manifest["format"] = "stairlift-synth-manifest";
  manifest["version"] = 1;
  manifest["seed"] = s.seed;
  manifest["participants"] = s.participants;
  manifest["session_minutes"] = config.session_minutes;
  manifest["rate_hz"] = config.rate_hz;
  manifest["noiseless"] = s.noiseless;
  manifest["floors"] = {config.floor_min, config.floor_max};
  manifest["floor_height_m"] = config.floor_height_m;
  manifest["pressure_gradient"] = config.pressure_gradient;
  ordered_json files = ordered_json::array();
  for (const auto& session : cohort) {
    const Recording& rec = session.recording;
    const std::string file = rec.participant_id + ".csv";
    write_file_atomic(dir / file, render([&](std::ostream& o) { write_sensor_csv(o, rec); }));

    ordered_json seconds;
    std::array<double, kNumClasses> ms{};
    ordered_json segments = ordered_json::array();
    for (const auto& seg : session.segments) {
      ms[ordinal(seg.label)] += static_cast<double>(seg.end_ms - seg.start_ms);
      segments.push_back({{"label", std::string(canonical_name(seg.label))},
                          {"start_ms", seg.start_ms},
                          {"end_ms", seg.end_ms},
                          {"from_floor", seg.from_floor},
                          {"to_floor", seg.to_floor}});
    }
    for (ActivityLabel l : kAllLabels) seconds[std::string(canonical_name(l))] = ms[ordinal(l)] / 1000.0;
    files.push_back({{"id", rec.participant_id},
                     {"file", file},
                     {"samples", rec.samples.size()},
                     {"class_seconds", seconds},
                     {"segments", segments}});
    out << "wrote " << file << " (" << rec.samples.size() << " samples)\n";
  }
  manifest["recordings"] = files;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote manifest.json\n";
  return 0;
}

int cmd_extract(const Settings& s, std::ostream& out) {
  if (s.data.empty()) {
    throw Error(ErrorCode::kInvalidConfig, std::string("pass --data or set ") + kDataEnv);
  }
  const fs::path dir = output_dir(s);
  Extraction ex = extract_directory(s.data, load_options(s), windowing(s));
  Dataset data = s.imu_only ? ablate_pressure(ex.dataset) : ex.dataset;

  std::size_t kept = 0;
  for (const auto& r : ex.records) kept += r.fate == WindowFate::kKept;
  std::array<std::size_t, 4> by_fate{};
  for (const auto& r : ex.records) ++by_fate[static_cast<std::size_t>(r.fate)];
  out << "windows: " << ex.records.size() << " candidates, " << kept << " kept, "
      << ex.records.size() - kept << " discarded (too_short " << by_fate[1] << ", gap "
      << by_fate[2] << ", no_majority " << by_fate[3] << ")\n";
  print_counts(out, data);

  write_file_atomic(dir / "features.csv", render([&](std::ostream& o) { write_features_csv(o, data); }));
  write_file_atomic(dir / "windows.csv", render([&](std::ostream& o) { write_windows_csv(o, ex.records); }));
  out << "wrote features.csv, windows.csv\n";
  return 0;
}

int cmd_train(const Settings& s, std::ostream& out) {
  const fs::path dir = output_dir(s);
  Dataset data = input_dataset(s, out);
  if (s.imu_only) data = ablate_pressure(data);
  print_counts(out, data);

  ForestHyperparams params;
  if (s.depth.empty() && s.trees == 0) {
    const auto grid = parse_grid(s.grid);
    const GridSearchResult result = grid_search(data, grid, s.folds, derive_seed(s.seed, 1));
    params = result.best;
    out << "grid search picked " << to_string(params) << "\n";
  } else {
    params.max_depth = s.depth.empty() ? std::nullopt : to_depth(s.depth);
    params.n_estimators = s.trees > 0 ? s.trees : 100;
  }
  const Dataset balanced = random_oversample(data, derive_seed(s.seed, 2));
  const TrainedForest forest = train_forest(balanced, params, derive_seed(s.seed, 3));
  const auto importances = feature_importances(forest);

  write_file_atomic(dir / "model.forest", render([&](std::ostream& o) { save_forest(o, forest); }));
  write_file_atomic(dir / "importance.csv", render([&](std::ostream& o) {
                      write_importance_csv(o, forest.feature_names, importances);
                    }));
  out << "trained " << to_string(params) << " on " << balanced.size()
      << " vectors; wrote model.forest, importance.csv\n";
  return 0;
}

int cmd_loso(const Settings& s, std::ostream& out) {
  LosoConfig config;
  config.grid = parse_grid(s.grid);
  const fs::path dir = output_dir(s);
  const Dataset data = input_dataset(s, out);
  print_counts(out, data);

  config.inner_folds = s.folds;
  config.seed = s.seed;
  config.imu_only = s.imu_only;
  config.window_s = s.window_s;
  const EvaluationReport report =
      run_loso(data, config, [&](const FoldResult& f, std::size_t i, std::size_t n) {
        char line[160];
        std::snprintf(line, sizeof line, "fold %zu/%zu %s acc=%.4f macro_f1=%.4f %s\n", i + 1, n,
                      f.participant_id.c_str(), f.metrics.accuracy, f.metrics.f1_macro,
                      to_string(f.chosen).c_str());
        out << line << std::flush;
      });

  const std::string table = render_metrics_table(std::span(&report, 1));
  write_file_atomic(dir / "summary.json", render([&](std::ostream& o) { write_summary_json(o, report); }));
  write_file_atomic(dir / "confusion.csv",
                    render([&](std::ostream& o) { write_confusion_csv(o, report.aggregate.confusion); }));
  write_file_atomic(dir / "importance.csv", render([&](std::ostream& o) {
                      write_importance_csv(o, report.feature_names, report.mean_importances);
                    }));
  write_file_atomic(dir / "folds.txt", render_fold_table(report));
  write_file_atomic(dir / "table.txt", table);
  write_file_atomic(dir / "importance.svg",
                    render_importance_svg(report.feature_names, report.mean_importances));
  write_file_atomic(dir / "confusion.svg", render_confusion_svg(report.aggregate.confusion));
  out << table;
  return 0;
}

int cmd_importance(const Settings& s, std::ostream& out) {
  const fs::path dir = output_dir(s);
  std::vector<std::string> names;
  std::vector<double> scores;
  if (!s.model.empty()) {
    std::ifstream in(s.model, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + s.model);
    const TrainedForest forest = load_forest(in);
    names = forest.feature_names;
    scores = feature_importances(forest);
  } else if (!s.summaries.empty()) {
    std::ifstream in(s.summaries.front(), std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + s.summaries.front());
    const EvaluationReport report = read_summary_json(in);
    names = report.feature_names;
    scores = report.mean_importances;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "pass --model or --summary");
  }
  const auto ranked = ranked_importances(names, scores);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "%2zu  %-20s %.4f\n", i + 1, ranked[i].first.c_str(), ranked[i].second);
    out << line;
  }
  write_file_atomic(dir / "importance.csv",
                    render([&](std::ostream& o) { write_importance_csv(o, names, scores); }));
  write_file_atomic(dir / "importance.svg", render_importance_svg(names, scores));
  return 0;
}

int cmd_report(const Settings& s, std::ostream& out) {
  if (s.summaries.empty()) throw Error(ErrorCode::kInvalidConfig, "pass at least one --summary");
  const fs::path dir = output_dir(s);
  std::vector<EvaluationReport> runs;
  std::string folds;
  for (const auto& path : s.summaries) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    runs.push_back(read_summary_json(in));
    folds += path + "\n" + render_fold_table(runs.back()) + "\n";
  }
  const std::string table = render_metrics_table(runs);
  write_file_atomic(dir / "table.txt", table);
  write_file_atomic(dir / "folds.txt", folds);
  out << table;
  return 0;
}

// ---------------------------------------------------------------------------

void add_data_options(CLI::App* sub, Settings& s) {
  sub->add_option("--data", s.data, "Directory of participant CSVs")->envname(kDataEnv);
  sub->add_option("--window", s.window_s, "Window length in seconds");
  sub->add_option("--stride", s.stride_s, "Window stride in seconds (0: window length)");
  sub->add_option("--coverage", s.coverage, "Minimum share of the modal label");
  sub->add_option("--rate", s.rate_hz, "Nominal sample rate in Hz");
  sub->add_flag("--no-resample", s.no_resample, "Use samples as recorded");
  sub->add_flag("--skip-malformed", s.skip_malformed, "Skip malformed CSV rows instead of failing");
  sub->add_option("--column", s.columns, "Column mapping key=name (time, timestamp, x, y, z, "
                                         "magnitude, pressure, label)");
}

void add_model_options(CLI::App* sub, Settings& s) {
  sub->add_option("--features", s.features, "Features CSV written by extract (instead of --data)");
  sub->add_flag("--imu-only", s.imu_only, "Drop the pressure features");
  sub->add_option("--grid", s.grid, "Hyperparameter grid, e.g. depth=15,20,none;trees=200:350:25");
  sub->add_option("--folds", s.folds, "Inner cross-validation folds")->check(CLI::Range(2, 1000));
}

// Inserts the --config file's tokens right after the subcommand name so that
// explicit flags, which come later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + *path);
  const auto tokens = config_tokens(in);
  std::vector<std::string> expanded;
  bool inserted = false;
  for (const auto& a : args) {
    expanded.push_back(a);
    if (!inserted && !a.empty() && a[0] != '-') {
      expanded.insert(expanded.end(), tokens.begin(), tokens.end());
      inserted = true;
    }
  }
  return expanded;
}

void print_effective(std::ostream& out, const CLI::App* sub) {
  out << "# stairlift " << sub->get_name() << "\n";
  std::istringstream lines(sub->config_to_str(true, false));
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.rfind("config=", 0) != 0 && line.find("{}") == std::string::npos) out << "#   " << line << "\n";
  }
}

}  // namespace

std::vector<ForestHyperparams> parse_grid(std::string_view spec) {
  const std::string text = trim(spec);
  if (text.empty() || text == "default") return default_grid();
  std::vector<std::optional<int>> depths = {15, 20, std::nullopt};
  std::vector<int> trees;
  for (int n = 200; n <= 350; n += 25) trees.push_back(n);
  for (const auto& part : split(text, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidConfig, "grid part needs key=values: " + part);
    const std::string key = trim(part.substr(0, eq));
    const std::string values = part.substr(eq + 1);
    if (key == "depth") {
      depths.clear();
      for (const auto& v : split(values, ',')) depths.push_back(to_depth(v));
    } else if (key == "trees") {
      trees.clear();
      const auto range = split(values, ':');
      if (range.size() == 3) {
        const int lo = to_int(range[0], "trees"), hi = to_int(range[1], "trees"),
                  step = to_int(range[2], "trees");
        if (step < 1 || lo > hi) throw Error(ErrorCode::kInvalidConfig, "bad trees range");
        for (int n = lo; n <= hi; n += step) trees.push_back(n);
      } else {
        for (const auto& v : split(values, ',')) trees.push_back(to_int(v, "trees"));
      }
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown grid key '" + key + "'");
    }
  }
  if (depths.empty() || trees.empty()) throw Error(ErrorCode::kInvalidConfig, "empty grid");
  std::vector<ForestHyperparams> grid;
  for (const auto& d : depths) {
    for (int n : trees) {
      if (n < 1) throw Error(ErrorCode::kInvalidConfig, "trees must be >= 1");
      grid.push_back({d, n});
    }
  }
  return grid;
}

std::vector<std::string> config_tokens(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "config line " + std::to_string(number) + " lacks '='");
    }
    tokens.push_back("--" + trim(t.substr(0, eq)) + "=" + trim(t.substr(eq + 1)));
  }
  return tokens;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string());
  }
}

std::vector<LoadedRecording> load_directory(const fs::path& dir, const LoadOptions& options) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (!entry.is_regular_file() || p.extension() != ".csv") continue;
    if (p.stem().extension() == ".annotations") continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kEmptyDataset, "no CSV files in " + dir.string());

  std::vector<LoadedRecording> loaded;
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    LoadedRecording r{load_sensor_csv(file, id, options.ingest), file};
    const fs::path notes = dir / (id + ".annotations.csv");
    if (fs::exists(notes)) {
      std::ifstream in(notes, std::ios::binary);
      r.parsed.recording = apply_annotations(std::move(r.parsed.recording), parse_annotation_csv(in));
    }
    if (options.resample && r.parsed.recording.samples.size() >= 2) {
      r.parsed.recording = resample_uniform(r.parsed.recording, options.ingest.nominal_rate_hz);
    }
    loaded.push_back(std::move(r));
  }
  return loaded;
}

Extraction extract_directory(const fs::path& dir, const LoadOptions& options,
                             const WindowingParams& params) {
  Extraction ex;
  std::vector<FeatureVector> vectors;
  for (const auto& r : load_directory(dir, options)) {
    SegmentResult seg = segment_detailed(r.parsed.recording, params);
    auto f = extract_features(seg.windows);
    vectors.insert(vectors.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
    ex.records.insert(ex.records.end(), seg.records.begin(), seg.records.end());
  }
  ex.dataset = make_dataset(std::move(vectors));
  return ex;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Stairs and lift recognition from wrist IMU and barometer data", "stairlift"};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", s.out, "Output directory")->required();
    sub->add_option("--config", s.config, "key=value file; flags given on the command line win");
    sub->add_option("--seed", s.seed, "Random seed");
  };

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic cohort of labelled recordings");
  common(synth);
  synth->add_option("--participants", s.participants, "Number of participants");
  synth->add_option("--minutes", s.minutes, "Session length per participant");
  synth->add_option("--rate", s.rate_hz, "Sample rate in Hz");
  synth->add_flag("--noiseless", s.noiseless, "Disable every noise term");

  CLI::App* extract = app.add_subcommand("extract", "Window recordings and write the feature table");
  common(extract);
  add_data_options(extract, s);
  extract->add_flag("--imu-only", s.imu_only, "Drop the pressure features");

  CLI::App* train = app.add_subcommand("train", "Fit a forest on all data and save it");
  common(train);
  add_data_options(train, s);
  add_model_options(train, s);
  train->add_option("--depth", s.depth, "Maximum depth or 'none' (skips the grid search)");
  train->add_option("--trees", s.trees, "Number of trees (skips the grid search)");

  CLI::App* loso = app.add_subcommand("loso", "Leave-one-participant-out evaluation");
  common(loso);
  add_data_options(loso, s);
  add_model_options(loso, s);

  CLI::App* importance = app.add_subcommand("importance", "Rank features of a model or LOSO summary");
  common(importance);
  importance->add_option("--model", s.model, "model.forest written by train");
  importance->add_option("--summary", s.summaries, "summary.json written by loso");

  CLI::App* report = app.add_subcommand("report", "Side-by-side metrics table of LOSO runs");
  common(report);
  report->add_option("--summary", s.summaries, "summary.json files, one per run")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (CLI::App* sub : {synth, extract, train, loso, importance, report}) {
      if (!sub->parsed()) continue;
      print_effective(out, sub);
      if (sub == synth) return cmd_synth(s, out);
      if (sub == extract) return cmd_extract(s, out);
      if (sub == train) return cmd_train(s, out);
      if (sub == loso) return cmd_loso(s, out);
      if (sub == importance) return cmd_importance(s, out);
      return cmd_report(s, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidConfig ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace stairlift::cli
