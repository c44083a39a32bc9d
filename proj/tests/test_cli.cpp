#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "stairlift/ingest.hpp"

using namespace stairlift;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("stairlift_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

void write_recording(const fs::path& file, const Recording& r) {
  std::ofstream out(file);
  write_sensor_csv(out, r);
}

}  // namespace

TEST_CASE("synth writes one csv per participant plus a manifest, reproducibly") {
  TempDir tmp("synth");
  const Run a = run({"synth", "--participants", "3", "--minutes", "2", "--seed", "42", "--out", tmp / "a"});
  REQUIRE(a.code == 0);
  CHECK(count_files(tmp / "a", ".csv") == 3);
  CHECK(fs::exists(tmp / "a/manifest.json"));
  CHECK(run({"synth", "--participants", "3", "--minutes", "2", "--seed", "42", "--out", tmp / "b"}).code == 0);
  for (const auto* f : {"P01.csv", "P02.csv", "P03.csv", "manifest.json"}) {
    CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  }
  CHECK(a.out.rfind("# stairlift synth\n", 0) == 0);
}

TEST_CASE("usage errors exit non-zero") {
  TempDir tmp("usage");
  const Run zero = run({"synth", "--participants", "0", "--out", tmp / "x"});
  CHECK(zero.code != 0);
  CHECK_FALSE(zero.err.empty());
  CHECK_FALSE(fs::exists(tmp / "x/P01.csv"));
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"extract", "--out", tmp / "y", "--data", tmp / "missing"}).code != 0);
  CHECK(run({"loso", "--out", tmp / "z", "--data", tmp.path.string(), "--grid", "depth=banana"}).code == 2);
  CHECK(run({"extract", "--out", tmp / "w", "--data", tmp.path.string(), "--window", "-4"}).code != 0);
}

TEST_CASE("grid specifications") {
  CHECK(cli::parse_grid("default") == default_grid());
  const auto g = cli::parse_grid("depth=15,none;trees=10:30:10");
  REQUIRE(g.size() == 6);
  CHECK(g[0] == ForestHyperparams{15, 10});
  CHECK(g[2] == ForestHyperparams{15, 30});
  CHECK(g[3] == ForestHyperparams{std::nullopt, 10});
  CHECK(cli::parse_grid("trees=5").size() == 3);
  CHECK_THROWS_AS(cli::parse_grid("depth=0"), Error);
  CHECK_THROWS_AS(cli::parse_grid("leaves=3"), Error);
}

TEST_CASE("extract on a 480 s recording") {
  TempDir tmp("extract480");
  fs::create_directories(tmp / "data");
  write_recording(tmp.path / "data/P01.csv", fixture::uniform_recording(24000, ActivityLabel::kStairsUp, 3));
  REQUIRE(run({"extract", "--data", tmp / "data", "--window", "8", "--stride", "8", "--out", tmp / "out"}).code == 0);
  const auto rows = lines(slurp(tmp.path / "out/features.csv"));
  CHECK(rows.size() - 1 <= 60);
  CHECK(rows.size() - 1 == 60);
}

TEST_CASE("window length changes the output") {
  TempDir tmp("window");
  REQUIRE(run({"synth", "--participants", "2", "--minutes", "3", "--out", tmp / "data"}).code == 0);
  REQUIRE(run({"extract", "--data", tmp / "data", "--window", "4", "--out", tmp / "w4"}).code == 0);
  REQUIRE(run({"extract", "--data", tmp / "data", "--window", "8", "--out", tmp / "w8"}).code == 0);
  const auto f4 = slurp(tmp.path / "w4/features.csv"), f8 = slurp(tmp.path / "w8/features.csv");
  CHECK(f4 != f8);
  CHECK(lines(f4).size() > lines(f8).size());
}

TEST_CASE("discarded windows match the enumeration oracle") {
  TempDir tmp("discard");
  fs::create_directories(tmp / "data");
  // Label runs, two dropouts, and an unlabeled stretch.
  Recording r = fixture::uniform_recording(9000, ActivityLabel::kNull, 5);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    auto& s = r.samples[i];
    if (i % 1500 > 1100) s.label = ActivityLabel::kStairsDown;
    if (i > 7000 && i < 7400) s.label.reset();
  }
  std::erase_if(r.samples, [](const SensorSample& s) {
    return (s.timestamp_ms > 40000 && s.timestamp_ms < 40700) || (s.timestamp_ms > 90000 && s.timestamp_ms < 90150);
  });
  write_recording(tmp.path / "data/P07.csv", r);
  fs::create_directories(tmp / "data2");
  write_recording(tmp.path / "data2/P07.csv", fixture::uniform_recording(3000, ActivityLabel::kLiftUp, 6));

  for (const bool resample : {false, true}) {
    std::vector<std::string> args = {"extract", "--data", tmp / "data", "--window", "4", "--out", tmp / "out"};
    if (!resample) args.push_back("--no-resample");
    REQUIRE(run(args).code == 0);
    const auto rows = lines(slurp(tmp.path / "out/windows.csv"));
    std::size_t discarded = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) discarded += rows[i].find(",kept") == std::string::npos;

    std::ifstream in(tmp.path / "data/P07.csv");
    Recording parsed = parse_sensor_csv(in, "P07").recording;
    if (resample) parsed = resample_uniform(parsed, 50.0);
    const auto want = oracle::enumerate_windows(parsed.samples, 4000, 4000, 20, 200, 4, 5, 200);
    std::size_t want_discarded = 0;
    for (const auto& w : want) want_discarded += !w.kept;
    CHECK(rows.size() - 1 == want.size());
    CHECK(discarded == want_discarded);
    CHECK(discarded > 0);
  }
}

TEST_CASE("configuration precedence: flags, then file, then environment") {
  TempDir tmp("precedence");
  REQUIRE(run({"synth", "--participants", "2", "--minutes", "2", "--out", tmp / "data"}).code == 0);
  {
    std::ofstream cfg(tmp.path / "run.cfg");
    cfg << "# comment\nwindow = 4\ncoverage=0.9\n";
  }
  ::setenv(cli::kDataEnv, (tmp / "data").c_str(), 1);
  const Run r = run({"extract", "--config", tmp / "run.cfg", "--window", "8", "--out", tmp / "a"});
  ::unsetenv(cli::kDataEnv);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("#   window=8\n") != std::string::npos);
  CHECK(r.out.find("#   coverage=0.9\n") != std::string::npos);
  CHECK(r.out.find("#   data=\"" + (tmp / "data") + "\"\n") != std::string::npos);

  REQUIRE(run({"extract", "--data", tmp / "data", "--window", "8", "--coverage", "0.9", "--out", tmp / "b"}).code == 0);
  CHECK(slurp(tmp.path / "a/features.csv") == slurp(tmp.path / "b/features.csv"));
}

TEST_CASE("train, loso, importance and report") {
  TempDir tmp("pipeline");
  REQUIRE(run({"synth", "--participants", "3", "--minutes", "4", "--out", tmp / "data"}).code == 0);
  const std::vector<std::string> common = {"--data", tmp / "data", "--grid", "depth=4,none;trees=5:10:5", "--folds", "3"};

  auto with = [&](std::vector<std::string> head) {
    head.insert(head.end(), common.begin(), common.end());
    return head;
  };
  REQUIRE(run(with({"train", "--out", tmp / "model"})).code == 0);
  CHECK(fs::exists(tmp / "model/model.forest"));
  CHECK(fs::exists(tmp / "model/importance.csv"));
  REQUIRE(run({"importance", "--model", tmp / "model/model.forest", "--out", tmp / "imp"}).code == 0);
  CHECK(slurp(tmp.path / "imp/importance.csv") == slurp(tmp.path / "model/importance.csv"));

  const Run a = run(with({"loso", "--out", tmp / "l1"}));
  REQUIRE(a.code == 0);
  REQUIRE(run(with({"loso", "--out", tmp / "l2"})).code == 0);
  for (const auto* f : {"summary.json", "confusion.csv", "importance.csv", "folds.txt", "table.txt",
                        "importance.svg", "confusion.svg"}) {
    INFO(f);
    CHECK(fs::exists(tmp.path / "l1" / f));
    CHECK(slurp(tmp.path / "l1" / f) == slurp(tmp.path / "l2" / f));
  }
  REQUIRE(run(with({"loso", "--imu-only", "--out", tmp / "l3"})).code == 0);
  REQUIRE(run({"report", "--summary", tmp / "l1/summary.json", "--summary", tmp / "l3/summary.json", "--out",
               tmp / "rep"})
              .code == 0);
  const auto table = slurp(tmp.path / "rep/table.txt");
  CHECK(table.find("Accuracy") != std::string::npos);
  CHECK(lines(slurp(tmp.path / "l1/folds.txt")).size() >= 3);

  // Nothing but the requested outputs appears next to the inputs.
  CHECK(count_files(tmp / "data", ".csv") == 3);
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp / "data")) ++entries;
  CHECK(entries == 4);
}
