#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stairlift/balance.hpp"
#include "stairlift/evaluation.hpp"
#include "stairlift/report.hpp"

using namespace stairlift;

namespace {

constexpr auto A = ActivityLabel::kNull;
constexpr auto B = ActivityLabel::kLiftUp;

LosoConfig small_config() {
  LosoConfig c;
  c.grid = {{3, 5}, {std::nullopt, 5}, {std::nullopt, 9}};
  c.inner_folds = 3;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("metric examples") {
  SUBCASE("perfect") {
    const std::vector<ActivityLabel> t = {A, B, ActivityLabel::kStairsDown, A};
    const auto m = compute_metrics(t, t);
    CHECK(m.accuracy == 1.0);
    CHECK(m.f1_micro == 1.0);
    CHECK(m.f1_weighted == 1.0);
    for (std::size_t i = 0; i < kNumClasses; ++i) {
      for (std::size_t j = 0; j < kNumClasses; ++j) {
        if (i != j) CHECK(m.confusion[i][j] == 0);
      }
    }
    CHECK(m.confusion[0][0] == 2);
    // Absent classes score 0 and still count in the macro mean.
    CHECK(m.f1_macro == doctest::Approx(3.0 / 5.0));
  }
  SUBCASE("two classes, half right") {
    const std::vector<ActivityLabel> t = {A, A, B, B}, p = {A, B, A, B};
    const auto m = compute_metrics(t, p);
    CHECK(m.accuracy == 0.5);
    CHECK(m.f1_per_class[0] == 0.5);
    CHECK(m.f1_per_class[1] == 0.5);
    CHECK(m.f1_weighted == 0.5);
    CHECK(m.f1_micro == 0.5);
    CHECK(m.support[0] == 2);
    CHECK(m.total() == 4);
  }
  SUBCASE("errors") {
    const std::vector<ActivityLabel> t = {A, B}, p = {A};
    CHECK_THROWS_AS(compute_metrics(t, p), Error);
    CHECK_THROWS_AS(compute_metrics(std::vector<ActivityLabel>{}, std::vector<ActivityLabel>{}), Error);
  }
}

TEST_CASE("metrics agree with a from-definition counting oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ActivityLabel> t(500), p(500);
    for (std::size_t i = 0; i < 500; ++i) {
      t[i] = label_from_ordinal(rng.uniform_index(trial % 2 ? 5 : 3));
      p[i] = rng.uniform() < 0.6 ? t[i] : label_from_ordinal(rng.uniform_index(5));
    }
    const auto m = compute_metrics(t, p);
    const auto o = oracle::count_metrics(t, p);
    CHECK(std::fabs(m.accuracy - o.accuracy) <= 1e-12);
    CHECK(std::fabs(m.f1_micro - o.micro) <= 1e-12);
    CHECK(std::fabs(m.f1_macro - o.macro) <= 1e-12);
    CHECK(std::fabs(m.f1_weighted - o.weighted) <= 1e-12);
    CHECK(std::fabs(m.f1_micro - m.accuracy) <= 1e-12);
    for (std::size_t c = 0; c < kNumClasses; ++c) CHECK(std::fabs(m.f1_per_class[c] - o.f1[c]) <= 1e-12);
    std::size_t total = 0;
    for (const auto& row : m.confusion) total = std::accumulate(row.begin(), row.end(), total);
    CHECK(total == 500);
  }
}

TEST_CASE("loso splits") {
  SUBCASE("20 participants") {
    const Dataset d = fixture::blobs(40, 2, 2, 1.0, 1, 20);
    const auto splits = loso_splits(d);
    REQUIRE(splits.size() == 20);
    std::multiset<std::int64_t> seen;
    for (std::size_t i = 0; i < splits.size(); ++i) {
      const auto& s = splits[i];
      CHECK(participants(s.train).size() == 19);
      CHECK(participants(s.test) == std::vector<std::string>{s.held_out_id});
      CHECK(s.train.size() + s.test.size() == d.size());
      if (i > 0) CHECK(splits[i - 1].held_out_id < s.held_out_id);
      for (const auto& v : s.test.vectors) seen.insert(v.start_ms * 100 + static_cast<std::int64_t>(*v.label));
    }
    // Test sets tile the dataset.
    CHECK(seen.size() == d.size());
    CHECK(std::set<std::int64_t>(seen.begin(), seen.end()).size() == d.size());
  }
  SUBCASE("2 participants are complementary") {
    const Dataset d = fixture::blobs(6, 2, 2, 1.0, 2, 2);
    const auto s = loso_splits(d);
    REQUIRE(s.size() == 2);
    CHECK(s[0].train.size() == s[1].test.size());
    CHECK(s[0].test.size() == s[1].train.size());
  }
  SUBCASE("one participant") {
    const Dataset d = fixture::blobs(6, 2, 2, 1.0, 2, 1);
    try {
      loso_splits(d);
      FAIL("expected SingleParticipant");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSingleParticipant);
    }
  }
}

TEST_CASE("a loso fold replays by hand") {
  const Dataset d = fixture::blobs(24, 5, 6, 1.4, 31, 3);
  const LosoConfig config = small_config();
  std::size_t callbacks = 0;
  const auto report = run_loso(d, config, [&](const FoldResult&, std::size_t i, std::size_t total) {
    CHECK(i == callbacks);
    CHECK(total == 3);
    ++callbacks;
  });
  CHECK(callbacks == 3);
  REQUIRE(report.folds.size() == 3);

  const auto splits = loso_splits(d);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const auto& split = splits[i];
    // Only training participants ever reach the search, sampler and forest.
    for (const auto& v : split.train.vectors) REQUIRE(v.participant_id != split.held_out_id);
    const auto seeds = fold_seeds(config.seed, i);
    const auto best = grid_search(split.train, config.grid, config.inner_folds, seeds.grid).best;
    const auto forest = train_forest(random_oversample(split.train, seeds.oversample), best, seeds.forest);
    std::vector<ActivityLabel> truth, pred;
    for (const auto& v : split.test.vectors) {
      truth.push_back(*v.label);
      pred.push_back(oracle::forest_vote(forest, v.values));
    }
    const auto m = compute_metrics(truth, pred);
    const auto& fold = report.folds[i];
    CHECK(fold.participant_id == split.held_out_id);
    CHECK(fold.chosen == best);
    CHECK(fold.metrics.accuracy == m.accuracy);
    CHECK(fold.metrics.f1_macro == m.f1_macro);
    CHECK(fold.metrics.f1_weighted == m.f1_weighted);
    CHECK(fold.metrics.confusion == m.confusion);
    CHECK(fold.importances == feature_importances(forest));
    CHECK(fold.train_vectors == split.train.size());
    CHECK(fold.test_vectors == split.test.size());
  }
}

TEST_CASE("property: report aggregates") {
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    Dataset d = fixture::blobs(20, 5, 26, 2.0, seed, 4);
    d.feature_names = feature_names();
    LosoConfig config = small_config();
    config.seed = seed;
    config.imu_only = seed % 2 == 0;
    const auto r = run_loso(d, config);
    CHECK(r.feature_names.size() == (config.imu_only ? 20u : 26u));
    double acc = 0, macro = 0, weighted = 0;
    std::size_t windows = 0, confusion_total = 0;
    for (const auto& f : r.folds) {
      CHECK(std::fabs(f.metrics.f1_micro - f.metrics.accuracy) <= 1e-12);
      acc += f.metrics.accuracy;
      macro += f.metrics.f1_macro;
      weighted += f.metrics.f1_weighted;
      windows += f.test_vectors;
    }
    const double n = static_cast<double>(r.folds.size());
    CHECK(std::fabs(r.aggregate.accuracy - acc / n) <= 1e-12);
    CHECK(std::fabs(r.aggregate.f1_macro - macro / n) <= 1e-12);
    CHECK(std::fabs(r.aggregate.f1_weighted - weighted / n) <= 1e-12);
    CHECK(std::fabs(r.aggregate.f1_micro - r.aggregate.accuracy) <= 1e-12);
    for (const auto& row : r.aggregate.confusion) confusion_total = std::accumulate(row.begin(), row.end(), confusion_total);
    CHECK(confusion_total == windows);
    CHECK(windows == d.size());
    for (double x : r.mean_importances) CHECK(x >= 0.0);
    CHECK(std::fabs(std::accumulate(r.mean_importances.begin(), r.mean_importances.end(), 0.0) - 1.0) <= 1e-9);

    // Same inputs, same report bytes.
    std::ostringstream a, b;
    write_summary_json(a, r);
    write_summary_json(b, run_loso(d, config));
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("summary json round-trips") {
  const Dataset d = fixture::blobs(15, 5, 26, 1.5, 70, 3);
  const auto r = run_loso(d, small_config());
  std::stringstream buf;
  write_summary_json(buf, r);
  const auto back = read_summary_json(buf);
  CHECK(back.folds.size() == r.folds.size());
  CHECK(back.aggregate.f1_macro == r.aggregate.f1_macro);
  CHECK(back.mean_importances == r.mean_importances);
  CHECK(back.feature_names == r.feature_names);
  std::ostringstream again;
  write_summary_json(again, back);
  CHECK(again.str() == buf.str());
}

TEST_CASE("report rendering") {
  const std::vector<std::string> names = {"a", "b", "c"};
  const std::vector<double> scores = {0.2, 0.5, 0.2};
  const auto ranked = ranked_importances(names, scores);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].first == "b");
  CHECK(ranked[1].first == "a");
  CHECK(ranked[2].first == "c");
  std::ostringstream csv;
  write_importance_csv(csv, names, scores);
  CHECK(csv.str().rfind("feature,score\nb,", 0) == 0);

  ConfusionMatrix cm{};
  cm[0][0] = 3;
  cm[1][0] = 1;
  std::ostringstream c;
  write_confusion_csv(c, cm);
  CHECK(c.str().find("Null") != std::string::npos);
  CHECK(render_confusion_svg(cm).rfind("<svg", 0) == 0);
  CHECK(render_importance_svg(names, scores).find("</svg>") != std::string::npos);
}
