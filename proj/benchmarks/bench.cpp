#include <benchmark/benchmark.h>

#include <cmath>

#include "stairlift/features.hpp"
#include "stairlift/forest.hpp"
#include "stairlift/random.hpp"
#include "stairlift/synth.hpp"
#include "stairlift/windowing.hpp"

using namespace stairlift;

namespace {

Window make_window(std::size_t n) {
  Rng rng(1);
  Window w;
  w.label = ActivityLabel::kNull;
  for (std::size_t i = 0; i < n; ++i) {
    SensorSample s;
    s.timestamp_ms = static_cast<std::int64_t>(i) * 20;
    s.acc_x = rng.normal();
    s.acc_y = rng.normal();
    s.acc_z = rng.normal(1.0, 0.2);
    s.magnitude = compute_magnitude(s.acc_x, s.acc_y, s.acc_z);
    s.pressure = 1000.0 + rng.normal(0, 0.05);
    w.samples.push_back(s);
  }
  return w;
}

// Overlapping Gaussian classes, 26 features.
Dataset make_dataset(std::size_t rows) {
  Rng rng(2);
  Dataset d;
  d.feature_names = feature_names();
  for (std::size_t i = 0; i < rows; ++i) {
    FeatureVector v;
    v.participant_id = "P01";
    const std::size_t c = i % kNumClasses;
    v.label = label_from_ordinal(c);
    for (std::size_t f = 0; f < kNumFeatures; ++f) v.values.push_back(rng.normal(0.3 * static_cast<double>(c), 1.0));
    d.vectors.push_back(std::move(v));
  }
  return d;
}

void BM_ExtractFeatures(benchmark::State& state) {
  const Window w = make_window(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(w));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExtractFeatures)->Arg(200)->Arg(400);

void BM_SegmentSession(benchmark::State& state) {
  SynthConfig c;
  c.session_minutes = 10;
  const auto session = generate_session("P01", c);
  for (auto _ : state) benchmark::DoNotOptimize(segment(session.recording, 8.0, 8.0));
}
BENCHMARK(BM_SegmentSession)->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
  const Dataset d = make_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_forest(d, {std::nullopt, 10}, 7));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_TrainForest)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const Dataset d = make_dataset(5000);
  const TrainedForest forest = train_forest(d, {std::nullopt, 200}, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(forest, d.vectors[i++ % d.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
