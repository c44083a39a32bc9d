#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stairlift/dataset.hpp"
#include "stairlift/domain.hpp"
#include "stairlift/random.hpp"

namespace fixture {

using namespace stairlift;

inline SensorSample sample(std::int64_t t_ms, double x, double y, double z, double p,
                           std::optional<ActivityLabel> label = std::nullopt) {
  SensorSample s;
  s.timestamp_ms = t_ms;
  s.acc_x = x;
  s.acc_y = y;
  s.acc_z = z;
  s.magnitude = std::sqrt(x * x + y * y + z * z);
  s.pressure = p;
  s.label = label;
  return s;
}

// n samples at `period_ms`, random-ish channels, one label throughout.
inline Recording uniform_recording(std::size_t n, std::optional<ActivityLabel> label,
                                   std::uint64_t seed = 1, std::int64_t period_ms = 20,
                                   const std::string& id = "P01") {
  Rng rng(seed);
  Recording r;
  r.participant_id = id;
  r.nominal_rate_hz = 1000.0 / static_cast<double>(period_ms);
  for (std::size_t i = 0; i < n; ++i) {
    r.samples.push_back(sample(static_cast<std::int64_t>(i) * period_ms, rng.normal(0, 0.3),
                               rng.normal(0, 0.3), 1.0 + rng.normal(0, 0.3),
                               1000.0 + rng.normal(0, 0.05), label));
  }
  return r;
}

inline FeatureVector vec(std::string id, std::vector<double> values, ActivityLabel label,
                         std::int64_t start = 0) {
  FeatureVector v;
  v.participant_id = std::move(id);
  v.start_ms = start;
  v.values = std::move(values);
  v.label = label;
  return v;
}

// Dataset with generic feature names, for forest and balance tests.
inline Dataset dataset(std::vector<FeatureVector> vectors) {
  Dataset d;
  const std::size_t arity = vectors.empty() ? 0 : vectors.front().values.size();
  for (std::size_t i = 0; i < arity; ++i) d.feature_names.push_back("f" + std::to_string(i));
  d.vectors = std::move(vectors);
  return d;
}

// Gaussian blobs: class c centred at c along every axis, plus noise.
inline Dataset blobs(std::size_t per_class, std::size_t classes, std::size_t dims, double noise,
                     std::uint64_t seed, std::size_t participants = 1) {
  Rng rng(seed);
  std::vector<FeatureVector> v;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<double> x(dims);
      for (auto& xi : x) xi = static_cast<double>(c) + rng.normal(0, noise);
      v.push_back(vec("P" + std::to_string(i % participants), x, label_from_ordinal(c),
                      static_cast<std::int64_t>(i)));
    }
  }
  return dataset(std::move(v));
}

// Label runs, dropouts of assorted lengths and a few gap-filled stretches.
inline Recording messy_recording(std::uint64_t seed) {
  Rng rng(seed);
  Recording r;
  r.participant_id = "P" + std::to_string(seed);
  const std::size_t n = 1500 + rng.uniform_index(3000);
  std::optional<ActivityLabel> label = ActivityLabel::kNull;
  std::size_t run_left = 0;
  std::int64_t t = static_cast<std::int64_t>(rng.uniform_index(5000));
  bool filling = false;
  std::size_t fill_left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (run_left == 0) {
      run_left = 1 + rng.uniform_index(700);
      const auto pick = rng.uniform_index(7);
      label = pick >= 5 ? std::nullopt : std::optional(label_from_ordinal(pick));
    }
    --run_left;
    if (rng.uniform() < 0.004) t += 20 * static_cast<std::int64_t>(1 + rng.uniform_index(30));
    if (!filling && rng.uniform() < 0.002) {
      filling = true;
      fill_left = 1 + rng.uniform_index(15);
    }
    auto s = sample(t, rng.normal(), rng.normal(), rng.normal(), 1000, label);
    if (filling) {
      s.gap_filled = true;
      s.label.reset();
      if (--fill_left == 0) filling = false;
    }
    r.samples.push_back(s);
    t += 20;
  }
  return r;
}

}  // namespace fixture
