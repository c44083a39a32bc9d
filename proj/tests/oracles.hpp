#pragma once
// Slow, from-definition reference implementations used as test oracles.
// Nothing here calls into the library code it is checking.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stairlift/domain.hpp"
#include "stairlift/forest.hpp"
#include "stairlift/random.hpp"

namespace oracle {

using stairlift::ActivityLabel;
using stairlift::SensorSample;

inline long double ld_mean(const std::vector<long double>& v) {
  long double s = 0;
  for (auto x : v) s += x;
  return s / static_cast<long double>(v.size());
}

inline long double central_moment(const std::vector<long double>& v, int order) {
  const long double m = ld_mean(v);
  long double s = 0;
  for (auto x : v) s += std::pow(x - m, static_cast<long double>(order));
  return s / static_cast<long double>(v.size());
}

inline long double skew(const std::vector<long double>& v) {
  const long double m2 = central_moment(v, 2);
  if (m2 == 0) return 0;
  return central_moment(v, 3) / std::pow(m2, 1.5L);
}

inline long double excess_kurtosis(const std::vector<long double>& v) {
  const long double m2 = central_moment(v, 2);
  if (m2 == 0) return 0;
  return central_moment(v, 4) / (m2 * m2) - 3.0L;
}

// Closed-form OLS: sum (t - tbar)(p - pbar) / sum (t - tbar)^2, t in seconds.
inline long double ols_slope(const std::vector<long double>& t, const std::vector<long double>& p) {
  const long double tb = ld_mean(t), pb = ld_mean(p);
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - tb) * (p[i] - pb);
    den += (t[i] - tb) * (t[i] - tb);
  }
  return den == 0 ? 0 : num / den;
}

inline long double norm(long double x, long double y, long double z) {
  return std::sqrt(x * x + y * y + z * z);
}

// The 26 features in the documented channel-grouped order.
inline std::vector<long double> features(const std::vector<SensorSample>& w) {
  std::array<std::vector<long double>, 4> ch;
  std::vector<long double> p, t;
  for (const auto& s : w) {
    ch[0].push_back(s.acc_x);
    ch[1].push_back(s.acc_y);
    ch[2].push_back(s.acc_z);
    ch[3].push_back(s.magnitude);
    p.push_back(s.pressure);
    t.push_back(static_cast<long double>(s.timestamp_ms) / 1000.0L);
  }
  std::vector<long double> out;
  for (const auto& c : ch) {
    const long double var = central_moment(c, 2);
    out.push_back(ld_mean(c));
    out.push_back(*std::min_element(c.begin(), c.end()));
    out.push_back(*std::max_element(c.begin(), c.end()));
    out.push_back(var);
    out.push_back(std::sqrt(var));
  }
  const long double pvar = central_moment(p, 2);
  out.push_back(std::sqrt(pvar));
  out.push_back(pvar);
  out.push_back(*std::max_element(p.begin(), p.end()) - *std::min_element(p.begin(), p.end()));
  out.push_back(ols_slope(t, p));
  out.push_back(excess_kurtosis(p));
  out.push_back(skew(p));
  return out;
}

// Piecewise-linear value of (t_i, v_i) at time t, t inside the span.
inline long double interpolate(const std::vector<long double>& ts, const std::vector<long double>& vs,
                               long double t) {
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (t >= ts[i] && t <= ts[i + 1]) {
      if (ts[i + 1] == ts[i]) return vs[i];
      return vs[i] + (vs[i + 1] - vs[i]) * (t - ts[i]) / (ts[i + 1] - ts[i]);
    }
  }
  return vs.back();
}

struct WindowVerdict {
  std::int64_t start_ms = 0;
  std::size_t samples = 0;
  bool kept = false;
  std::optional<ActivityLabel> label;
};

// Enumerates windows [t0 + k*stride, +window) while the window end stays within
// the recording's covered span (last timestamp + one period). Every sample is
// tested against every window. Coverage is compared exactly as
// den * count >= num * n for coverage = num / den.
inline std::vector<WindowVerdict> enumerate_windows(const std::vector<SensorSample>& samples,
                                                    std::int64_t window_ms, std::int64_t stride_ms,
                                                    std::int64_t period_ms, std::size_t expected,
                                                    long long cov_num, long long cov_den,
                                                    std::int64_t gap_max_ms) {
  std::vector<WindowVerdict> out;
  if (samples.empty()) return out;
  const std::int64_t t0 = samples.front().timestamp_ms;
  const std::int64_t covered_end = samples.back().timestamp_ms + period_ms;
  for (std::int64_t k = 0; t0 + k * stride_ms + window_ms <= covered_end; ++k) {
    const std::int64_t a = t0 + k * stride_ms, b = a + window_ms;
    std::vector<SensorSample> in;
    for (const auto& s : samples) {
      if (s.timestamp_ms >= a && s.timestamp_ms < b) in.push_back(s);
    }
    WindowVerdict v;
    v.start_ms = a;
    v.samples = in.size();
    // 95 % fill, compared in integers: 20 * n >= 19 * expected.
    bool ok = in.size() >= 2 && 20 * in.size() >= 19 * expected;
    for (std::size_t i = 0; ok && i < in.size(); ++i) {
      if (in[i].gap_filled) ok = false;
      if (i > 0 && in[i].timestamp_ms - in[i - 1].timestamp_ms > gap_max_ms) ok = false;
    }
    if (ok) {
      std::map<int, long long> counts;
      for (const auto& s : in) {
        if (s.label) ++counts[static_cast<int>(*s.label)];
      }
      int best = -1;
      long long best_count = 0;
      for (const auto& [label, c] : counts) {
        if (c > best_count) {  // map order is ascending ordinal: ties keep the lower
          best = label;
          best_count = c;
        }
      }
      const long long n = static_cast<long long>(in.size());
      if (best >= 0 && cov_den * best_count >= cov_num * n) {
        v.kept = true;
        v.label = static_cast<ActivityLabel>(best);
      }
    }
    out.push_back(v);
  }
  return out;
}

// Per-tree traversal from the root, then a plain vote tally.
inline ActivityLabel forest_vote(const stairlift::TrainedForest& forest, const std::vector<double>& x) {
  std::array<int, stairlift::kNumClasses> votes{};
  for (const auto& tree : forest.trees) {
    std::size_t i = 0;
    while (tree.nodes[i].feature >= 0) {
      const auto& n = tree.nodes[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    ++votes[static_cast<std::size_t>(tree.nodes[i].predicted)];
  }
  int best = 0;
  for (int c = 1; c < static_cast<int>(votes.size()); ++c) {
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
  }
  return static_cast<ActivityLabel>(best);
}

struct CountedMetrics {
  double accuracy = 0, micro = 0, macro = 0, weighted = 0;
  std::array<double, stairlift::kNumClasses> f1{};
};

// From-definition metrics: tp/fp/fn counted per class by direct comparison.
inline CountedMetrics count_metrics(const std::vector<ActivityLabel>& truth,
                                    const std::vector<ActivityLabel>& pred) {
  CountedMetrics m;
  const std::size_t n = truth.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
  m.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  long double tp_all = 0, fp_all = 0, fn_all = 0, weighted = 0, macro = 0;
  for (std::size_t c = 0; c < stairlift::kNumClasses; ++c) {
    long double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool t = static_cast<std::size_t>(truth[i]) == c;
      const bool p = static_cast<std::size_t>(pred[i]) == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    const long double f1 = (2 * tp + fp + fn) == 0 ? 0 : 2 * tp / (2 * tp + fp + fn);
    m.f1[c] = static_cast<double>(f1);
    macro += f1;
    weighted += f1 * (tp + fn);
  }
  m.micro = static_cast<double>(2 * tp_all / (2 * tp_all + fp_all + fn_all));
  m.macro = static_cast<double>(macro / stairlift::kNumClasses);
  m.weighted = static_cast<double>(weighted / static_cast<long double>(n));
  return m;
}

inline double rel_err(long double got, long double want) {
  const long double scale = std::max<long double>(1.0L, std::fabs(want));
  return static_cast<double>(std::fabs(got - want) / scale);
}

}  // namespace oracle
