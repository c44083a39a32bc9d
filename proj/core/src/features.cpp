#include "stairlift/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stairlift {
namespace {

// Single-pass central moments (Terriberry's extension of Welford's update).
class Moments {
 public:
  void push(double raw) {
    min_ = std::min(min_, raw);
    max_ = std::max(max_, raw);
    // Moments of (raw - first) keep full precision for offset-heavy channels
    // such as pressure.
    if (n_ == 0) origin_ = raw;
    const double x = raw - origin_;
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
  }

  std::size_t count() const { return n_; }
  double mean() const { return origin_ + mean_; }
  double min() const { return min_; }
  double max() const { return max_; }
  double variance() const { return n_ == 0 ? 0.0 : m2_ / static_cast<double>(n_); }

  double skewness() const {
    if (m2_ <= 0.0) return 0.0;
    const double n = static_cast<double>(n_);
    return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
  }

  double kurtosis() const {
    if (m2_ <= 0.0) return 0.0;
    const double n = static_cast<double>(n_);
    return n * m4_ / (m2_ * m2_) - 3.0;
  }

 private:
  std::size_t n_ = 0;
  double origin_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

// Online covariance of (t, v) for the least-squares slope.
class LineFit {
 public:
  void push(double t, double v) {
    if (n_ == 0) v0_ = v;
    v -= v0_;  // same offset trick as Moments
    ++n_;
    const double n = static_cast<double>(n_);
    const double dt = t - mean_t_;
    mean_t_ += dt / n;
    mean_v_ += (v - mean_v_) / n;
    ctt_ += dt * (t - mean_t_);
    ctv_ += dt * (v - mean_v_);
  }

  double slope() const { return ctt_ > 0.0 ? ctv_ / ctt_ : 0.0; }

 private:
  std::size_t n_ = 0;
  double v0_ = 0.0;
  double mean_t_ = 0.0;
  double mean_v_ = 0.0;
  double ctt_ = 0.0;
  double ctv_ = 0.0;
};

void require_two(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kTooFewSamples, "need at least 2 values");
}

Moments moments_of(std::span<const double> values) {
  Moments m;
  for (double v : values) m.push(v);
  return m;
}

void append_basic(std::vector<double>& out, const Moments& m) {
  const double var = m.variance();
  out.push_back(m.mean());
  out.push_back(m.min());
  out.push_back(m.max());
  out.push_back(var);
  out.push_back(std::sqrt(var));
}

}  // namespace

std::vector<std::string> feature_names() {
  return {kFeatureNames.begin(), kFeatureNames.end()};
}

std::vector<std::string> imu_feature_names() {
  return {kFeatureNames.begin(), kFeatureNames.begin() + kNumImuFeatures};
}

bool is_pressure_feature(std::string_view name) {
  return name.ends_with("_pressure");
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kTooFewSamples, "mean of empty series");
  return moments_of(values).mean();
}

double variance(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kTooFewSamples, "variance of empty series");
  return moments_of(values).variance();
}

double skewness(std::span<const double> values) {
  require_two(values.size());
  return moments_of(values).skewness();
}

double kurtosis(std::span<const double> values) {
  require_two(values.size());
  return moments_of(values).kurtosis();
}

double slope(std::span<const double> values, std::span<const std::int64_t> timestamps_ms) {
  if (values.size() != timestamps_ms.size()) {
    throw Error(ErrorCode::kLengthMismatch, "values and timestamps differ in length");
  }
  require_two(values.size());
  LineFit fit;
  const std::int64_t t0 = timestamps_ms.front();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && timestamps_ms[i] <= timestamps_ms[i - 1]) {
      throw Error(ErrorCode::kNonMonotonicTime, "slope needs strictly increasing time");
    }
    fit.push(static_cast<double>(timestamps_ms[i] - t0) / 1000.0, values[i]);
  }
  return fit.slope();
}

FeatureVector extract_features(const Window& window) {
  require_two(window.samples.size());
  Moments x, y, z, mag, p;
  LineFit p_fit;
  const std::int64_t t0 = window.samples.front().timestamp_ms;
  for (const auto& s : window.samples) {
    x.push(s.acc_x);
    y.push(s.acc_y);
    z.push(s.acc_z);
    mag.push(s.magnitude);
    p.push(s.pressure);
    p_fit.push(static_cast<double>(s.timestamp_ms - t0) / 1000.0, s.pressure);
  }

  FeatureVector fv;
  fv.participant_id = window.participant_id;
  fv.start_ms = window.start_ms;
  fv.label = window.label;
  fv.values.reserve(kNumFeatures);
  append_basic(fv.values, x);
  append_basic(fv.values, y);
  append_basic(fv.values, z);
  append_basic(fv.values, mag);
  const double var_p = p.variance();
  fv.values.push_back(std::sqrt(var_p));
  fv.values.push_back(var_p);
  fv.values.push_back(p.max() - p.min());
  fv.values.push_back(p_fit.slope());
  fv.values.push_back(p.kurtosis());
  fv.values.push_back(p.skewness());
  return fv;
}

std::vector<FeatureVector> extract_features(std::span<const Window> windows) {
  std::vector<FeatureVector> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(extract_features(w));
  return out;
}

std::vector<FeatureVector> ablate_pressure(std::span<const FeatureVector> vectors) {
  std::vector<FeatureVector> out(vectors.begin(), vectors.end());
  for (auto& v : out) {
    if (v.values.size() == kNumFeatures) {
      v.values.resize(kNumImuFeatures);
    } else if (v.values.size() != kNumImuFeatures) {
      throw Error(ErrorCode::kArityMismatch,
                  "expected 26 or 20 features, got " + std::to_string(v.values.size()));
    }
  }
  return out;
}

}  // namespace stairlift
