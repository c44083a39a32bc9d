#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stairlift/domain.hpp"
#include "stairlift/windowing.hpp"

namespace stairlift {

inline constexpr std::size_t kNumFeatures = 26;
inline constexpr std::size_t kNumPressureFeatures = 6;
inline constexpr std::size_t kNumImuFeatures = kNumFeatures - kNumPressureFeatures;

// Fixed order used everywhere (extraction, training, importances, files):
// avg/min/max/var/std for accX, accY, accZ, magnitude, then the six
// pressure statistics. Pressure features occupy the last six slots.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "avg_accX",       "min_accX",          "max_accX",      "var_accX",
    "std_accX",       "avg_accY",          "min_accY",      "max_accY",
    "var_accY",       "std_accY",          "avg_accZ",      "min_accZ",
    "max_accZ",       "var_accZ",          "std_accZ",      "avg_magnitude",
    "min_magnitude",  "max_magnitude",     "var_magnitude", "std_magnitude",
    "std_pressure",   "var_pressure",      "range_pressure", "slope_pressure",
    "kurtosis_pressure", "skew_pressure"};

std::vector<std::string> feature_names();
std::vector<std::string> imu_feature_names();
bool is_pressure_feature(std::string_view name);

struct FeatureVector {
  std::string participant_id;
  std::int64_t start_ms = 0;
  std::vector<double> values;
  std::optional<ActivityLabel> label;
};

// Population moments; kurtosis is excess (g2) and both skewness and kurtosis
// are 0 for a constant series.
double mean(std::span<const double> values);
double variance(std::span<const double> values);
double skewness(std::span<const double> values);
double kurtosis(std::span<const double> values);

// Least-squares slope of value against time in seconds.
double slope(std::span<const double> values, std::span<const std::int64_t> timestamps_ms);

FeatureVector extract_features(const Window& window);
std::vector<FeatureVector> extract_features(std::span<const Window> windows);

// Drops the six pressure features. Vectors already at the IMU arity are
// returned unchanged.
std::vector<FeatureVector> ablate_pressure(std::span<const FeatureVector> vectors);

}  // namespace stairlift
