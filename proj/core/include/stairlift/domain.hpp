#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stairlift/error.hpp"

namespace stairlift {

// Ordinals are part of the on-disk formats and define every tie-break.
enum class ActivityLabel : std::uint8_t {
  kNull = 0,
  kLiftUp = 1,
  kLiftDown = 2,
  kStairsUp = 3,
  kStairsDown = 4,
};

inline constexpr std::size_t kNumClasses = 5;

inline constexpr std::array<ActivityLabel, kNumClasses> kAllLabels = {
    ActivityLabel::kNull, ActivityLabel::kLiftUp, ActivityLabel::kLiftDown,
    ActivityLabel::kStairsUp, ActivityLabel::kStairsDown};

constexpr std::size_t ordinal(ActivityLabel label) {
  return static_cast<std::size_t>(label);
}

// Throws Error(kUnknownLabel) when out of range.
ActivityLabel label_from_ordinal(std::size_t ordinal);

// "Null", "Lift Up", "Lift Down", "Stairs Up", "Stairs Down".
std::string_view canonical_name(ActivityLabel label);

// Case-insensitive, whitespace-trimmed match against the canonical names.
ActivityLabel parse_label(std::string_view text);

// Same as parse_label but returns nullopt instead of throwing.
std::optional<ActivityLabel> try_parse_label(std::string_view text);

double compute_magnitude(double acc_x, double acc_y, double acc_z);

struct SensorSample {
  std::int64_t timestamp_ms = 0;
  double acc_x = 0.0;
  double acc_y = 0.0;
  double acc_z = 0.0;
  double magnitude = 0.0;
  double pressure = 0.0;
  std::optional<ActivityLabel> label;
  // Set by resampling when the sample was interpolated across a dropout.
  bool gap_filled = false;
};

struct Recording {
  std::string participant_id;
  std::vector<SensorSample> samples;
  double nominal_rate_hz = 50.0;
};

// Checks strictly increasing timestamps and a positive rate.
void validate(const Recording& recording);

}  // namespace stairlift
