#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stairlift/domain.hpp"

namespace stairlift {

struct Window {
  std::string participant_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;  // exclusive
  std::vector<SensorSample> samples;
  std::optional<ActivityLabel> label;
};

struct WindowingParams {
  double window_s = 8.0;
  double stride_s = 8.0;
  // Modal label must cover at least this share of the window's samples (inclusive).
  double coverage_threshold = 0.80;
  // Minimum share of round(window_s * rate) samples a window must hold.
  double min_fill = 0.95;
  std::int64_t gap_max_ms = 200;
};

enum class WindowFate { kKept, kTooShort, kGap, kNoMajority };

// One entry per candidate window, kept or not; lets callers audit discards.
struct WindowRecord {
  std::string participant_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::size_t sample_count = 0;
  std::optional<ActivityLabel> label;
  WindowFate fate = WindowFate::kKept;
};

struct SegmentResult {
  std::vector<Window> windows;
  std::vector<WindowRecord> records;

  std::size_t kept() const { return windows.size(); }
  std::size_t discarded() const { return records.size() - windows.size(); }
};

// Returns the modal label (ties to the lowest ordinal) if it covers at least
// coverage_threshold of all samples; unlabeled samples count in the
// denominator only.
std::optional<ActivityLabel> resolve_label(std::span<const SensorSample> samples,
                                           double coverage_threshold);

// Candidate windows start at t0 + k * stride. A window is kept when it holds
// enough samples, has no internal gap above gap_max_ms, contains no
// gap-filled samples, and resolves to a label.
SegmentResult segment_detailed(const Recording& recording, const WindowingParams& params);

std::vector<Window> segment(const Recording& recording, double window_s, double stride_s);
std::vector<Window> segment(const Recording& recording, const WindowingParams& params);

std::string_view to_string(WindowFate fate);

// participant_id,start_ms,end_ms,label,sample_count,status
void write_windows_csv(std::ostream& out, std::span<const WindowRecord> records);

}  // namespace stairlift
