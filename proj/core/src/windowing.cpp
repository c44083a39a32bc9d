#include "stairlift/windowing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace stairlift {

std::optional<ActivityLabel> resolve_label(std::span<const SensorSample> samples,
                                           double coverage_threshold) {
  if (samples.empty()) return std::nullopt;
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& s : samples) {
    if (s.label) ++counts[ordinal(*s.label)];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  if (counts[best] == 0) return std::nullopt;
  // Small slack so thresholds like 0.8 * 400 are not lost to rounding.
  const double needed = coverage_threshold * static_cast<double>(samples.size());
  if (static_cast<double>(counts[best]) + 1e-9 < needed) return std::nullopt;
  return label_from_ordinal(best);
}

SegmentResult segment_detailed(const Recording& recording, const WindowingParams& params) {
  if (!(params.window_s > 0.0) || !(params.stride_s > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "window and stride must be positive");
  }
  if (!(params.coverage_threshold > 0.0) || params.coverage_threshold > 1.0) {
    throw Error(ErrorCode::kInvalidParams, "coverage threshold must be in (0, 1]");
  }
  if (!(params.min_fill >= 0.0) || params.min_fill > 1.0) {
    throw Error(ErrorCode::kInvalidParams, "min_fill must be in [0, 1]");
  }
  validate(recording);

  SegmentResult result;
  const auto& samples = recording.samples;
  if (samples.empty()) return result;

  const double rate = recording.nominal_rate_hz;
  const double window_ms = params.window_s * 1000.0;
  const double stride_ms = params.stride_s * 1000.0;
  const double period_ms = 1000.0 / rate;
  const auto expected = static_cast<double>(std::llround(params.window_s * rate));
  const double min_count = params.min_fill * expected;

  const std::int64_t t0 = samples.front().timestamp_ms;
  // The recording covers [t0, last + one period).
  const double covered_end = static_cast<double>(samples.back().timestamp_ms) + period_ms;

  std::size_t first = 0;
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t start = t0 + std::llround(static_cast<double>(k) * stride_ms);
    const std::int64_t end = start + std::llround(window_ms);
    if (static_cast<double>(end) > covered_end + 1e-9) break;

    while (first < samples.size() && samples[first].timestamp_ms < start) ++first;
    std::size_t last = first;
    while (last < samples.size() && samples[last].timestamp_ms < end) ++last;
    std::span<const SensorSample> slice(samples.data() + first, last - first);

    WindowRecord record;
    record.participant_id = recording.participant_id;
    record.start_ms = start;
    record.end_ms = end;
    record.sample_count = slice.size();

    bool gap = false;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (slice[i].gap_filled) gap = true;
      if (i > 0 && slice[i].timestamp_ms - slice[i - 1].timestamp_ms > params.gap_max_ms) gap = true;
    }

    if (static_cast<double>(slice.size()) + 1e-9 < min_count || slice.size() < 2) {
      record.fate = WindowFate::kTooShort;
    } else if (gap) {
      record.fate = WindowFate::kGap;
    } else {
      record.label = resolve_label(slice, params.coverage_threshold);
      record.fate = record.label ? WindowFate::kKept : WindowFate::kNoMajority;
    }

    if (record.fate == WindowFate::kKept) {
      Window w;
      w.participant_id = recording.participant_id;
      w.start_ms = start;
      w.end_ms = end;
      w.samples.assign(slice.begin(), slice.end());
      w.label = record.label;
      result.windows.push_back(std::move(w));
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<Window> segment(const Recording& recording, const WindowingParams& params) {
  return segment_detailed(recording, params).windows;
}

std::vector<Window> segment(const Recording& recording, double window_s, double stride_s) {
  WindowingParams params;
  params.window_s = window_s;
  params.stride_s = stride_s;
  return segment(recording, params);
}

std::string_view to_string(WindowFate fate) {
  switch (fate) {
    case WindowFate::kKept: return "kept";
    case WindowFate::kTooShort: return "too_short";
    case WindowFate::kGap: return "gap";
    case WindowFate::kNoMajority: return "no_majority";
  }
  return "kept";
}

void write_windows_csv(std::ostream& out, std::span<const WindowRecord> records) {
  out << "participant_id,start_ms,end_ms,label,sample_count,status\n";
  for (const auto& r : records) {
    out << r.participant_id << ',' << r.start_ms << ',' << r.end_ms << ','
        << (r.label ? canonical_name(*r.label) : std::string_view()) << ',' << r.sample_count
        << ',' << to_string(r.fate) << '\n';
  }
}

}  // namespace stairlift
