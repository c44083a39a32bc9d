#include "stairlift/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "detail/text.hpp"

namespace stairlift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kSingleParticipant: return "SingleParticipant";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kLeakage: return "Leakage";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
  }
  return "Unknown";
}

ActivityLabel label_from_ordinal(std::size_t value) {
  if (value >= kNumClasses) {
    throw Error(ErrorCode::kUnknownLabel,
                "ordinal " + std::to_string(value) + " out of range");
  }
  return static_cast<ActivityLabel>(value);
}

std::string_view canonical_name(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::kNull: return "Null";
    case ActivityLabel::kLiftUp: return "Lift Up";
    case ActivityLabel::kLiftDown: return "Lift Down";
    case ActivityLabel::kStairsUp: return "Stairs Up";
    case ActivityLabel::kStairsDown: return "Stairs Down";
  }
  return "Null";
}

std::optional<ActivityLabel> try_parse_label(std::string_view text) {
  const std::string needle = detail::to_lower(detail::trim(text));
  for (auto label : kAllLabels) {
    if (needle == detail::to_lower(canonical_name(label))) return label;
  }
  return std::nullopt;
}

ActivityLabel parse_label(std::string_view text) {
  if (auto label = try_parse_label(text)) return *label;
  throw Error(ErrorCode::kUnknownLabel, "'" + std::string(text) + "'");
}

double compute_magnitude(double acc_x, double acc_y, double acc_z) {
  if (!std::isfinite(acc_x) || !std::isfinite(acc_y) || !std::isfinite(acc_z)) {
    throw Error(ErrorCode::kNonFiniteInput, "acceleration component is not finite");
  }
  // hypot avoids intermediate overflow for large device units.
  return std::hypot(acc_x, acc_y, acc_z);
}

void validate(const Recording& recording) {
  if (!(recording.nominal_rate_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "nominal rate must be positive");
  }
  for (std::size_t i = 1; i < recording.samples.size(); ++i) {
    if (recording.samples[i].timestamp_ms <= recording.samples[i - 1].timestamp_ms) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "sample " + std::to_string(i) + " of " + recording.participant_id);
    }
  }
}

}  // namespace stairlift
