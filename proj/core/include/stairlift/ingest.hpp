#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stairlift/domain.hpp"

namespace stairlift {

// Column names of the sensor CSV. Defaults are the published dataset's header.
struct ColumnMapping {
  std::string time = "Time";
  std::string timestamp = "Timestamp";
  std::string x = "X";
  std::string y = "Y";
  std::string z = "Z";
  std::string magnitude = "Magnitude";
  std::string pressure = "Pressure";
  std::string label = "Label";
};

struct IngestOptions {
  ColumnMapping columns;
  double nominal_rate_hz = 50.0;
  // Relative difference above which the Magnitude column counts as a mismatch.
  double magnitude_tolerance = 1e-3;
  // false: the first malformed row throws MalformedRow. true: skip and count it.
  bool skip_malformed_rows = false;
};

struct ParsedRecording {
  Recording recording;
  std::size_t data_rows = 0;
  std::size_t rejected_rows = 0;
  std::size_t magnitude_mismatches = 0;
  std::size_t duplicate_timestamps = 0;
};

ParsedRecording parse_sensor_csv(std::istream& source, const std::string& participant_id,
                                 const IngestOptions& options = {});
ParsedRecording load_sensor_csv(const std::filesystem::path& path,
                                const std::string& participant_id,
                                const IngestOptions& options = {});

// Writes `recording` in the format parse_sensor_csv reads with default columns.
void write_sensor_csv(std::ostream& out, const Recording& recording);

struct AnnotationEvent {
  std::int64_t elapsed_ms = 0;
  std::string comment;
};

struct AnnotationColumns {
  std::string elapsed = "Elapsedtime";
  std::string comment = "Comment";
};

std::vector<AnnotationEvent> parse_annotation_csv(std::istream& source,
                                                  const AnnotationColumns& columns = {});

// Step-function labelling: each sample takes the label of the most recent event
// at or before its elapsed time. Unparseable comments leave labels untouched.
Recording apply_annotations(Recording recording, std::span<const AnnotationEvent> events);

inline constexpr std::int64_t kDefaultGapMaxMs = 200;

// Linear interpolation onto t0 + round(k * 1000 / rate_hz). Grid points whose
// bracketing originals are more than gap_max_ms apart are flagged gap_filled
// and left unlabeled.
Recording resample_uniform(const Recording& recording, double rate_hz,
                           std::int64_t gap_max_ms = kDefaultGapMaxMs);

}  // namespace stairlift
