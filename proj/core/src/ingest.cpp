#include "stairlift/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "detail/text.hpp"

namespace stairlift {
namespace {

class HeaderIndex {
 public:
  explicit HeaderIndex(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      index_.emplace(detail::to_lower(detail::trim(header[i])), i);
    }
  }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(detail::to_lower(detail::trim(name)));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorCode::kMissingColumn, "column '" + name + "' not found in header");
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

bool read_header(std::istream& source, std::vector<std::string>& header) {
  std::string line;
  while (std::getline(source, line)) {
    detail::strip_line_ending(line);
    detail::strip_bom(line);
    if (detail::trim(line).empty()) continue;
    header = detail::split_csv_line(line);
    return true;
  }
  return false;
}

std::string row_context(std::size_t row) { return "data row " + std::to_string(row); }

}  // namespace

ParsedRecording parse_sensor_csv(std::istream& source, const std::string& participant_id,
                                 const IngestOptions& options) {
  ParsedRecording result;
  result.recording.participant_id = participant_id;
  result.recording.nominal_rate_hz = options.nominal_rate_hz;

  std::vector<std::string> header;
  if (!read_header(source, header)) {
    throw Error(ErrorCode::kMissingColumn, "sensor CSV has no header row");
  }
  const HeaderIndex columns(header);
  const auto& names = options.columns;
  const std::size_t c_ts = columns.require(names.timestamp);
  const std::size_t c_x = columns.require(names.x);
  const std::size_t c_y = columns.require(names.y);
  const std::size_t c_z = columns.require(names.z);
  const std::size_t c_p = columns.require(names.pressure);
  const auto c_mag = columns.find(names.magnitude);
  const auto c_label = columns.find(names.label);

  auto& samples = result.recording.samples;
  std::string line;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    detail::strip_line_ending(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    ++result.data_rows;
    const auto fields = detail::split_csv_line(line);

    auto reject = [&](const std::string& why) {
      if (!options.skip_malformed_rows) {
        throw Error(ErrorCode::kMalformedRow, row_context(row) + ": " + why);
      }
      ++result.rejected_rows;
    };
    auto field = [&](std::size_t c) -> std::string_view {
      return c < fields.size() ? std::string_view(fields[c]) : std::string_view();
    };

    const auto ts = detail::parse_int(field(c_ts));
    const auto x = detail::parse_double(field(c_x));
    const auto y = detail::parse_double(field(c_y));
    const auto z = detail::parse_double(field(c_z));
    const auto p = detail::parse_double(field(c_p));
    if (!ts || !x || !y || !z || !p) {
      reject("unparseable numeric field");
      continue;
    }

    SensorSample s;
    s.timestamp_ms = *ts;
    s.acc_x = *x;
    s.acc_y = *y;
    s.acc_z = *z;
    s.pressure = *p;
    s.magnitude = compute_magnitude(*x, *y, *z);

    if (c_mag) {
      const auto reported_text = detail::trim(field(*c_mag));
      if (!reported_text.empty()) {
        const auto reported = detail::parse_double(reported_text);
        if (!reported) {
          reject("unparseable Magnitude");
          continue;
        }
        const double scale = std::max(std::fabs(s.magnitude), 1e-12);
        if (std::fabs(*reported - s.magnitude) / scale > options.magnitude_tolerance) {
          ++result.magnitude_mismatches;
        }
      }
    }

    if (c_label) {
      const auto text = detail::trim(field(*c_label));
      if (!text.empty()) {
        auto label = try_parse_label(text);
        if (!label) {
          throw Error(ErrorCode::kUnknownLabel,
                      row_context(row) + ": '" + std::string(text) + "'");
        }
        s.label = *label;
      }
    }

    if (!samples.empty()) {
      const auto prev = samples.back().timestamp_ms;
      if (s.timestamp_ms < prev) {
        throw Error(ErrorCode::kNonMonotonicTime,
                    row_context(row) + ": timestamp " + std::to_string(s.timestamp_ms) +
                        " after " + std::to_string(prev));
      }
      if (s.timestamp_ms == prev) {
        ++result.duplicate_timestamps;
        continue;
      }
    }
    samples.push_back(s);
  }
  return result;
}

ParsedRecording load_sensor_csv(const std::filesystem::path& path,
                                const std::string& participant_id,
                                const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_sensor_csv(in, participant_id, options);
}

void write_sensor_csv(std::ostream& out, const Recording& recording) {
  out << "Time,Timestamp,X,Y,Z,Magnitude,Pressure,Label\n";
  char buf[256];
  const std::int64_t t0 = recording.samples.empty() ? 0 : recording.samples.front().timestamp_ms;
  for (const auto& s : recording.samples) {
    const std::int64_t rel = s.timestamp_ms - t0;
    const long long h = rel / 3'600'000;
    const long long m = (rel / 60'000) % 60;
    const long long sec = (rel / 1000) % 60;
    const long long ms = rel % 1000;
    const std::string label = s.label ? std::string(canonical_name(*s.label)) : std::string();
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld,%lld,%.6f,%.6f,%.6f,%.6f,%.4f,",
                  h, m, sec, ms, static_cast<long long>(s.timestamp_ms), s.acc_x, s.acc_y,
                  s.acc_z, s.magnitude, s.pressure);
    out << buf << label << '\n';
  }
}

std::vector<AnnotationEvent> parse_annotation_csv(std::istream& source,
                                                  const AnnotationColumns& names) {
  std::vector<std::string> header;
  if (!read_header(source, header)) {
    throw Error(ErrorCode::kMissingColumn, "annotation CSV has no header row");
  }
  const HeaderIndex columns(header);
  const std::size_t c_elapsed = columns.require(names.elapsed);
  const std::size_t c_comment = columns.require(names.comment);

  std::vector<AnnotationEvent> events;
  std::string line;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    detail::strip_line_ending(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_csv_line(line);
    if (c_elapsed >= fields.size()) {
      throw Error(ErrorCode::kMalformedRow, row_context(row) + ": missing Elapsedtime");
    }
    const auto elapsed = detail::parse_int(fields[c_elapsed]);
    if (!elapsed || *elapsed < 0) {
      throw Error(ErrorCode::kMalformedRow, row_context(row) + ": bad Elapsedtime");
    }
    if (!events.empty() && *elapsed < events.back().elapsed_ms) {
      throw Error(ErrorCode::kNonMonotonicTime, row_context(row) + ": events out of order");
    }
    AnnotationEvent event;
    event.elapsed_ms = *elapsed;
    if (c_comment < fields.size()) event.comment = fields[c_comment];
    events.push_back(std::move(event));
  }
  return events;
}

Recording apply_annotations(Recording recording, std::span<const AnnotationEvent> events) {
  if (recording.samples.empty() || events.empty()) return recording;
  const std::int64_t t0 = recording.samples.front().timestamp_ms;
  std::size_t next = 0;
  std::optional<ActivityLabel> active;
  bool active_valid = false;
  for (auto& s : recording.samples) {
    const std::int64_t elapsed = s.timestamp_ms - t0;
    while (next < events.size() && events[next].elapsed_ms <= elapsed) {
      active = try_parse_label(events[next].comment);
      active_valid = active.has_value();
      ++next;
    }
    if (active_valid) s.label = active;
  }
  return recording;
}

Recording resample_uniform(const Recording& recording, double rate_hz,
                           std::int64_t gap_max_ms) {
  if (!(rate_hz > 0.0) || rate_hz > 1000.0) {
    throw Error(ErrorCode::kInvalidParams, "rate must be in (0, 1000] Hz");
  }
  const auto& in = recording.samples;
  if (in.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples, "resampling needs at least 2 samples");
  }
  validate(recording);

  Recording out;
  out.participant_id = recording.participant_id;
  out.nominal_rate_hz = rate_hz;
  const std::int64_t t0 = in.front().timestamp_ms;
  const std::int64_t t_end = in.back().timestamp_ms;
  const double period = 1000.0 / rate_hz;

  std::size_t seg = 0;  // in[seg].t <= t < in[seg + 1].t, or the last pair
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t t = t0 + std::llround(static_cast<double>(k) * period);
    if (t > t_end) break;
    while (seg + 2 < in.size() && in[seg + 1].timestamp_ms <= t) ++seg;
    const SensorSample& a = in[seg];
    const SensorSample& b = in[seg + 1];
    const double span = static_cast<double>(b.timestamp_ms - a.timestamp_ms);
    const double w = static_cast<double>(t - a.timestamp_ms) / span;
    const bool at_a = t == a.timestamp_ms;
    const bool at_b = t == b.timestamp_ms;
    auto lerp = [&](double va, double vb) { return at_a ? va : at_b ? vb : va + w * (vb - va); };

    SensorSample s;
    s.timestamp_ms = t;
    s.acc_x = lerp(a.acc_x, b.acc_x);
    s.acc_y = lerp(a.acc_y, b.acc_y);
    s.acc_z = lerp(a.acc_z, b.acc_z);
    s.magnitude = at_a ? a.magnitude : at_b ? b.magnitude : compute_magnitude(s.acc_x, s.acc_y, s.acc_z);
    s.pressure = lerp(a.pressure, b.pressure);
    if (!at_a && !at_b && b.timestamp_ms - a.timestamp_ms > gap_max_ms) {
      s.gap_filled = true;
    } else {
      const SensorSample& nearest = (t - a.timestamp_ms) <= (b.timestamp_ms - t) ? a : b;
      s.label = nearest.label;
      s.gap_filled = nearest.gap_filled;
    }
    out.samples.push_back(s);
  }
  return out;
}

}  // namespace stairlift
