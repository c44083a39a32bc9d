#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stairlift/dataset.hpp"
#include "stairlift/forest.hpp"
#include "stairlift/ingest.hpp"
#include "stairlift/windowing.hpp"

namespace stairlift::cli {

inline constexpr const char* kDataEnv = "STAIRLIFT_DATA";

// Entry point shared by main() and the tests. Returns the process exit code:
// 0 on success, 1 on a pipeline error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "default", or ';'-separated "depth=15,20,none" and "trees=200:350:25" (or a
// comma list). Cells are ordered depth-major.
std::vector<ForestHyperparams> parse_grid(std::string_view spec);

// Reads key=value lines ('#' comments, blank lines ignored) and turns them
// into "--key=value" tokens. Throws InvalidConfig on a line without '='.
std::vector<std::string> config_tokens(std::istream& in);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct LoadOptions {
  IngestOptions ingest;
  bool resample = true;
};

struct LoadedRecording {
  ParsedRecording parsed;
  std::filesystem::path source;
};

// Every "<id>.csv" in `dir` (sorted by name) is one participant. A sibling
// "<id>.annotations.csv" relabels it. "manifest.json" is ignored.
std::vector<LoadedRecording> load_directory(const std::filesystem::path& dir,
                                            const LoadOptions& options);

struct Extraction {
  Dataset dataset;
  std::vector<WindowRecord> records;
};

Extraction extract_directory(const std::filesystem::path& dir, const LoadOptions& options,
                             const WindowingParams& params);

}  // namespace stairlift::cli
