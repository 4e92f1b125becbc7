#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ghz {

// Shortest representation that round-trips a double exactly; always at least
// 12 significant digits for values that need them.
std::string format_double(double value);

// Reads a whole file; throws IoError when it cannot be opened.
std::string read_file(const std::string& path);

// Writes content to path via a temporary file in the same directory followed
// by an atomic rename, so a crash never leaves a truncated artifact.
void write_file_atomic(const std::string& path, std::string_view content);

// Creates the directory (and parents) if missing; throws IoError on failure.
void ensure_directory(const std::string& path);

// SHA-256 digest as lowercase hex.
std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::string& path);

// Current UTC time as ISO-8601 (second resolution).
std::string utc_timestamp();

// Incremental CSV sink: appends rows to "<path>.partial" as they arrive, then
// finalize() writes the complete file to path atomically and removes the
// partial. Used for long optimizations that must be resumable mid-run.
class IncrementalCsv {
 public:
  IncrementalCsv(std::string path, const std::string& header);
  void append_row(const std::string& row);  // newline added here
  void finalize();
  const std::string& partial_path() const { return partial_path_; }

 private:
  std::string path_;
  std::string partial_path_;
  std::string content_;
};

// Splits a CSV line on commas (no quoting; artifact CSVs never need it).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace ghz
