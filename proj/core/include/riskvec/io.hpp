#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace riskvec::io {

// Whole-file read; throws runtime Error on failure.
std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> read_lines(const std::filesystem::path& path);

// FNV-1a over a byte string. Used for input/config fingerprints in the
// run manifest; not a cryptographic hash.
std::uint64_t fnv1a64(std::string_view bytes);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string hex64(std::uint64_t value);

// Shortest round-trip decimal form of a double (std::to_chars). Writing
// every float this way keeps CSV/JSON artifacts byte-stable and makes a
// parse-back exact, so staged reruns hash identically.
std::string format_double(double value);

// Lowercased alphanumeric/underscore runs. Used for keyword matching.
std::vector<std::string> split_tokens(std::string_view text);

// Staged output directory: files are written as "<name>.part" and only
// renamed into place by commit(). rollback() (or destruction without
// commit) removes the partial files, so a failed run never leaves
// artifacts that look like results.
class OutputBundle {
 public:
  explicit OutputBundle(std::filesystem::path dir);
  ~OutputBundle();

  OutputBundle(const OutputBundle&) = delete;
  OutputBundle& operator=(const OutputBundle&) = delete;

  void write(const std::string& name, std::string_view content);
  void commit();
  void rollback();
  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

// Minimal CSV writer: quotes fields only when needed.
class CsvWriter {
 public:
  void header(const std::vector<std::string>& columns);
  void field(const std::string& value);
  void field(double value);
  void field(std::int64_t value);
  void end_row();
  std::string str() const { return out_; }

 private:
  void raw(const std::string& value);
  std::string out_;
  bool row_open_ = false;
};

// Parses one CSV line written by CsvWriter (no embedded newlines).
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace riskvec::io
