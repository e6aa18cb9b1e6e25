#pragma once

// Output helpers: stable number formatting, CSV rows and atomic file writes.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace segdiff::io {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }
  std::size_t columns() const { return columns_; }

 private:
  void line(const std::vector<std::string>& cells);
  std::size_t columns_ = 0;
  std::string out_;
};

// Writes to a sibling temp file, then renames over `path`. The temp file is
// removed on failure, so `path` is either the old file or the complete new one.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// RFC 4180 style: quoted fields may hold commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// "a;b;c"
std::string join(const std::vector<std::string>& items, std::string_view sep);

}  // namespace segdiff::io
