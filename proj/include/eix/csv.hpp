#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eix::csv {

// Malformed content. line is 1-based and counts the header.
struct CsvError : std::runtime_error {
  std::uint64_t line;
  CsvError(const std::string& msg, std::uint64_t line_no)
      : std::runtime_error(msg), line(line_no) {}
};

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Splits one row on commas; tolerates a trailing carriage return.
std::vector<std::string> split_row(const std::string& row);

// Strict field parsers: the whole field must be consumed, doubles must be
// finite.
double parse_double_field(const std::string& field, std::uint64_t line);
long long parse_int_field(const std::string& field, std::uint64_t line);

// Writes content to a temp file in the target directory, then renames it
// over the destination. Throws std::runtime_error on IO failure, in which
// case the destination is untouched.
void atomic_write_text(const std::filesystem::path& file,
                       const std::string& content);

struct StreamRow {
  std::uint64_t h = 0;
  std::vector<double> x;
  std::optional<int> label;
};

struct StreamFile {
  std::size_t dimension = 0;
  bool labeled = false;
  std::vector<StreamRow> rows;
};

// Stream format: header "h,x1,...,xn[,label]", one instance per row. Reads
// the whole file before returning, so a late bad row cannot leave a caller
// with a half-consumed stream. Throws CsvError (bad header, wrong column
// count, non-numeric or non-finite fields) or std::runtime_error when the
// file cannot be opened.
StreamFile read_stream_csv(const std::filesystem::path& file);

}  // namespace eix::csv
