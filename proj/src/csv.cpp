#include "eix/csv.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace eix::csv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_row(const std::string& row) {
  std::string line = row;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double_field(const std::string& field, std::uint64_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw CsvError("not a number: '" + field + "'", line);
  if (!std::isfinite(v))
    throw CsvError("non-finite value: '" + field + "'", line);
  return v;
}

long long parse_int_field(const std::string& field, std::uint64_t line) {
  long long v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw CsvError("not an integer: '" + field + "'", line);
  return v;
}

void atomic_write_text(const std::filesystem::path& file,
                       const std::string& content) {
  std::filesystem::path dir = file.parent_path();
  if (dir.empty()) dir = ".";
  const auto tmp =
      dir / (file.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw std::runtime_error("cannot replace " + file.string() + ": " +
                             ec.message());
  }
}

StreamFile read_stream_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());

  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty file, header expected", 1);
  const auto header = split_row(line);
  if (header.empty() || header[0] != "h")
    throw CsvError("header must start with 'h'", 1);

  StreamFile out;
  std::size_t cols = header.size();
  out.labeled = cols >= 2 && header.back() == "label";
  const std::size_t n = cols - 1 - (out.labeled ? 1 : 0);
  if (n == 0) throw CsvError("header has no coordinate columns", 1);
  for (std::size_t j = 0; j < n; ++j)
    if (header[1 + j] != "x" + std::to_string(j + 1))
      throw CsvError("coordinate columns must be named x1..xn", 1);
  out.dimension = n;

  std::uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_row(line);
    if (fields.size() != cols)
      throw CsvError("expected " + std::to_string(cols) + " fields, got " +
                         std::to_string(fields.size()),
                     line_no);
    StreamRow row;
    const long long h = parse_int_field(fields[0], line_no);
    if (h < 0) throw CsvError("negative h", line_no);
    row.h = static_cast<std::uint64_t>(h);
    row.x.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      row.x[j] = parse_double_field(fields[1 + j], line_no);
    if (out.labeled)
      row.label = static_cast<int>(parse_int_field(fields[cols - 1], line_no));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace eix::csv
