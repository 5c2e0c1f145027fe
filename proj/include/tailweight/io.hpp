#ifndef TAILWEIGHT_IO_HPP
#define TAILWEIGHT_IO_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tailweight/error.hpp"

// CSV dialect: comma separator, '.' decimal point, LF line endings, at most
// one header row. Reals are written in the shortest form that round-trips.

namespace tailweight::io {

inline std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

inline bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

/// One real per line. A non-numeric first line is taken as the header.
/// Blank lines are accepted only at the end of the file.
inline std::vector<double> parse_sample_csv(const std::string& content,
                                            const std::string& origin = "<input>") {
  std::vector<double> values;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  std::size_t first_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (first_blank == 0) first_blank = line_no;
      continue;
    }
    if (first_blank != 0) {
      throw validation_error(origin + ":" + std::to_string(first_blank) +
                             ": blank line inside data");
    }
    double v;
    if (!parse_double(line, v)) {
      if (line_no == 1) continue;  // header
      throw validation_error(origin + ":" + std::to_string(line_no) +
                             ": malformed value '" + line + "'");
    }
    if (!std::isfinite(v)) {
      throw validation_error(origin + ":" + std::to_string(line_no) +
                             ": non-finite value '" + line + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw validation_error(origin + ": no data rows");
  return values;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("error while reading '" + path + "'");
  return buffer.str();
}

inline std::vector<double> read_sample_csv(const std::string& path) {
  return parse_sample_csv(read_file(path), path);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw io_error("error while writing '" + path + "'");
}

inline std::string sample_to_csv(const std::vector<double>& values, bool header) {
  std::string out;
  if (header) out += "x\n";
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

/// 64-bit FNV-1a, used to fingerprint canonical plan text in provenance files.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace tailweight::io

#endif  // TAILWEIGHT_IO_HPP
