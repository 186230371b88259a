#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wntm/error.hpp"

namespace wntm {

/// Shortest round-trip decimal form. Used for every double written to an
/// artifact so that re-runs are byte-identical and reloads are exact.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error("malformed number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error("malformed integer: '" + std::string(s) + "'");
  }
  return v;
}

/// Splits on any run of the given delimiters; no empty fields.
inline std::vector<std::string_view> split_tokens(std::string_view line,
                                                  std::string_view delims = " \t\r") {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && delims.find(line[i]) != std::string_view::npos) ++i;
    std::size_t start = i;
    while (i < line.size() && delims.find(line[i]) == std::string_view::npos) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex chars. Used for the
/// input fingerprints recorded in run manifests.
std::string file_digest(const std::string& path);

}  // namespace wntm
