#pragma once

// Line-oriented `key = value` text used for drive and optimizer files.
// '#' starts a comment; keys may repeat (e.g. one `segment` line per segment);
// list values are comma separated. Numbers are written in shortest
// round-trip form so parse(serialize(x)) == x exactly.

#include <array>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace ffkit::text {

struct Entry {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

inline std::string_view trim(std::string_view s) noexcept {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<Entry> parse_entries(std::string_view text) {
  std::vector<Entry> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "", "missing key");
    if (value.empty()) throw ParseError(line_no, std::string(key), "missing value");
    out.push_back({line_no, std::string(key), std::string(value)});
  }
  return out;
}

inline double parse_double(std::string_view s, const Entry& at) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(at.line, at.key, "'" + std::string(s) + "' is not a number");
  return v;
}

inline long long parse_int(std::string_view s, const Entry& at) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(at.line, at.key, "'" + std::string(s) + "' is not an integer");
  return v;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_doubles(const Entry& e, std::size_t expected = 0) {
  std::vector<double> out;
  for (auto part : split_list(e.value)) out.push_back(parse_double(part, e));
  if (expected != 0 && out.size() != expected)
    throw ParseError(e.line, e.key, "expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()));
  return out;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ", ";
    s += format_double(v[k]);
  }
  return s;
}

}  // namespace ffkit::text
