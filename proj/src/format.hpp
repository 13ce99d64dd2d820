#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cbwk/error.hpp"

namespace cbwk::detail {

// %.17g: enough digits for an exact double round-trip.
inline std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// %.6g: reporting precision for CSV and plot data.
inline std::string real6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// %.9g: trace rows.
inline std::string real9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits on commas and/or whitespace; empty pieces are dropped.
inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double parse_real(std::string_view s, std::string_view what) {
  std::string owned(trim(s));
  char* end = nullptr;
  double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size())
    throw ParseError(std::string(what) + ": expected a number, got '" +
                     owned + "'");
  return v;
}

inline long long parse_int(std::string_view s, std::string_view what) {
  std::string_view t = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ParseError(std::string(what) + ": expected an integer, got '" +
                     std::string(t) + "'");
  return v;
}

inline unsigned long long parse_uint(std::string_view s,
                                     std::string_view what) {
  std::string_view t = trim(s);
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ParseError(std::string(what) +
                     ": expected a non-negative integer, got '" +
                     std::string(t) + "'");
  return v;
}

}  // namespace cbwk::detail
