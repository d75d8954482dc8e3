#pragma once

// Small parsing and formatting helpers shared by the file readers/writers.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "exo/errors.hpp"

namespace exo::detail {

/// printf-style %.<digits>g, locale independent for the formats we use.
inline std::string format_sig(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  // Avoid "-0.000" for values that round to zero.
  if (std::fabs(value) < 0.5 * std::pow(10.0, -decimals)) value = 0.0;
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// Value rounded to `digits` significant digits (for stable JSON output).
inline double round_sig(double value, int digits = 12) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  return std::stod(format_sig(value, digits));
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Strict full-field double parse.
inline double parse_double(std::string_view field, std::size_t line, std::string_view what) {
  field = trim(field);
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, "invalid number for " + std::string(what) + ": '" +
                               std::string(field) + "'");
  }
  return value;
}

inline int parse_int(std::string_view field, std::size_t line, std::string_view what) {
  field = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, "invalid integer for " + std::string(what) + ": '" +
                               std::string(field) + "'");
  }
  return value;
}

/// Splits text into lines on LF; a trailing CR is stripped, a final empty line dropped.
inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string_view line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = pos + 1;
  }
  return out;
}

}  // namespace exo::detail
