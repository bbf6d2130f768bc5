#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace atlas {

using Date = std::chrono::year_month_day;

struct ParsedDate {
  Date date;
  // Pattern carried only a year; the day was defaulted to January 1.
  bool year_only = false;
};

/// Parses `text` against a strftime-style pattern. Supported directives are
/// %Y (four digits), %m, %d (one or two digits) and %%; every other pattern
/// character must match literally and the whole text must be consumed.
/// Calendar-invalid results (2020-02-30) are rejected.
std::optional<ParsedDate> parse_date(std::string_view text,
                                     std::string_view pattern);

/// First pattern in `patterns` that accepts `text`.
std::optional<ParsedDate> parse_date_any(std::string_view text,
                                         std::span<const std::string> patterns);

std::string format_date(Date date);  // YYYY-MM-DD
Date parse_iso_date(std::string_view text);  // throws atlas::Error

}  // namespace atlas
