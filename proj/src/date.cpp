#include "atlas/date.hpp"

#include "atlas/common.hpp"

#include <cctype>
#include <cstdio>

namespace atlas {
namespace {

// Reads between min_digits and max_digits decimal digits.
bool read_number(std::string_view text, std::size_t& pos, int min_digits,
                 int max_digits, int& out) {
  int value = 0;
  int digits = 0;
  while (pos < text.size() && digits < max_digits &&
         std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  if (digits < min_digits) return false;
  out = value;
  return true;
}

}  // namespace

std::optional<ParsedDate> parse_date(std::string_view text, std::string_view pattern) {
  int year = 0, month = 1, day = 1;
  bool has_year = false, has_month = false;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    if (c == '%' && i + 1 < pattern.size()) {
      char directive = pattern[++i];
      switch (directive) {
        case 'Y':
          if (!read_number(text, pos, 4, 4, year)) return std::nullopt;
          has_year = true;
          break;
        case 'm':
          if (!read_number(text, pos, 1, 2, month)) return std::nullopt;
          has_month = true;
          break;
        case 'd':
          if (!read_number(text, pos, 1, 2, day)) return std::nullopt;
          break;
        case '%':
          if (pos >= text.size() || text[pos] != '%') return std::nullopt;
          ++pos;
          break;
        default:
          throw Error("unsupported date directive %" + std::string(1, directive));
      }
      continue;
    }
    if (pos >= text.size() || text[pos] != c) return std::nullopt;
    ++pos;
  }
  if (pos != text.size() || !has_year) return std::nullopt;
  Date date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
            std::chrono::day{static_cast<unsigned>(day)}};
  if (!date.ok()) return std::nullopt;
  return ParsedDate{date, !has_month};
}

std::optional<ParsedDate> parse_date_any(std::string_view text,
                                         std::span<const std::string> patterns) {
  for (const auto& pattern : patterns) {
    if (auto parsed = parse_date(text, pattern)) return parsed;
  }
  return std::nullopt;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

Date parse_iso_date(std::string_view text) {
  auto parsed = parse_date(text, "%Y-%m-%d");
  if (!parsed) throw Error("invalid ISO date '" + std::string(text) + "'");
  return parsed->date;
}

}  // namespace atlas
