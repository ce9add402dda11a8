#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace speedcast {

// Calendar helpers on UTC epoch seconds. All timestamps in the library are
// plain int64 epoch seconds; formatting never consults the local time zone.

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                            unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = yr + (m <= 2);
}

}  // namespace detail

inline std::int64_t make_utc(int year, int month, int day, int hour = 0,
                             int minute = 0, int second = 0) {
  return detail::days_from_civil(year, static_cast<unsigned>(month),
                                 static_cast<unsigned>(day)) *
             86400 +
         hour * 3600 + minute * 60 + second;
}

inline std::string format_iso8601(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t sod = epoch_seconds % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  detail::civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<long long>(y), m, d,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod / 60) % 60),
                static_cast<long long>(sod % 60));
  return buf;
}

// Accepts "YYYY-MM-DD[T ]HH:MM[:SS]" with an optional trailing 'Z'.
inline std::optional<std::int64_t> parse_iso8601(std::string_view s) {
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) {
    s.remove_suffix(1);
  }
  int year, month, day, hour, minute, second = 0;
  char sep;
  int n = std::sscanf(std::string(s).c_str(), "%d-%d-%d%c%d:%d:%d", &year,
                      &month, &day, &sep, &hour, &minute, &second);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 0 ||
      hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
    return std::nullopt;
  }
  return make_utc(year, month, day, hour, minute, second);
}

inline bool looks_like_integer(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i >= s.size()) {
    return false;
  }
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return true;
}

// "HH:MM" -> seconds after midnight.
inline std::optional<int> parse_clock(std::string_view s) {
  int hour, minute;
  if (std::sscanf(std::string(s).c_str(), "%d:%d", &hour, &minute) != 2) {
    return std::nullopt;
  }
  if (hour < 0 || hour > 24 || minute < 0 || minute > 59) {
    return std::nullopt;
  }
  return hour * 3600 + minute * 60;
}

}  // namespace speedcast
