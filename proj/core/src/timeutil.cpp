#include "volkit/timeutil.hpp"

#include <array>
#include <cstdio>

namespace volkit::timeutil {

namespace {

bool is_leap(std::int64_t y) noexcept {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) noexcept {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                     31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

// Parses exactly `n` digits starting at s[pos]; advances pos.
bool take_digits(std::string_view s, std::size_t& pos, int n, std::int64_t& out) noexcept {
  if (pos + n > s.size()) return false;
  std::int64_t v = 0;
  for (int i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += n;
  out = v;
  return true;
}

bool take_char(std::string_view s, std::size_t& pos, char c) noexcept {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const std::int64_t era = floor_div(y, 400);
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) noexcept {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

std::optional<EpochMs> parse_iso8601_utc(std::string_view s) noexcept {
  std::size_t pos = 0;
  std::int64_t year, month, day, hour, minute, second;
  if (!take_digits(s, pos, 4, year)) return std::nullopt;
  if (!take_char(s, pos, '-')) return std::nullopt;
  if (!take_digits(s, pos, 2, month)) return std::nullopt;
  if (!take_char(s, pos, '-')) return std::nullopt;
  if (!take_digits(s, pos, 2, day)) return std::nullopt;
  if (!take_char(s, pos, 'T')) return std::nullopt;
  if (!take_digits(s, pos, 2, hour)) return std::nullopt;
  if (!take_char(s, pos, ':')) return std::nullopt;
  if (!take_digits(s, pos, 2, minute)) return std::nullopt;
  if (!take_char(s, pos, ':')) return std::nullopt;
  if (!take_digits(s, pos, 2, second)) return std::nullopt;

  std::int64_t ms = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    int n_digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (n_digits >= 3) return std::nullopt;
      ms = ms * 10 + (s[pos] - '0');
      ++n_digits;
      ++pos;
    }
    if (n_digits == 0) return std::nullopt;
    for (int i = n_digits; i < 3; ++i) ms *= 10;
  }
  if (!take_char(s, pos, 'Z')) return std::nullopt;
  if (pos != s.size()) return std::nullopt;

  if (month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return ((days * 24 + hour) * 60 + minute) * 60 * 1000 + second * 1000 + ms;
}

std::string format_iso8601_utc(EpochMs t) {
  const std::int64_t days = floor_div(t, kMsPerDay);
  std::int64_t rem = t - days * kMsPerDay;
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const int ms = static_cast<int>(rem % 1000);
  rem /= 1000;
  const int sec = static_cast<int>(rem % 60);
  rem /= 60;
  const int min = static_cast<int>(rem % 60);
  const int hour = static_cast<int>(rem / 60);

  char buf[40];
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<long long>(y), m, d, hour, min, sec);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<long long>(y), m, d, hour, min, sec, ms);
  }
  return buf;
}

std::optional<std::int64_t> parse_duration_ms(std::string_view s) noexcept {
  std::size_t pos = 0;
  std::int64_t value = 0;
  int n_digits = 0;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
    if (n_digits >= 12) return std::nullopt;
    value = value * 10 + (s[pos] - '0');
    ++n_digits;
    ++pos;
  }
  if (n_digits == 0 || value == 0) return std::nullopt;
  const std::string_view unit = s.substr(pos);
  if (unit == "ms") return value;
  if (unit == "s") return value * kMsPerSecond;
  if (unit == "m") return value * kMsPerMinute;
  if (unit == "h") return value * kMsPerHour;
  if (unit == "d") return value * kMsPerDay;
  return std::nullopt;
}

}  // namespace volkit::timeutil
