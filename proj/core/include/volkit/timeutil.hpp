#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace volkit::timeutil {

// All timestamps in the toolkit are UTC epoch milliseconds.
using EpochMs = std::int64_t;

inline constexpr std::int64_t kMsPerSecond = 1000;
inline constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
inline constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
inline constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

// Parses a strict ISO-8601 UTC instant: YYYY-MM-DDTHH:MM:SS[.f{1,3}]Z.
// Returns nullopt on any deviation (bad separators, out-of-range fields,
// missing Z). No leap seconds, proleptic Gregorian calendar.
std::optional<EpochMs> parse_iso8601_utc(std::string_view s) noexcept;

// Formats as YYYY-MM-DDTHH:MM:SSZ, with .mmm inserted iff the instant is not
// on a whole second. Inverse of parse_iso8601_utc for every representable
// instant.
std::string format_iso8601_utc(EpochMs t);

// Parses a duration written as <positive integer><unit>, unit in
// {ms, s, m, h, d}. Returns the length in milliseconds, nullopt if malformed.
std::optional<std::int64_t> parse_duration_ms(std::string_view s) noexcept;

// Serial day number for a proleptic Gregorian date, day 0 = 1970-01-01.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept;
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) noexcept;

}  // namespace volkit::timeutil
