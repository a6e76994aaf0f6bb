#pragma once

#include <cstdint>

namespace nbp {

/// Milliseconds since the Unix epoch, UTC. All timestamps in the library use
/// this representation; conversions to civil dates are purely arithmetic
/// (no timezone database involved).
using Millis = std::int64_t;

inline constexpr Millis kMillisPerSecond = 1000;
inline constexpr Millis kMillisPerMinute = 60 * kMillisPerSecond;
inline constexpr Millis kMillisPerHour = 60 * kMillisPerMinute;
inline constexpr Millis kMillisPerDay = 24 * kMillisPerHour;

/// Day count convention: actual milliseconds elapsed over a 365-day year.
inline constexpr double kDaysPerYear = 365.0;
inline constexpr double kMillisPerYear = kDaysPerYear * kMillisPerDay;

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
/// Howard Hinnant's days_from_civil algorithm.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

/// Inverse of days_from_civil.
constexpr CivilDate civil_from_days(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

/// Midnight UTC of the given civil date.
constexpr Millis civil_to_ms(int y, unsigned m, unsigned d) noexcept {
    return days_from_civil(y, m, d) * kMillisPerDay;
}

constexpr CivilDate ms_to_civil(Millis ms) noexcept {
    // Floor division so pre-epoch timestamps land on the right day.
    std::int64_t days = ms / kMillisPerDay;
    if (ms % kMillisPerDay < 0) --days;
    return civil_from_days(days);
}

constexpr int utc_year(Millis ms) noexcept { return ms_to_civil(ms).year; }

/// Hour of day 0..23 in UTC.
constexpr int utc_hour(Millis ms) noexcept {
    Millis rem = ms % kMillisPerDay;
    if (rem < 0) rem += kMillisPerDay;
    return static_cast<int>(rem / kMillisPerHour);
}

/// Midnight UTC at or before ms.
constexpr Millis floor_to_day(Millis ms) noexcept {
    Millis rem = ms % kMillisPerDay;
    if (rem < 0) rem += kMillisPerDay;
    return ms - rem;
}

/// Year fraction between two instants, ACT/365 at millisecond resolution.
constexpr double years_between(Millis from, Millis to) noexcept {
    return static_cast<double>(to - from) / kMillisPerYear;
}

}  // namespace nbp
