#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace memoria {

/// Wall-clock instant. Timestamps carry no zone; they are interpreted as the
/// care facility's local time throughout.
using Timestamp = std::chrono::sys_seconds;

/// Minute of a day, 00:00 through 24:00 inclusive (24:00 is only meaningful
/// as the exclusive end of a slot).
class TimeOfDay {
public:
    static constexpr int kMinutesPerDay = 24 * 60;

    constexpr TimeOfDay() = default;
    constexpr explicit TimeOfDay(int minutes) : minutes_(minutes) {}
    constexpr TimeOfDay(int hour, int minute) : minutes_(hour * 60 + minute) {}

    /// Parses "HH:MM" (24-hour). Throws ParseError.
    static TimeOfDay parse(std::string_view text);

    constexpr int minutes() const noexcept { return minutes_; }
    constexpr int hour() const noexcept { return minutes_ / 60; }
    constexpr int minute() const noexcept { return minutes_ % 60; }

    std::string to_string() const;

    constexpr auto operator<=>(const TimeOfDay&) const = default;

private:
    int minutes_ = 0;
};

/// Daily recurring interval [start, end).
struct TimeSlot {
    TimeOfDay start;
    TimeOfDay end;

    constexpr bool contains(TimeOfDay t) const noexcept { return start <= t && t < end; }
    bool operator==(const TimeSlot&) const = default;
};

TimeOfDay time_of_day(Timestamp ts);

/// Accepts "YYYY-MM-DDTHH:MM", "YYYY-MM-DDTHH:MM:SS", optional trailing 'Z',
/// and a space instead of 'T'. Throws ParseError.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SS".
std::string format_timestamp(Timestamp ts);

/// Parses "YYYY-MM-DD". Throws ParseError on bad syntax; calendar validity is
/// left to the caller (`ymd.ok()`).
std::chrono::year_month_day parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);

} // namespace memoria
