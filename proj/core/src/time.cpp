#include "memoria/time.hpp"

#include "memoria/errors.hpp"

#include <charconv>
#include <cstdio>

namespace memoria {

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
}

} // namespace

TimeOfDay TimeOfDay::parse(std::string_view text) {
    int h = 0;
    int m = 0;
    if (text.size() != 5 || text[2] != ':' || !parse_fixed_int(text, 0, 2, h) ||
        !parse_fixed_int(text, 3, 2, m)) {
        throw ParseError("time of day must be HH:MM, got '" + std::string(text) + "'");
    }
    if (m > 59 || h > 24 || (h == 24 && m != 0)) {
        throw ParseError("time of day out of range: '" + std::string(text) + "'");
    }
    return TimeOfDay(h, m);
}

std::string TimeOfDay::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", hour(), minute());
    return buf;
}

TimeOfDay time_of_day(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const auto since = std::chrono::duration_cast<std::chrono::minutes>(ts - day);
    return TimeOfDay(static_cast<int>(since.count()));
}

std::chrono::year_month_day parse_date(std::string_view text) {
    int y = 0;
    int mo = 0;
    int d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_fixed_int(text, 0, 4, y) ||
        !parse_fixed_int(text, 5, 2, mo) || !parse_fixed_int(text, 8, 2, d)) {
        throw ParseError("date must be YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    return std::chrono::year_month_day{std::chrono::year{y},
                                       std::chrono::month{static_cast<unsigned>(mo)},
                                       std::chrono::day{static_cast<unsigned>(d)}};
}

std::string format_date(std::chrono::year_month_day date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.remove_suffix(1);
    if (text.size() != 16 && text.size() != 19) {
        throw ParseError("timestamp must be YYYY-MM-DDTHH:MM[:SS], got '" + std::string(text) + "'");
    }
    const auto date = parse_date(text.substr(0, 10));
    if (!date.ok()) throw ParseError("invalid calendar date in '" + std::string(text) + "'");
    if (text[10] != 'T' && text[10] != ' ') {
        throw ParseError("timestamp must separate date and time with 'T': '" + std::string(text) + "'");
    }
    int h = 0;
    int m = 0;
    int s = 0;
    if (!parse_fixed_int(text, 11, 2, h) || text[13] != ':' || !parse_fixed_int(text, 14, 2, m)) {
        throw ParseError("bad time in timestamp '" + std::string(text) + "'");
    }
    if (text.size() == 19 && (text[16] != ':' || !parse_fixed_int(text, 17, 2, s))) {
        throw ParseError("bad seconds in timestamp '" + std::string(text) + "'");
    }
    if (h > 23 || m > 59 || s > 59) {
        throw ParseError("time out of range in timestamp '" + std::string(text) + "'");
    }
    return std::chrono::sys_days{date} + std::chrono::hours{h} + std::chrono::minutes{m} +
           std::chrono::seconds{s};
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::hh_mm_ss hms{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d",
                  format_date(std::chrono::year_month_day{day}).c_str(),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

} // namespace memoria
