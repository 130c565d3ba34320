#include "memoria/errors.hpp"
#include "memoria/time.hpp"

#include <gtest/gtest.h>

using namespace memoria;

TEST(TimeOfDay, ParsesAndFormats) {
    EXPECT_EQ(TimeOfDay::parse("08:30").minutes(), 8 * 60 + 30);
    EXPECT_EQ(TimeOfDay::parse("00:00").minutes(), 0);
    EXPECT_EQ(TimeOfDay::parse("24:00").minutes(), TimeOfDay::kMinutesPerDay);
    EXPECT_EQ(TimeOfDay(9, 5).to_string(), "09:05");
}

TEST(TimeOfDay, RejectsOutOfRange) {
    for (const char* bad : {"24:30", "12:60", "7", "ab:cd", "", "12:3x"}) {
        EXPECT_THROW(TimeOfDay::parse(bad), ParseError) << bad;
    }
}

TEST(TimeSlot, IsHalfOpen) {
    const TimeSlot slot{TimeOfDay(8, 0), TimeOfDay(9, 0)};
    EXPECT_TRUE(slot.contains(TimeOfDay(8, 0)));
    EXPECT_TRUE(slot.contains(TimeOfDay(8, 59)));
    EXPECT_FALSE(slot.contains(TimeOfDay(9, 0)));
    EXPECT_FALSE(slot.contains(TimeOfDay(7, 59)));
}

TEST(Timestamp, AcceptedSpellings) {
    const auto t = parse_timestamp("2024-05-01T08:30:00");
    EXPECT_EQ(parse_timestamp("2024-05-01T08:30"), t);
    EXPECT_EQ(parse_timestamp("2024-05-01 08:30:00"), t);
    EXPECT_EQ(parse_timestamp("2024-05-01T08:30:00Z"), t);
    EXPECT_EQ(format_timestamp(t), "2024-05-01T08:30:00");
    EXPECT_EQ(time_of_day(t), TimeOfDay(8, 30));
}

TEST(Timestamp, RoundTripsAcrossYears) {
    for (int y = 1990; y <= 2030; y += 7) {
        for (int m = 1; m <= 12; m += 5) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%04d-%02d-15T23:59:59", y, m);
            EXPECT_EQ(format_timestamp(parse_timestamp(buf)), buf);
        }
    }
}

TEST(Timestamp, RejectsGarbage) {
    for (const char* bad : {"", "2024-05-01", "yesterday", "2024-05-01T25:00", "2024/05/01 08:00"}) {
        EXPECT_THROW(parse_timestamp(bad), ParseError) << bad;
    }
}

TEST(Date, CalendarValidityLeftToCaller) {
    const auto d = parse_date("2023-02-30");
    EXPECT_FALSE(d.ok());
    EXPECT_EQ(format_date(parse_date("1999-12-31")), "1999-12-31");
    EXPECT_THROW(parse_date("12/31/1999"), ParseError);
}
