#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tca/model.hpp"

namespace tca::test {

inline std::string fixture_path(const std::string& name) { return std::string(TCA_TEST_DATA) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Zeller's congruence, 0 = Saturday. Independent of the calendar module.
inline Weekday zeller_weekday(int y, int m, int d) {
    if (m < 3) {
        m += 12;
        y -= 1;
    }
    const int k = y % 100, j = y / 100;
    const int h = (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;
    static constexpr Weekday by_h[] = {Weekday::saturday, Weekday::sunday,   Weekday::monday, Weekday::tuesday,
                                       Weekday::wednesday, Weekday::thursday, Weekday::friday};
    return by_h[h];
}

inline int naive_days_in_month(int y, int m) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m == 2 && leap ? 29 : days[m - 1];
}

inline CalendarDate date(int y, int m, int d) { return {y, month_from_number(m), d}; }

inline TimePoint point(std::optional<Weekday> wd, std::optional<Month> mo, std::optional<int> day,
                       std::optional<HourSpec> hour = std::nullopt, std::optional<TimeOfDay> tod = std::nullopt) {
    TimePoint p;
    if (wd) p.weekday = *wd;
    if (mo) p.month = *mo;
    if (day) p.date = DayOfMonth{*day};
    if (hour) p.hour = *hour;
    if (tod) p.time_of_day = *tod;
    return p;
}

inline TemporalRecord record(const std::string& label, TimePoint start, TimePoint end) {
    return {parse_label(label), std::move(start), std::move(end)};
}

}  // namespace tca::test
