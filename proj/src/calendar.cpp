#include "tca/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace tca::calendar {

bool is_leap_year(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, Month m) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == Month::february && is_leap_year(year)) return 29;
    return lengths[static_cast<int>(m)];
}

bool is_valid_date(int year, Month m, int day) { return day >= 1 && day <= days_in_month(year, m); }
bool is_valid_date(const CalendarDate& d) { return is_valid_date(d.year, d.month, d.day); }

// Era-based civil day count (proleptic Gregorian).
long to_day_number(const CalendarDate& d) {
    const long m = month_number(d.month);
    const long y = d.year - (m <= 2 ? 1 : 0);
    const long era = (y >= 0 ? y : y - 399) / 400;
    const long yoe = y - era * 400;
    const long doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

CalendarDate from_day_number(long n) {
    n += 719468;
    const long era = (n >= 0 ? n : n - 146096) / 146097;
    const long doe = n - era * 146097;
    const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const long mp = (5 * doy + 2) / 153;
    const int day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    const int month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    const int year = static_cast<int>(yoe + era * 400 + (month <= 2 ? 1 : 0));
    return {year, month_from_number(month), day};
}

Weekday weekday_of(const CalendarDate& d) {
    // 1970-01-01 was a Thursday.
    const long n = to_day_number(d);
    const long w = ((n % 7) + 7 + 4) % 7;
    return static_cast<Weekday>(w);
}

CalendarDate add_days(const CalendarDate& d, long n) {
    const CalendarDate r = from_day_number(to_day_number(d) + n);
    if (r.year < kMinYear || r.year > kMaxYear)
        throw OutOfRange("date " + to_iso(r) + " outside supported range 1900..2099");
    return r;
}

namespace {

// Monday of the workweek a date belongs to; weekends roll to the next week.
long workweek_monday(const CalendarDate& d) {
    const long n = to_day_number(d);
    switch (weekday_of(d)) {
        case Weekday::saturday: return n + 2;
        case Weekday::sunday: return n + 1;
        default: return n - (static_cast<int>(weekday_of(d)) - 1);
    }
}

DateInterval week_from_monday(long monday) {
    return {from_day_number(monday), from_day_number(monday + 4)};
}

}  // namespace

DateInterval this_workweek(const CalendarDate& d) { return week_from_monday(workweek_monday(d)); }

DateInterval next_workweek(const CalendarDate& d) { return week_from_monday(workweek_monday(d) + 7); }

DateInterval month_interval(int year, Month m) {
    return {{year, m, 1}, {year, m, days_in_month(year, m)}};
}

std::vector<DateInterval> qualifying_workweeks(int year, Month m) {
    std::vector<DateInterval> weeks;
    const long first = to_day_number({year, m, 1});
    const long last = to_day_number({year, m, days_in_month(year, m)});
    long monday = workweek_monday({year, m, 1});
    for (; monday <= last; monday += 7) {
        const long lo = std::max(monday, first);
        const long hi = std::min(monday + 4, last);
        if (hi - lo + 1 > 2) weeks.push_back({from_day_number(lo), from_day_number(hi)});
    }
    return weeks;
}

DateInterval nth_workweek_of_month(int year, Month m, int n) {
    const auto weeks = qualifying_workweeks(year, m);
    if (n < 1 || n > static_cast<int>(weeks.size()))
        throw NoSuchWeek("no workweek " + std::to_string(n) + " in " + std::string(to_token(m)) + " " +
                         std::to_string(year));
    return weeks[static_cast<std::size_t>(n - 1)];
}

DateInterval last_workweek_of_month(int year, Month m) {
    const auto weeks = qualifying_workweeks(year, m);
    return weeks.back();  // every month has at least three full workweeks
}

std::vector<std::array<int, 7>> month_weeks(int year, Month m) {
    std::vector<std::array<int, 7>> rows;
    std::array<int, 7> row{};
    int col = static_cast<int>(weekday_of({year, m, 1}));
    for (int day = 1; day <= days_in_month(year, m); ++day) {
        row[static_cast<std::size_t>(col)] = day;
        if (++col == 7) {
            rows.push_back(row);
            row = {};
            col = 0;
        }
    }
    if (col != 0) rows.push_back(row);
    return rows;
}

std::vector<std::string> month_grid(int year, Month m) {
    std::vector<std::string> lines;
    std::string name(to_token(m).substr(0, 3));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    const std::string title = name + " " + std::to_string(year);
    lines.push_back(std::string((20 - title.size()) / 2, ' ') + title);
    lines.emplace_back(" S  M Tu  W Th  F  S");
    for (const auto& week : month_weeks(year, m)) {
        std::string line;
        for (std::size_t i = 0; i < 7; ++i) {
            if (i) line += ' ';
            char cell[4];
            if (week[i])
                std::snprintf(cell, sizeof cell, "%2d", week[i]);
            else
                std::snprintf(cell, sizeof cell, "  ");
            line += cell;
        }
        line.erase(line.find_last_not_of(' ') + 1);
        lines.push_back(line);
    }
    return lines;
}

std::string to_iso(const CalendarDate& d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, month_number(d.month), d.day);
    return buf;
}

std::optional<CalendarDate> parse_iso(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    auto num = [](std::string_view part, int& out) {
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return ec == std::errc() && p == part.data() + part.size();
    };
    if (!num(s.substr(0, 4), y) || !num(s.substr(5, 2), m) || !num(s.substr(8, 2), d)) return std::nullopt;
    if (y < kMinYear || y > kMaxYear || m < 1 || m > 12 || !is_valid_date(y, month_from_number(m), d))
        return std::nullopt;
    return CalendarDate{y, month_from_number(m), d};
}

}  // namespace tca::calendar
