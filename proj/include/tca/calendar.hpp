#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tca/model.hpp"

// Gregorian calendar arithmetic over 1900..2099. Weeks are Monday..Friday
// workweeks; weekends never belong to a week span.
namespace tca::calendar {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2099;

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class NoSuchWeek : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct DateInterval {
    CalendarDate first;
    CalendarDate last;
    friend bool operator==(const DateInterval&, const DateInterval&) = default;
};

bool is_leap_year(int year);
int days_in_month(int year, Month m);
bool is_valid_date(int year, Month m, int day);
bool is_valid_date(const CalendarDate& d);

/// Days since 1970-01-01 (negative before).
long to_day_number(const CalendarDate& d);
CalendarDate from_day_number(long n);

Weekday weekday_of(const CalendarDate& d);

/// Throws OutOfRange when the result leaves 1900..2099.
CalendarDate add_days(const CalendarDate& d, long n);

DateInterval this_workweek(const CalendarDate& d);
DateInterval next_workweek(const CalendarDate& d);
DateInterval month_interval(int year, Month m);

/// Month-clipped workweeks with at least three working days in the month.
std::vector<DateInterval> qualifying_workweeks(int year, Month m);
/// n is 1-based; throws NoSuchWeek when the month has fewer qualifying weeks.
DateInterval nth_workweek_of_month(int year, Month m, int n);
DateInterval last_workweek_of_month(int year, Month m);

/// Seven-column text grid in the classic `cal` layout: centred title,
/// " S  M Tu  W Th  F  S", then one line per week with trailing blanks trimmed.
std::vector<std::string> month_grid(int year, Month m);

/// Weeks of the month as rows of 7 cells (0 = blank), Sunday first.
std::vector<std::array<int, 7>> month_weeks(int year, Month m);

std::string to_iso(const CalendarDate& d);
/// Parses YYYY-MM-DD; nullopt when malformed or not a real date.
std::optional<CalendarDate> parse_iso(std::string_view s);

}  // namespace tca::calendar
