#pragma once

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tca {

enum class Weekday { sunday, monday, tuesday, wednesday, thursday, friday, saturday };

enum class Month {
    january, february, march, april, may, june,
    july, august, september, october, november, december
};

enum class TimeOfDay { morning, afternoon, evening, breakfast, lunch, dinner, all_day };

enum class Qualifier { before, after, during, early, mid, late };

inline constexpr std::array<Weekday, 7> kAllWeekdays = {
    Weekday::sunday, Weekday::monday, Weekday::tuesday, Weekday::wednesday,
    Weekday::thursday, Weekday::friday, Weekday::saturday};

inline constexpr std::array<Month, 12> kAllMonths = {
    Month::january, Month::february, Month::march, Month::april,
    Month::may, Month::june, Month::july, Month::august,
    Month::september, Month::october, Month::november, Month::december};

inline constexpr std::array<TimeOfDay, 7> kAllTimesOfDay = {
    TimeOfDay::morning, TimeOfDay::afternoon, TimeOfDay::evening, TimeOfDay::breakfast,
    TimeOfDay::lunch, TimeOfDay::dinner, TimeOfDay::all_day};

inline constexpr std::array<Qualifier, 6> kAllQualifiers = {
    Qualifier::before, Qualifier::after, Qualifier::during,
    Qualifier::early, Qualifier::mid, Qualifier::late};

Weekday successor(Weekday d);
Month successor(Month m);

/// 1-based month number (january = 1).
inline int month_number(Month m) { return static_cast<int>(m) + 1; }
Month month_from_number(int n);

struct DayOfMonth {
    int value = 1;
    friend bool operator==(const DayOfMonth&, const DayOfMonth&) = default;
};

/// Twelve-hour clock reading without an AM/PM marker. "10" and "10:00"
/// are distinct values: the minute is kept only when it was written.
struct HourSpec {
    int hour = 12;
    std::optional<int> minute;
    friend bool operator==(const HourSpec&, const HourSpec&) = default;
};

/// A field value preceded by zero or more qualifiers, e.g. (late, afternoon).
/// An absent value is the explicit `null` entry and carries no qualifiers.
template <class V>
struct QualifiedField {
    std::vector<Qualifier> qualifiers;
    std::optional<V> value;

    QualifiedField() = default;
    QualifiedField(V v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    QualifiedField(std::vector<Qualifier> q, V v) : qualifiers(std::move(q)), value(std::move(v)) {}

    bool is_null() const { return !value.has_value(); }
    bool has(Qualifier q) const {
        for (auto x : qualifiers)
            if (x == q) return true;
        return false;
    }
    /// Open-ended qualifiers (before/after) make the field unsuitable for
    /// calendar resolution.
    bool is_open_ended() const { return has(Qualifier::before) || has(Qualifier::after); }

    friend bool operator==(const QualifiedField&, const QualifiedField&) = default;
};

struct TimePoint {
    QualifiedField<Weekday> weekday;
    QualifiedField<Month> month;
    QualifiedField<DayOfMonth> date;
    QualifiedField<HourSpec> hour;
    QualifiedField<TimeOfDay> time_of_day;

    bool is_all_null() const {
        return weekday.is_null() && month.is_null() && date.is_null() && hour.is_null() &&
               time_of_day.is_null();
    }
    friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

enum class ConjunctKind { alt, and_ };

struct Conjunct {
    ConjunctKind kind = ConjunctKind::alt;
    int index = 1;
    friend bool operator==(const Conjunct&, const Conjunct&) = default;
};

struct RecordLabel {
    std::string base;
    std::optional<Conjunct> conjunct;
    friend bool operator==(const RecordLabel&, const RecordLabel&) = default;
};

/// Utterance order: numeric part of the base, then its letter suffix, then
/// the bare label before its `_alt`/`_and` conjuncts in index order.
std::strong_ordering compare_labels(const RecordLabel& a, const RecordLabel& b);

struct TemporalRecord {
    RecordLabel label;
    TimePoint start;
    TimePoint end;
    friend bool operator==(const TemporalRecord&, const TemporalRecord&) = default;
};

struct CalendarDate {
    int year = 1900;
    Month month = Month::january;
    int day = 1;
    friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
    friend auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
};

using DialogDate = CalendarDate;

class MalformedLabel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

RecordLabel parse_label(std::string_view text);
std::optional<RecordLabel> try_parse_label(std::string_view text);
std::string format_label(const RecordLabel& label);

// Token vocabularies. Parsing is case-insensitive; output is lowercase.
enum class FieldKind { weekday, month, date, hour, time_of_day, qualifier };

bool is_valid_token(FieldKind kind, std::string_view token);

std::string_view to_token(Weekday d);
std::string_view to_token(Month m);
std::string_view to_token(TimeOfDay t);
std::string_view to_token(Qualifier q);
std::string to_token(DayOfMonth d);
std::string to_token(const HourSpec& h);

std::optional<Weekday> parse_weekday(std::string_view token);
std::optional<Month> parse_month(std::string_view token);
std::optional<TimeOfDay> parse_time_of_day(std::string_view token);
std::optional<Qualifier> parse_qualifier(std::string_view token);
std::optional<DayOfMonth> parse_day_of_month(std::string_view token);
std::optional<HourSpec> parse_hour(std::string_view token);

std::string to_lower(std::string_view s);

// The ten field slots of a record, in file order.
inline constexpr int kSlotCount = 10;
inline constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "SWeekDay", "SMonth", "SDate", "SHourSpec", "STimeOfDay",
    "EWeekDay", "EMonth", "EDate", "EHourSpec", "ETimeOfDay"};
inline constexpr std::array<std::string_view, kSlotCount> kSlotPaths = {
    "start.weekday", "start.month", "start.date", "start.hour", "start.timeOfDay",
    "end.weekday",   "end.month",   "end.date",   "end.hour",   "end.timeOfDay"};

FieldKind slot_kind(int slot);

/// Canonical token list of one slot: qualifiers followed by the value, or
/// {"null"}. Two slots are equal iff their token lists are equal.
std::vector<std::string> slot_tokens(const TemporalRecord& r, int slot);
std::vector<std::string> field_tokens(const TimePoint& p, int field);

}  // namespace tca
