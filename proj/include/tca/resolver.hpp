#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tca/diagnostic.hpp"
#include "tca/model.hpp"

// Guideline inference rules: completing a time point from the dialog date,
// end-point completion, hour to time-of-day readings, and carrying the date
// under negotiation forward from earlier records.
namespace tca::resolver {

/// Only records of utterances already coded, in label order. The record
/// being resolved is never part of its own context.
struct DialogContext {
    DialogDate dialog_date;
    std::vector<TemporalRecord> prior_records;
};

enum class Confidence { forced, contextual };

std::string_view to_string(Confidence c);

// Rule identifiers carried by suggestions.
namespace rules {
inline constexpr std::string_view weekday_from_date = "weekday-from-date";
inline constexpr std::string_view month_nearest_future = "month-nearest-future";
inline constexpr std::string_view date_from_weekday = "date-from-weekday";
inline constexpr std::string_view end_completion = "end-completion";
inline constexpr std::string_view time_of_day_table = "time-of-day-table";
inline constexpr std::string_view time_of_day_context = "time-of-day-context";
inline constexpr std::string_view carry_forward = "carry-forward-date";
}  // namespace rules

struct Suggestion {
    std::string field_path;
    std::string proposed_value;
    std::string rule;
    Confidence confidence = Confidence::contextual;
    friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct Completion {
    TimePoint point;
    std::vector<Suggestion> suggestions;
    /// Inconsistencies found in the input (E-WDAY); never repaired.
    std::vector<Diagnostic> conflicts;
};

/// Year a month/day pair refers to: the dialog year, or the next one when the
/// month falls before the dialog month.
int resolve_year(const DialogDate& dialog, Month month);

/// First month, scanning forward from the dialog date, that contains `day`
/// on or after the dialog date (and falls on `weekday` when given). Searches
/// at most twelve months ahead.
std::optional<Month> nearest_future_month(const DialogDate& dialog, int day,
                                          std::optional<Weekday> weekday = std::nullopt);

/// Fills null weekday/month fields that follow from the other fields and the
/// dialog date. Never overwrites a non-null field. `prefix` names the point
/// in suggestion paths ("start" or "end").
Completion complete_time_point(const TimePoint& p, const DialogContext& ctx,
                               std::string_view prefix = "start");

/// Copies the start's date-level fields into an unspecified end point.
TimePoint complete_end_point(const TimePoint& start, const TimePoint& end);

/// Hour -> time-of-day readings used when no context decides.
class TimeOfDayTable {
public:
    /// Hours 1-6 and 12 read as afternoon; 7-11 stay null.
    static TimeOfDayTable defaults();

    /// Key-value text: `1-6 = afternoon`, `12 = afternoon`, `7-11 = null`;
    /// `#` starts a comment. Unlisted hours map to null. Throws
    /// std::invalid_argument on malformed lines.
    static TimeOfDayTable parse(std::string_view text);
    static TimeOfDayTable load(const std::string& path);

    std::optional<TimeOfDay> lookup(int hour) const;
    void set(int hour, std::optional<TimeOfDay> value);

private:
    std::array<std::optional<TimeOfDay>, 13> by_hour_{};
};

std::optional<TimeOfDay> infer_time_of_day(const HourSpec& h, const DialogContext& ctx,
                                           const TimeOfDayTable& table = TimeOfDayTable::defaults());

inline constexpr std::size_t kCarryForwardWindow = 10;

std::vector<Suggestion> carry_forward_date(const DialogContext& ctx, const TimePoint& p,
                                           std::string_view prefix = "start");

/// Every suggestion the resolver has for one record, forced ones first.
struct RecordResolution {
    TemporalRecord completed;  // forced suggestions applied
    std::vector<Suggestion> suggestions;
    std::vector<Diagnostic> conflicts;
};

RecordResolution resolve_record(const TemporalRecord& r, const DialogContext& ctx,
                                 const TimeOfDayTable& table = TimeOfDayTable::defaults());

}  // namespace tca::resolver
