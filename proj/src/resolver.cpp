#include "tca/resolver.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tca/calendar.hpp"

namespace tca::resolver {

namespace {

template <class V>
bool usable(const QualifiedField<V>& f) {
    return !f.is_null() && !f.is_open_ended();
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string s;
    for (const auto& t : tokens) {
        if (!s.empty()) s += ' ';
        s += t;
    }
    return s;
}

std::string path_of(std::string_view prefix, int field) {
    return std::string(prefix) + std::string(kSlotPaths[static_cast<std::size_t>(field)]).substr(5);
}

// Suggestions describing fields that were null in `before` and set in `after`.
void diff_points(const TimePoint& before, const TimePoint& after, std::string_view prefix,
                 std::string_view rule, Confidence confidence, std::vector<Suggestion>& out) {
    for (int f = 0; f < 5; ++f) {
        auto b = field_tokens(before, f);
        auto a = field_tokens(after, f);
        if (b != a && b == std::vector<std::string>{"null"})
            out.push_back({path_of(prefix, f), join_tokens(a), std::string(rule), confidence});
    }
}

int minute_of(const HourSpec& h) { return (h.hour % 12) * 60 + h.minute.value_or(0); }

struct Window {
    TimeOfDay tod;
    int from;  // minutes, inclusive
    int to;    // exclusive
};

constexpr std::array<Window, 3> kWindows = {{
    {TimeOfDay::morning, 5 * 60, 12 * 60},
    {TimeOfDay::afternoon, 12 * 60, 17 * 60},
    {TimeOfDay::evening, 17 * 60, 24 * 60},
}};

}  // namespace

std::string_view to_string(Confidence c) { return c == Confidence::forced ? "forced" : "contextual"; }

int resolve_year(const DialogDate& dialog, Month month) {
    return month < dialog.month ? dialog.year + 1 : dialog.year;
}

std::optional<Month> nearest_future_month(const DialogDate& dialog, int day, std::optional<Weekday> weekday) {
    Month m = dialog.month;
    for (int k = 0; k < 12; ++k, m = successor(m)) {
        const int year = resolve_year(dialog, m);
        if (!calendar::is_valid_date(year, m, day)) continue;
        if (k == 0 && day < dialog.day) continue;
        if (weekday && calendar::weekday_of({year, m, day}) != *weekday) continue;
        return m;
    }
    return std::nullopt;
}

Completion complete_time_point(const TimePoint& p, const DialogContext& ctx, std::string_view prefix) {
    Completion out{p, {}, {}};
    TimePoint& q = out.point;
    const auto given_weekday = usable(p.weekday) ? std::optional<Weekday>(*p.weekday.value) : std::nullopt;

    if (p.month.is_null() && usable(p.date)) {
        auto m = nearest_future_month(ctx.dialog_date, p.date.value->value, given_weekday);
        if (m) {
            q.month = *m;
            out.suggestions.push_back(
                {path_of(prefix, 1), std::string(to_token(*m)), std::string(rules::month_nearest_future),
                 Confidence::forced});
        }
    }

    if (usable(q.month) && usable(q.date)) {
        const int year = resolve_year(ctx.dialog_date, *q.month.value);
        const int day = q.date.value->value;
        if (calendar::is_valid_date(year, *q.month.value, day)) {
            const Weekday actual = calendar::weekday_of({year, *q.month.value, day});
            if (q.weekday.is_null()) {
                q.weekday = actual;
                out.suggestions.push_back({path_of(prefix, 0), std::string(to_token(actual)),
                                           std::string(rules::weekday_from_date), Confidence::forced});
            } else if (given_weekday && *given_weekday != actual) {
                out.conflicts.push_back(make_diagnostic(
                    codes::weekday, std::nullopt, path_of(prefix, 0),
                    std::string(to_token(*q.month.value)) + " " + std::to_string(day) + ", " +
                        std::to_string(year) + " is a " + std::string(to_token(actual)) + ", not " +
                        std::string(to_token(*given_weekday))));
            }
        }
    } else if (given_weekday && p.month.is_null() && p.date.is_null()) {
        // Next such weekday after the dialog date; a guess, so only proposed.
        CalendarDate d = ctx.dialog_date;
        do {
            d = calendar::add_days(d, 1);
        } while (calendar::weekday_of(d) != *given_weekday);
        out.suggestions.push_back({path_of(prefix, 1), std::string(to_token(d.month)),
                                   std::string(rules::date_from_weekday), Confidence::contextual});
        out.suggestions.push_back({path_of(prefix, 2), std::to_string(d.day), std::string(rules::date_from_weekday),
                                   Confidence::contextual});
    }
    return out;
}

TimePoint complete_end_point(const TimePoint& start, const TimePoint& end) {
    if (start.is_all_null()) return end;
    // An open-ended start ("after the 25th") has no implied end.
    if (start.weekday.is_open_ended() || start.month.is_open_ended() || start.date.is_open_ended()) return end;

    if (end.is_all_null()) {
        TimePoint e;
        e.weekday = start.weekday;
        e.month = start.month;
        e.date = start.date;
        if (start.time_of_day.value == TimeOfDay::all_day) e.time_of_day = start.time_of_day;
        return e;
    }

    // A partially specified end naming a different day is left alone.
    if ((!end.weekday.is_null() && end.weekday != start.weekday) ||
        (!end.month.is_null() && end.month != start.month) || (!end.date.is_null() && end.date != start.date))
        return end;

    TimePoint e = end;
    if (e.weekday.is_null()) e.weekday = start.weekday;
    if (e.month.is_null()) e.month = start.month;
    if (e.date.is_null()) e.date = start.date;
    return e;
}

TimeOfDayTable TimeOfDayTable::defaults() {
    TimeOfDayTable t;
    for (int h = 1; h <= 6; ++h) t.set(h, TimeOfDay::afternoon);
    t.set(12, TimeOfDay::afternoon);
    return t;
}

TimeOfDayTable TimeOfDayTable::parse(std::string_view text) {
    TimeOfDayTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto bad = [&](const std::string& why) {
            return std::invalid_argument("time-of-day table line " + std::to_string(lineno) + ": " + why);
        };
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw bad("expected 'hours = value'");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = to_lower(trim(line.substr(eq + 1)));
        int lo = 0, hi = 0;
        try {
            const auto dash = key.find('-');
            std::size_t used = 0;
            lo = std::stoi(key.substr(0, dash), &used);
            hi = dash == std::string::npos ? lo : std::stoi(key.substr(dash + 1));
        } catch (const std::exception&) {
            throw bad("bad hour range '" + key + "'");
        }
        if (lo < 1 || hi > 12 || lo > hi) throw bad("hour range must lie within 1..12");
        std::optional<TimeOfDay> tod;
        if (value != "null") {
            tod = parse_time_of_day(value);
            if (!tod) throw bad("unknown time of day '" + value + "'");
        }
        for (int h = lo; h <= hi; ++h) t.set(h, tod);
    }
    return t;
}

TimeOfDayTable TimeOfDayTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read time-of-day table " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::optional<TimeOfDay> TimeOfDayTable::lookup(int hour) const {
    if (hour < 1 || hour > 12) return std::nullopt;
    return by_hour_[static_cast<std::size_t>(hour)];
}

void TimeOfDayTable::set(int hour, std::optional<TimeOfDay> value) {
    if (hour < 1 || hour > 12) throw std::out_of_range("hour must be 1..12");
    by_hour_[static_cast<std::size_t>(hour)] = value;
}

std::optional<TimeOfDay> infer_time_of_day(const HourSpec& h, const DialogContext& ctx,
                                           const TimeOfDayTable& table) {
    // The part of day already under discussion wins when only one reading
    // of the hour falls inside it.
    const auto& prior = ctx.prior_records;
    const std::size_t n = std::min(prior.size(), kCarryForwardWindow);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tod = prior[prior.size() - 1 - i].start.time_of_day;
        if (!usable(tod)) continue;
        auto w = std::find_if(kWindows.begin(), kWindows.end(), [&](const Window& w) { return w.tod == *tod.value; });
        if (w == kWindows.end()) continue;
        const int am = minute_of(h);
        const int pm = am + 12 * 60;
        const bool am_in = am >= w->from && am < w->to;
        const bool pm_in = pm >= w->from && pm < w->to;
        if (am_in != pm_in) return w->tod;
        break;
    }
    return table.lookup(h.hour);
}

std::vector<Suggestion> carry_forward_date(const DialogContext& ctx, const TimePoint& p, std::string_view prefix) {
    std::vector<Suggestion> out;
    if (p.hour.is_null() && p.time_of_day.is_null()) return out;
    if (!p.month.is_null() || !p.date.is_null()) return out;

    auto fully_dated = [](const TimePoint& t) { return usable(t.weekday) && usable(t.month) && usable(t.date); };
    const auto& prior = ctx.prior_records;
    const std::size_t n = std::min(prior.size(), kCarryForwardWindow);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = prior[prior.size() - 1 - i];
        const TimePoint* src = fully_dated(r.start) ? &r.start : fully_dated(r.end) ? &r.end : nullptr;
        if (!src) continue;
        if (!p.weekday.is_null() && p.weekday != src->weekday) return out;
        if (p.weekday.is_null())
            out.push_back({path_of(prefix, 0), std::string(to_token(*src->weekday.value)),
                           std::string(rules::carry_forward), Confidence::contextual});
        out.push_back({path_of(prefix, 1), std::string(to_token(*src->month.value)), std::string(rules::carry_forward),
                       Confidence::contextual});
        out.push_back({path_of(prefix, 2), to_token(*src->date.value), std::string(rules::carry_forward),
                       Confidence::contextual});
        return out;
    }
    return out;
}

RecordResolution resolve_record(const TemporalRecord& r, const DialogContext& ctx, const TimeOfDayTable& table) {
    RecordResolution out;
    auto start = complete_time_point(r.start, ctx, "start");
    auto end = complete_time_point(r.end, ctx, "end");
    const TimePoint completed_end = complete_end_point(start.point, end.point);

    out.completed = {r.label, start.point, completed_end};
    auto& s = out.suggestions;
    s.insert(s.end(), start.suggestions.begin(), start.suggestions.end());
    s.insert(s.end(), end.suggestions.begin(), end.suggestions.end());
    diff_points(end.point, completed_end, "end", rules::end_completion, Confidence::forced, s);

    for (auto [point, prefix] : {std::pair{&out.completed.start, "start"}, std::pair{&out.completed.end, "end"}}) {
        if (usable(point->hour) && point->time_of_day.is_null()) {
            if (auto tod = infer_time_of_day(*point->hour.value, ctx, table)) {
                const bool from_table = table.lookup(point->hour.value->hour) == tod;
                s.push_back({path_of(prefix, 4), std::string(to_token(*tod)),
                             std::string(from_table ? rules::time_of_day_table : rules::time_of_day_context),
                             Confidence::contextual});
            }
        }
    }
    auto carried = carry_forward_date(ctx, r.start, "start");
    s.insert(s.end(), carried.begin(), carried.end());

    std::stable_partition(s.begin(), s.end(), [](const Suggestion& x) { return x.confidence == Confidence::forced; });
    for (auto& c : start.conflicts) c.label = r.label;
    for (auto& c : end.conflicts) c.label = r.label;
    out.conflicts = std::move(start.conflicts);
    out.conflicts.insert(out.conflicts.end(), end.conflicts.begin(), end.conflicts.end());
    return out;
}

}  // namespace tca::resolver
