#include "tca/validator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tca/calendar.hpp"
#include "tca/resolver.hpp"

namespace tca::validator {

namespace {

int path_rank(const Diagnostic& d) {
    if (!d.field_path) return -1;
    for (int i = 0; i < kSlotCount; ++i)
        if (*d.field_path == kSlotPaths[static_cast<std::size_t>(i)]) return i;
    return kSlotCount;
}

template <class V>
bool usable(const QualifiedField<V>& f) {
    return !f.is_null() && !f.is_open_ended();
}

class RecordChecker {
public:
    RecordChecker(const TemporalRecord& r, const DialogDate& dd) : r_(r), dd_(dd) {}

    std::vector<Diagnostic> run() {
        check_fields(r_.start, 0);
        check_fields(r_.end, 5);
        check_calendar(r_.start, 0);
        check_calendar(r_.end, 5);
        check_order();
        check_end_completion();
        std::stable_sort(out_.begin(), out_.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return path_rank(a) < path_rank(b); });
        return std::move(out_);
    }

private:
    void report(std::string_view code, int slot, std::string message) {
        out_.push_back(make_diagnostic(code, r_.label, std::string(kSlotPaths[static_cast<std::size_t>(slot)]),
                                       std::move(message)));
    }

    template <class V, class Check>
    void check_field(const QualifiedField<V>& f, int slot, Check value_ok) {
        if (f.is_null()) {
            if (!f.qualifiers.empty()) report(codes::qualifier_on_null, slot, "qualifier attached to a null field");
            return;
        }
        if (f.qualifiers.size() > 2)
            report(codes::vocab, slot, "at most two qualifiers are allowed per field");
        else if (f.qualifiers.size() > 1)
            report(codes::qualifier_many, slot, "more than one qualifier on a field");
        if (auto why = value_ok(*f.value); !why.empty()) report(codes::vocab, slot, why);
    }

    void check_fields(const TimePoint& p, int offset) {
        auto ok = [](const auto&) { return std::string(); };
        check_field(p.weekday, offset + 0, ok);
        check_field(p.month, offset + 1, ok);
        check_field(p.date, offset + 2, [](const DayOfMonth& d) {
            return d.value >= 1 && d.value <= 31 ? std::string() : "date " + std::to_string(d.value) + " outside 1..31";
        });
        check_field(p.hour, offset + 3, [](const HourSpec& h) {
            if (h.hour < 1 || h.hour > 12) return "hour " + std::to_string(h.hour) + " outside 1..12";
            if (h.minute && (*h.minute < 0 || *h.minute > 59)) return "minute " + std::to_string(*h.minute) + " outside 0..59";
            return std::string();
        });
        check_field(p.time_of_day, offset + 4, ok);
    }

    void check_calendar(const TimePoint& p, int offset) {
        if (!usable(p.month) || !usable(p.date)) return;
        const Month m = *p.month.value;
        const int day = p.date.value->value;
        const int year = resolver::resolve_year(dd_, m);
        if (day < 1 || day > 31) return;  // already E-VOCAB
        if (!calendar::is_valid_date(year, m, day)) {
            report(codes::vocab, offset + 2,
                   std::string(to_token(m)) + " " + std::to_string(year) + " has no day " + std::to_string(day));
            return;
        }
        if (!usable(p.weekday)) return;
        const Weekday actual = calendar::weekday_of({year, m, day});
        if (actual != *p.weekday.value)
            report(codes::weekday, offset + 0,
                   std::string(to_token(m)) + " " + std::to_string(day) + ", " + std::to_string(year) + " is a " +
                       std::string(to_token(actual)) + ", not " + std::string(to_token(*p.weekday.value)));
    }

    std::optional<long> day_number(const TimePoint& p) const {
        if (!usable(p.month) || !usable(p.date)) return std::nullopt;
        const int year = resolver::resolve_year(dd_, *p.month.value);
        if (!calendar::is_valid_date(year, *p.month.value, p.date.value->value)) return std::nullopt;
        return calendar::to_day_number({year, *p.month.value, p.date.value->value});
    }

    static bool same_day_level(const TimePoint& a, const TimePoint& b) {
        const bool open = a.weekday.is_open_ended() || a.month.is_open_ended() || a.date.is_open_ended() ||
                          b.weekday.is_open_ended() || b.month.is_open_ended() || b.date.is_open_ended();
        return !open && a.weekday == b.weekday && a.month == b.month && a.date == b.date;
    }

    static std::optional<int> period_rank(const QualifiedField<TimeOfDay>& t) {
        if (!usable(t)) return std::nullopt;
        switch (*t.value) {
            case TimeOfDay::morning: return 0;
            case TimeOfDay::afternoon: return 1;
            case TimeOfDay::evening: return 2;
            default: return std::nullopt;
        }
    }

    void check_order() {
        const TimePoint& s = r_.start;
        const TimePoint& e = r_.end;
        const auto sd = day_number(s);
        const auto ed = day_number(e);
        if (sd && ed) {
            if (*sd > *ed) {
                report(codes::order, 7, "interval ends before it starts");
                return;
            }
            if (*sd < *ed) return;
        } else if (!same_day_level(s, e)) {
            return;
        }

        if (usable(s.hour) && usable(e.hour) && usable(s.time_of_day) && usable(e.time_of_day)) {
            const auto sm = minute_of_day(*s.hour.value, *s.time_of_day.value);
            const auto em = minute_of_day(*e.hour.value, *e.time_of_day.value);
            if (sm && em) {
                if (*sm > *em) report(codes::order, 8, "interval ends before it starts");
                return;
            }
        }
        const auto sr = period_rank(s.time_of_day);
        const auto er = period_rank(e.time_of_day);
        if (sr && er && *sr > *er) report(codes::order, 9, "interval ends in an earlier part of the day");
    }

    void check_end_completion() {
        const TimePoint& s = r_.start;
        const TimePoint& e = r_.end;
        if (s.weekday.is_open_ended() || s.month.is_open_ended() || s.date.is_open_ended()) return;
        if (!s.weekday.is_null() && e.weekday.is_null())
            report(codes::end_complete, 5, "end weekday not copied from start");
        if (!s.month.is_null() && e.month.is_null()) report(codes::end_complete, 6, "end month not copied from start");
        if (!s.date.is_null() && e.date.is_null()) report(codes::end_complete, 7, "end date not copied from start");
        if (s.time_of_day.value == TimeOfDay::all_day && e.time_of_day.is_null() && same_day_level(s, e))
            report(codes::end_complete, 9, "all-day start with no all-day end");
    }

    const TemporalRecord& r_;
    const DialogDate& dd_;
    std::vector<Diagnostic> out_;
};

}  // namespace

std::optional<int> minute_of_day(const HourSpec& h, TimeOfDay tod) {
    const int base = (h.hour % 12) * 60 + h.minute.value_or(0);
    switch (tod) {
        case TimeOfDay::morning: return base;
        case TimeOfDay::afternoon:
        case TimeOfDay::evening: return base + 12 * 60;
        default: return std::nullopt;
    }
}

std::vector<Diagnostic> validate_record(const TemporalRecord& r, const DialogDate& dialog_date) {
    return RecordChecker(r, dialog_date).run();
}

std::vector<Diagnostic> validate_file(const AnnotationFile& f) {
    std::vector<Diagnostic> out;
    for (const auto& r : f.records) {
        auto ds = validate_record(r, f.dialog_date);
        out.insert(out.end(), std::make_move_iterator(ds.begin()), std::make_move_iterator(ds.end()));
    }

    auto less = [](const RecordLabel& a, const RecordLabel& b) { return compare_labels(a, b) < 0; };
    std::set<RecordLabel, decltype(less)> seen(less);
    const RecordLabel* highest = nullptr;
    for (const auto& r : f.records) {
        if (seen.count(r.label)) {
            out.push_back(make_diagnostic(codes::label, r.label, std::nullopt,
                                          "duplicate label " + format_label(r.label)));
            continue;
        }
        if (highest && compare_labels(r.label, *highest) < 0)
            out.push_back(make_diagnostic(codes::label, r.label, std::nullopt,
                                          "label " + format_label(r.label) + " out of order after " +
                                              format_label(*highest)));
        seen.insert(r.label);
        if (!highest || compare_labels(r.label, *highest) > 0) highest = &r.label;
    }

    // Conjunct families: indices must run 1..n with n >= 2.
    std::map<std::pair<std::string, int>, std::vector<int>> families;
    for (const auto& r : f.records)
        if (r.label.conjunct)
            families[{r.label.base, static_cast<int>(r.label.conjunct->kind)}].push_back(r.label.conjunct->index);
    for (auto& [key, indices] : families) {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
        const auto kind = static_cast<ConjunctKind>(key.second);
        const RecordLabel first{key.first, Conjunct{kind, indices.front()}};
        const std::string family = key.first + (kind == ConjunctKind::alt ? "_alt" : "_and");
        if (indices.size() == 1) {
            out.push_back(make_diagnostic(codes::alt_base, first, std::nullopt,
                                          family + " family has a single member; list every alternative"));
            continue;
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] != static_cast<int>(i) + 1) {
                out.push_back(make_diagnostic(codes::alt_base, first, std::nullopt,
                                              family + " family is missing index " + std::to_string(i + 1)));
                break;
            }
        }
    }
    return out;
}

std::vector<Diagnostic> validate_text(std::string_view text) {
    auto parsed = parse_annotation_file(text);
    if (!parsed.ok()) return parsed.diagnostics;
    auto out = std::move(parsed.diagnostics);
    auto ds = validate_file(*parsed.file);
    out.insert(out.end(), ds.begin(), ds.end());
    return out;
}

}  // namespace tca::validator
