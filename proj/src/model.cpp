#include "tca/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace tca {

namespace {

constexpr std::array<std::string_view, 7> kWeekdayTokens = {
    "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};
constexpr std::array<std::string_view, 12> kMonthTokens = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};
constexpr std::array<std::string_view, 7> kTimeOfDayTokens = {
    "morning", "afternoon", "evening", "breakfast", "lunch", "dinner", "all-day"};
constexpr std::array<std::string_view, 6> kQualifierTokens = {
    "before", "after", "during", "early", "mid", "late"};

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view token) {
    const std::string lowered = to_lower(token);
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == lowered) return static_cast<E>(i);
    return std::nullopt;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Decimal integer without leading zeros.
std::optional<int> parse_plain_int(std::string_view s) {
    if (!all_digits(s) || (s.size() > 1 && s[0] == '0') || s.size() > 6) return std::nullopt;
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

Weekday successor(Weekday d) { return static_cast<Weekday>((static_cast<int>(d) + 1) % 7); }
Month successor(Month m) { return static_cast<Month>((static_cast<int>(m) + 1) % 12); }

Month month_from_number(int n) {
    if (n < 1 || n > 12) throw std::out_of_range("month number out of range: " + std::to_string(n));
    return static_cast<Month>(n - 1);
}

std::string_view to_token(Weekday d) { return kWeekdayTokens[static_cast<std::size_t>(d)]; }
std::string_view to_token(Month m) { return kMonthTokens[static_cast<std::size_t>(m)]; }
std::string_view to_token(TimeOfDay t) { return kTimeOfDayTokens[static_cast<std::size_t>(t)]; }
std::string_view to_token(Qualifier q) { return kQualifierTokens[static_cast<std::size_t>(q)]; }
std::string to_token(DayOfMonth d) { return std::to_string(d.value); }

std::string to_token(const HourSpec& h) {
    std::string s = std::to_string(h.hour);
    if (h.minute) {
        s += ':';
        if (*h.minute < 10) s += '0';
        s += std::to_string(*h.minute);
    }
    return s;
}

std::optional<Weekday> parse_weekday(std::string_view t) { return lookup<Weekday>(kWeekdayTokens, t); }
std::optional<Month> parse_month(std::string_view t) { return lookup<Month>(kMonthTokens, t); }
std::optional<TimeOfDay> parse_time_of_day(std::string_view t) {
    return lookup<TimeOfDay>(kTimeOfDayTokens, t);
}
std::optional<Qualifier> parse_qualifier(std::string_view t) {
    return lookup<Qualifier>(kQualifierTokens, t);
}

std::optional<DayOfMonth> parse_day_of_month(std::string_view token) {
    auto v = parse_plain_int(token);
    if (!v || *v < 1 || *v > 31) return std::nullopt;
    return DayOfMonth{*v};
}

std::optional<HourSpec> parse_hour(std::string_view token) {
    const auto colon = token.find(':');
    auto hour = parse_plain_int(token.substr(0, colon));
    if (!hour || *hour < 1 || *hour > 12) return std::nullopt;
    HourSpec h{*hour, std::nullopt};
    if (colon == std::string_view::npos) return h;
    const auto mins = token.substr(colon + 1);
    if (mins.size() != 2 || !all_digits(mins)) return std::nullopt;
    const int m = (mins[0] - '0') * 10 + (mins[1] - '0');
    if (m > 59) return std::nullopt;
    h.minute = m;
    return h;
}

bool is_valid_token(FieldKind kind, std::string_view token) {
    switch (kind) {
        case FieldKind::weekday: return parse_weekday(token).has_value();
        case FieldKind::month: return parse_month(token).has_value();
        case FieldKind::date: return parse_day_of_month(token).has_value();
        case FieldKind::hour: return parse_hour(token).has_value();
        case FieldKind::time_of_day: return parse_time_of_day(token).has_value();
        case FieldKind::qualifier: return parse_qualifier(token).has_value();
    }
    return false;
}

std::optional<RecordLabel> try_parse_label(std::string_view text) {
    const std::string s = to_lower(text);
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0) return std::nullopt;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    RecordLabel label{s.substr(0, i), std::nullopt};
    if (i == s.size()) return label;

    std::string_view rest = std::string_view(s).substr(i);
    ConjunctKind kind;
    if (rest.starts_with("_alt"))
        kind = ConjunctKind::alt;
    else if (rest.starts_with("_and"))
        kind = ConjunctKind::and_;
    else
        return std::nullopt;
    auto index = parse_plain_int(rest.substr(4));
    if (!index || *index < 1) return std::nullopt;
    label.conjunct = Conjunct{kind, *index};
    return label;
}

RecordLabel parse_label(std::string_view text) {
    if (auto l = try_parse_label(text)) return *l;
    throw MalformedLabel("malformed record label '" + std::string(text) + "'");
}

std::string format_label(const RecordLabel& label) {
    std::string s = label.base;
    if (label.conjunct) {
        s += label.conjunct->kind == ConjunctKind::alt ? "_alt" : "_and";
        s += std::to_string(label.conjunct->index);
    }
    return s;
}

std::strong_ordering compare_labels(const RecordLabel& a, const RecordLabel& b) {
    auto split = [](const std::string& base) {
        std::size_t i = 0;
        while (i < base.size() && std::isdigit(static_cast<unsigned char>(base[i]))) ++i;
        // Strip leading zeros so "07" and "7" compare numerically.
        std::string digits = base.substr(0, i);
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        return std::make_pair(std::move(digits), base.substr(i));
    };
    auto [da, la] = split(a.base);
    auto [db, lb] = split(b.base);
    if (da.size() != db.size()) return da.size() <=> db.size();
    if (auto c = da <=> db; c != 0) return c;
    if (auto c = la <=> lb; c != 0) return c;
    if (!a.conjunct || !b.conjunct) return a.conjunct.has_value() <=> b.conjunct.has_value();
    if (auto c = static_cast<int>(a.conjunct->kind) <=> static_cast<int>(b.conjunct->kind); c != 0) return c;
    return a.conjunct->index <=> b.conjunct->index;
}

FieldKind slot_kind(int slot) {
    static constexpr std::array<FieldKind, 5> kinds = {
        FieldKind::weekday, FieldKind::month, FieldKind::date, FieldKind::hour, FieldKind::time_of_day};
    return kinds[static_cast<std::size_t>(slot % 5)];
}

namespace {

template <class V>
std::vector<std::string> tokens_of(const QualifiedField<V>& f) {
    if (f.is_null()) return {"null"};
    std::vector<std::string> out;
    for (auto q : f.qualifiers) out.emplace_back(to_token(q));
    out.emplace_back(to_token(*f.value));
    return out;
}

}  // namespace

std::vector<std::string> field_tokens(const TimePoint& p, int field) {
    switch (field) {
        case 0: return tokens_of(p.weekday);
        case 1: return tokens_of(p.month);
        case 2: return tokens_of(p.date);
        case 3: return tokens_of(p.hour);
        case 4: return tokens_of(p.time_of_day);
    }
    throw std::out_of_range("field index out of range");
}

std::vector<std::string> slot_tokens(const TemporalRecord& r, int slot) {
    if (slot < 0 || slot >= kSlotCount) throw std::out_of_range("slot index out of range");
    return field_tokens(slot < 5 ? r.start : r.end, slot % 5);
}

}  // namespace tca
