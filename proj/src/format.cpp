#include "tca/format.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "tca/calendar.hpp"

namespace tca {

namespace {

bool is_open(char c) { return c == '[' || c == '('; }
char closer_for(char open) { return open == '[' ? ']' : ')'; }

bool is_bare_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.';
}

bool needs_quotes(std::string_view token) {
    return token.find(':') != std::string_view::npos || token.find('-') != std::string_view::npos;
}

std::string quote_if_needed(const std::string& token) {
    return needs_quotes(token) ? "'" + token + "'" : token;
}

// Hour written with an AM/PM marker, e.g. "3pm", "10:30 a.m.".
const std::regex& ampm_pattern() {
    static const std::regex re(R"(^(\d{1,2}(?::\d{2})?)\s*(am|pm|a\.m\.|p\.m\.|a|p)$)");
    return re;
}

struct RawField {
    std::vector<std::string> items;
    SourcePos pos;
};

struct RawRecord {
    std::string label;
    SourcePos pos;
    std::vector<RawField> fields;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParseResult run() {
        ParseResult result;
        if (!check_ascii()) return fail(result);

        auto header = find_header();
        if (!header) return fail(result);

        std::vector<TemporalRecord> records;
        if (!parse_body(records)) return fail(result);

        result.diagnostics = std::move(diags_);
        if (!has_errors(result.diagnostics)) result.file = AnnotationFile{*header, std::move(records)};
        return result;
    }

private:
    ParseResult fail(ParseResult& r) {
        r.diagnostics = std::move(diags_);
        return std::move(r);
    }

    void syntax_error(const std::string& message) { error_at(codes::syntax, message, here()); }

    void error_at(std::string_view code, const std::string& message, SourcePos pos,
                  std::optional<RecordLabel> label = std::nullopt) {
        Diagnostic d = make_diagnostic(code, std::move(label), std::nullopt, message);
        d.line = pos.line;
        d.column = pos.column;
        diags_.push_back(std::move(d));
    }

    SourcePos here() const { return {line_, col_}; }
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }

    void advance() {
        if (eof()) return;
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    bool check_ascii() {
        for (std::size_t i = 0; i < text_.size(); ++i) {
            const auto c = static_cast<unsigned char>(text_[i]);
            if (c > 0x7F || (c < 0x20 && c != '\n' && c != '\r' && c != '\t')) {
                while (pos_ < i) advance();
                syntax_error("non-ASCII or control byte in input");
                return false;
            }
        }
        return true;
    }

    std::optional<DialogDate> find_header() {
        static const std::regex re(R"(Dialog\s+Date\s*:[ \t]*([^\r\n]*))", std::regex::icase);
        std::match_results<std::string_view::const_iterator> m;
        if (!std::regex_search(text_.begin(), text_.end(), m, re)) {
            error_at(codes::missing_header, "missing 'Dialog Date:' header line", {1, 1});
            return std::nullopt;
        }
        std::string value = m[1].str();
        // Tolerate a closing comment marker on the same line.
        if (auto p = value.find("*/"); p != std::string::npos) value.erase(p);
        auto date = parse_dialog_date(value);
        if (!date) {
            int line = 1;
            for (auto it = text_.begin(); it != m[0].first; ++it)
                if (*it == '\n') ++line;
            error_at(codes::bad_date, "dialog date '" + value + "' is not a real calendar date", {line, 1});
        }
        return date;
    }

    // Whitespace and comments: /* ... */ blocks and ';' to end of line.
    bool skip_ws() {
        while (!eof()) {
            const char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                const SourcePos start = here();
                advance();
                advance();
                while (!eof() && !(peek() == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) advance();
                if (eof()) {
                    error_at(codes::syntax, "unterminated comment", start);
                    return false;
                }
                advance();
                advance();
            } else {
                break;
            }
        }
        return true;
    }

    bool parse_body(std::vector<TemporalRecord>& records) {
        if (!skip_ws()) return false;
        if (eof() || !is_open(peek())) {
            syntax_error("expected '[' to start the record list");
            return false;
        }
        bool outer = false;
        if (peek() == '[') {
            // Look past the bracket: another opener (or an immediate close)
            // means this is the enclosing list rather than a record.
            const auto saved = std::tuple{pos_, line_, col_};
            advance();
            if (!skip_ws()) return false;
            outer = eof() || is_open(peek()) || peek() == ']';
            std::tie(pos_, line_, col_) = saved;
        }

        if (outer) {
            advance();
            if (!skip_ws()) return false;
            if (peek() != ']') {
                for (;;) {
                    if (!parse_record(records)) return false;
                    if (!skip_ws()) return false;
                    if (peek() == ',') {
                        advance();
                        if (!skip_ws()) return false;
                        continue;
                    }
                    if (peek() == ']') break;
                    syntax_error(eof() ? "unbalanced brackets: record list not closed"
                                       : "missing comma between records");
                    return false;
                }
            }
            advance();
            if (!skip_ws()) return false;
            if (peek() == '.') advance();
        } else {
            while (!eof() && is_open(peek())) {
                if (!parse_record(records)) return false;
                if (!skip_ws()) return false;
                if (peek() == ',') {
                    advance();
                    if (!skip_ws()) return false;
                }
            }
            if (peek() == '.') advance();
        }
        if (!skip_ws()) return false;
        if (!eof()) {
            syntax_error(std::string("unexpected '") + peek() + "' after record list");
            return false;
        }
        return true;
    }

    std::optional<std::string> parse_item() {
        if (!skip_ws()) return std::nullopt;
        const char c = peek();
        if (c == '\'' || c == '"') {
            const SourcePos start = here();
            advance();
            std::string out;
            while (!eof() && peek() != c && peek() != '\n') {
                out += peek();
                advance();
            }
            if (peek() != c) {
                error_at(codes::syntax, "unterminated quoted token", start);
                return std::nullopt;
            }
            advance();
            if (out.empty()) {
                error_at(codes::syntax, "empty quoted token", start);
                return std::nullopt;
            }
            return out;
        }
        std::string out;
        while (!eof() && (is_bare_char(peek()) || peek() == ' ' || peek() == '\t')) {
            out += peek();
            advance();
        }
        while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
        if (out.empty()) {
            if (eof())
                syntax_error("unexpected end of input");
            else
                syntax_error(std::string("unexpected '") + c + "'");
            return std::nullopt;
        }
        return out;
    }

    bool parse_field(RawField& field) {
        field.pos = here();
        const char close = closer_for(peek());
        advance();
        for (;;) {
            auto item = parse_item();
            if (!item) return false;
            field.items.push_back(std::move(*item));
            if (!skip_ws()) return false;
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == close) {
                advance();
                return true;
            }
            if (peek() == ']' || peek() == ')')
                syntax_error("unbalanced brackets: mismatched closing delimiter");
            else if (eof())
                syntax_error("unbalanced brackets: field not closed");
            else
                syntax_error("missing comma between field items");
            return false;
        }
    }

    bool parse_record(std::vector<TemporalRecord>& records) {
        if (!is_open(peek())) {
            syntax_error(eof() ? "unexpected end of input" : "expected '[' to start a record");
            return false;
        }
        RawRecord raw;
        raw.pos = here();
        const char close = closer_for(peek());
        advance();
        auto label = parse_item();
        if (!label) return false;
        raw.label = std::move(*label);
        for (;;) {
            if (!skip_ws()) return false;
            if (peek() == close) {
                advance();
                break;
            }
            if (peek() != ',') {
                if (peek() == ']' || peek() == ')')
                    syntax_error("unbalanced brackets: mismatched closing delimiter");
                else if (eof())
                    syntax_error("unbalanced brackets: record not closed");
                else
                    syntax_error("missing comma between fields");
                return false;
            }
            advance();
            if (!skip_ws()) return false;
            if (!is_open(peek())) {
                syntax_error("expected '[' or '(' to start a field");
                return false;
            }
            RawField field;
            if (!parse_field(field)) return false;
            raw.fields.push_back(std::move(field));
        }

        if (raw.fields.size() != static_cast<std::size_t>(kSlotCount)) {
            error_at(codes::arity,
                     "record has " + std::to_string(raw.fields.size()) + " fields; expected 10 (5 start + 5 end)",
                     raw.pos, try_parse_label(raw.label));
            return true;
        }
        std::vector<std::vector<std::string>> slots;
        std::vector<SourcePos> slot_pos;
        for (auto& f : raw.fields) {
            slots.push_back(std::move(f.items));
            slot_pos.push_back(f.pos);
        }
        if (auto r = assemble_record(raw.label, slots, diags_, raw.pos, slot_pos)) records.push_back(std::move(*r));
        return true;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::vector<Diagnostic> diags_;
};

struct FieldContext {
    std::vector<Diagnostic>& diags;
    const std::optional<RecordLabel>& label;
    std::string path;
    std::optional<SourcePos> pos;

    void report(std::string_view code, std::string message) const {
        Diagnostic d = make_diagnostic(code, label, path, std::move(message));
        if (pos) {
            d.line = pos->line;
            d.column = pos->column;
        }
        diags.push_back(std::move(d));
    }
};

template <class V, class ParseValue>
bool type_field(const std::vector<std::string>& raw, QualifiedField<V>& out, const FieldContext& ctx,
                ParseValue parse_value) {
    if (raw.empty()) {
        ctx.report(codes::arity, "empty field");
        return false;
    }
    std::vector<std::string> items;
    for (const auto& r : raw) items.push_back(to_lower(r));
    const std::string& value = items.back();
    bool ok = true;

    if (value == "null") {
        if (items.size() > 1) {
            ctx.report(codes::qualifier_on_null, "qualifier attached to a null field");
            return false;
        }
        out = {};
        return true;
    }

    std::vector<Qualifier> quals;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        if (auto q = parse_qualifier(items[i])) {
            quals.push_back(*q);
        } else {
            ctx.report(codes::vocab, "'" + items[i] + "' is not a qualifier");
            ok = false;
        }
    }
    if (quals.size() > 2) {
        ctx.report(codes::vocab, "at most two qualifiers are allowed per field");
        ok = false;
    }
    auto v = parse_value(value, ctx);
    if (!v) ok = false;
    if (!ok) return false;
    out = QualifiedField<V>(std::move(quals), std::move(*v));
    return true;
}

template <class V>
auto vocab_parser(std::optional<V> (*parse)(std::string_view), std::string_view what) {
    return [parse, what](const std::string& token, const FieldContext& ctx) -> std::optional<V> {
        auto v = parse(token);
        if (!v) ctx.report(codes::vocab, "'" + token + "' is not a valid " + std::string(what));
        return v;
    };
}

std::optional<HourSpec> parse_hour_field(const std::string& token, const FieldContext& ctx) {
    if (auto h = parse_hour(token)) return h;
    std::smatch m;
    if (std::regex_match(token, m, ampm_pattern())) {
        if (auto h = parse_hour(m[1].str())) {
            ctx.report(codes::hour_ampm,
                       "AM/PM marker in hour '" + token + "' dropped; code it in the time-of-day field");
            return h;
        }
    }
    ctx.report(codes::vocab, "'" + token + "' is not a valid hour (1..12, optional :MM)");
    return std::nullopt;
}

bool type_point(const std::vector<std::vector<std::string>>& slots, int offset, TimePoint& p,
                std::vector<Diagnostic>& diags, const std::optional<RecordLabel>& label,
                const std::vector<SourcePos>& slot_pos) {
    auto ctx = [&](int i) {
        const int slot = offset + i;
        std::optional<SourcePos> pos;
        if (static_cast<std::size_t>(slot) < slot_pos.size()) pos = slot_pos[static_cast<std::size_t>(slot)];
        return FieldContext{diags, label, std::string(kSlotPaths[static_cast<std::size_t>(slot)]), pos};
    };
    const auto& s = [&](int i) -> const std::vector<std::string>& { return slots[static_cast<std::size_t>(offset + i)]; };
    bool ok = true;
    ok &= type_field(s(0), p.weekday, ctx(0), vocab_parser<Weekday>(parse_weekday, "weekday"));
    ok &= type_field(s(1), p.month, ctx(1), vocab_parser<Month>(parse_month, "month"));
    ok &= type_field(s(2), p.date, ctx(2), vocab_parser<DayOfMonth>(parse_day_of_month, "date (1..31)"));
    ok &= type_field(s(3), p.hour, ctx(3), parse_hour_field);
    ok &= type_field(s(4), p.time_of_day, ctx(4), vocab_parser<TimeOfDay>(parse_time_of_day, "time of day"));
    return ok;
}

}  // namespace

std::optional<TemporalRecord> assemble_record(std::string_view label_text,
                                              const std::vector<std::vector<std::string>>& slots,
                                              std::vector<Diagnostic>& diagnostics, std::optional<SourcePos> pos,
                                              const std::vector<SourcePos>& slot_pos) {
    auto label = try_parse_label(label_text);
    auto report = [&](std::string_view code, std::string message) {
        Diagnostic d = make_diagnostic(code, label, std::nullopt, std::move(message));
        if (pos) {
            d.line = pos->line;
            d.column = pos->column;
        }
        diagnostics.push_back(std::move(d));
    };
    bool ok = true;
    if (!label) {
        report(codes::label, "malformed record label '" + std::string(label_text) + "'");
        ok = false;
    }
    if (slots.size() != static_cast<std::size_t>(kSlotCount)) {
        report(codes::arity,
               "record has " + std::to_string(slots.size()) + " fields; expected 10 (5 start + 5 end)");
        return std::nullopt;
    }
    TemporalRecord r;
    ok &= type_point(slots, 0, r.start, diagnostics, label, slot_pos);
    ok &= type_point(slots, 5, r.end, diagnostics, label, slot_pos);
    if (!ok) return std::nullopt;
    r.label = *label;
    return r;
}

ParseResult parse_annotation_file(std::string_view text) { return Parser(text).run(); }

std::string format_dialog_date(const DialogDate& date) {
    std::string month(to_token(date.month));
    month[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(month[0])));
    return std::to_string(date.day) + " " + month + " " + std::to_string(date.year);
}

std::optional<DialogDate> parse_dialog_date(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
    if (auto iso = calendar::parse_iso(s)) return iso;

    auto month_of = [](const std::string& name) -> std::optional<Month> {
        const std::string n = to_lower(name);
        if (n.size() < 3) return std::nullopt;
        for (auto m : kAllMonths) {
            const auto full = to_token(m);
            if (n == full || n == full.substr(0, 3)) return m;
        }
        return std::nullopt;
    };
    static const std::regex dmy(R"(^(\d{1,2})\s+([A-Za-z]+)\.?,?\s+(\d{4})$)");
    static const std::regex mdy(R"(^([A-Za-z]+)\.?\s+(\d{1,2}),?\s+(\d{4})$)");
    std::smatch m;
    std::optional<Month> month;
    int day = 0, year = 0;
    if (std::regex_match(s, m, dmy)) {
        day = std::stoi(m[1].str());
        month = month_of(m[2].str());
        year = std::stoi(m[3].str());
    } else if (std::regex_match(s, m, mdy)) {
        month = month_of(m[1].str());
        day = std::stoi(m[2].str());
        year = std::stoi(m[3].str());
    } else {
        return std::nullopt;
    }
    if (!month || year < calendar::kMinYear || year > calendar::kMaxYear || !calendar::is_valid_date(year, *month, day))
        return std::nullopt;
    return DialogDate{year, *month, day};
}

std::string header_comment(const DialogDate& date) {
    std::ostringstream out;
    out << "/*\n";
    out << "   ;; Dialog Date: " << format_dialog_date(date) << "\n";
    out << "   ;;\n";
    for (const auto& line : calendar::month_grid(date.year, date.month)) out << "   ;;    " << line << "\n";
    out << "   ;;\n";
    out << "*/\n";
    return out.str();
}

namespace {

std::string serialize_field(const std::vector<std::string>& tokens) {
    std::string s = "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ", ";
        s += quote_if_needed(tokens[i]);
    }
    return s + "]";
}

}  // namespace

std::string serialize_record(const TemporalRecord& record) {
    const std::string label = format_label(record.label);
    std::string s = "[" + label + ", ";
    for (int slot = 0; slot < kSlotCount; ++slot) {
        s += serialize_field(slot_tokens(record, slot));
        if (slot == 4)
            s += ",\n" + std::string(label.size() + 3, ' ');
        else if (slot != kSlotCount - 1)
            s += ", ";
    }
    return s + "]";
}

std::string serialize_annotation_file(const AnnotationFile& file) {
    std::string s = header_comment(file.dialog_date);
    s += "\n\n[\n\n";
    for (std::size_t i = 0; i < file.records.size(); ++i) {
        if (i) s += ",\n\n";
        s += serialize_record(file.records[i]);
    }
    if (!file.records.empty()) s += "\n\n";
    s += "].\n";
    return s;
}

AnnotationFile make_template(const DialogDate& date, const std::vector<RecordLabel>& labels) {
    AnnotationFile f{date, {}};
    for (const auto& l : labels) f.records.push_back(TemporalRecord{l, {}, {}});
    return f;
}

}  // namespace tca
