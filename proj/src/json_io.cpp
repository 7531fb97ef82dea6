#include "tca/json_io.hpp"

#include "tca/calendar.hpp"

namespace tca::json_io {

json to_json(const TemporalRecord& record) {
    json j = json::object();
    j["Label"] = format_label(record.label);
    for (int slot = 0; slot < kSlotCount; ++slot) {
        auto tokens = slot_tokens(record, slot);
        const std::string name(kSlotNames[static_cast<std::size_t>(slot)]);
        if (tokens.size() == 1 && tokens[0] == "null")
            j[name] = nullptr;
        else
            j[name] = tokens;
    }
    return j;
}

json to_json(const AnnotationFile& file) {
    json records = json::array();
    for (const auto& r : file.records) records.push_back(to_json(r));
    return {{"dialogDate", calendar::to_iso(file.dialog_date)}, {"records", std::move(records)}};
}

json to_json(const Diagnostic& d) {
    json j = {{"code", d.code}, {"severity", std::string(to_string(d.severity))}, {"message", d.message}};
    j["label"] = d.label ? json(format_label(*d.label)) : json(nullptr);
    j["fieldPath"] = d.field_path ? json(*d.field_path) : json(nullptr);
    if (d.line) j["line"] = *d.line;
    if (d.column) j["column"] = *d.column;
    return j;
}

json to_json(const std::vector<Diagnostic>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back(to_json(d));
    return arr;
}

RecordResult record_from_json(const json& j, std::optional<RecordLabel> label) {
    RecordResult out;
    auto fail = [&](std::string message) {
        out.diagnostics.push_back(make_diagnostic(codes::syntax, label, std::nullopt, std::move(message)));
        return out;
    };
    if (!j.is_object()) return fail("record payload must be a JSON object");

    std::string label_text;
    if (j.contains("Label")) {
        if (!j["Label"].is_string()) return fail("\"Label\" must be a string");
        label_text = j["Label"].get<std::string>();
        if (label) {
            auto body_label = try_parse_label(label_text);
            if (!body_label || !(*body_label == *label))
                return fail("body label '" + label_text + "' does not match '" + format_label(*label) + "'");
        }
    } else if (label) {
        label_text = format_label(*label);
    } else {
        return fail("record payload has no \"Label\"");
    }

    std::vector<std::vector<std::string>> slots;
    for (auto name : kSlotNames) {
        const std::string key(name);
        if (!j.contains(key)) {
            out.diagnostics.push_back(make_diagnostic(codes::arity, label, std::nullopt, "missing slot " + key));
            continue;
        }
        const json& v = j[key];
        if (v.is_null()) {
            slots.push_back({"null"});
        } else if (v.is_string()) {
            slots.push_back({v.get<std::string>()});
        } else if (v.is_array() && !v.empty() &&
                   std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); })) {
            slots.push_back(v.get<std::vector<std::string>>());
        } else {
            return fail("slot " + key + " must be null, a token, or a non-empty array of tokens");
        }
    }
    if (!out.diagnostics.empty()) return out;
    out.record = assemble_record(label_text, slots, out.diagnostics);
    return out;
}

ParseResult file_from_json(const json& j) {
    ParseResult out;
    if (!j.is_object() || !j.contains("dialogDate") || !j["dialogDate"].is_string()) {
        out.diagnostics.push_back(make_diagnostic(codes::missing_header, std::nullopt, std::nullopt,
                                                  "missing \"dialogDate\" (YYYY-MM-DD)"));
        return out;
    }
    auto date = calendar::parse_iso(j["dialogDate"].get<std::string>());
    if (!date) {
        out.diagnostics.push_back(
            make_diagnostic(codes::bad_date, std::nullopt, std::nullopt, "dialogDate is not a real date"));
        return out;
    }
    AnnotationFile file{*date, {}};
    if (j.contains("records")) {
        if (!j["records"].is_array()) {
            out.diagnostics.push_back(
                make_diagnostic(codes::syntax, std::nullopt, std::nullopt, "\"records\" must be an array"));
            return out;
        }
        for (const auto& rj : j["records"]) {
            auto r = record_from_json(rj);
            out.diagnostics.insert(out.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
            if (r.record) file.records.push_back(std::move(*r.record));
        }
    }
    if (!has_errors(out.diagnostics)) out.file = std::move(file);
    return out;
}

}  // namespace tca::json_io
