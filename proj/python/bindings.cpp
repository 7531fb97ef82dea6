// Results cross the boundary as JSON text; the Python package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tca/agreement.hpp"
#include "tca/calendar.hpp"
#include "tca/format.hpp"
#include "tca/json_io.hpp"
#include "tca/resolver.hpp"
#include "tca/service.hpp"
#include "tca/validator.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

tca::AnnotationFile require_file(const std::string& text) {
    auto parsed = tca::parse_annotation_file(text);
    if (!parsed.ok()) {
        std::string msg = "cannot parse annotation file";
        if (!parsed.diagnostics.empty()) msg += ": " + tca::format_diagnostic(parsed.diagnostics.front());
        throw py::value_error(msg);
    }
    return std::move(*parsed.file);
}

tca::CalendarDate require_iso(const std::string& iso) {
    auto d = tca::calendar::parse_iso(iso);
    if (!d) throw py::value_error("not a YYYY-MM-DD date in range: " + iso);
    return *d;
}

std::string parse(const std::string& text) {
    auto parsed = tca::parse_annotation_file(text);
    return json{{"file", parsed.file ? tca::json_io::to_json(*parsed.file) : json(nullptr)},
                {"diagnostics", tca::json_io::to_json(parsed.diagnostics)}}
        .dump();
}

std::string serialize(const std::string& file_json) {
    auto parsed = tca::json_io::file_from_json(json::parse(file_json));
    if (!parsed.ok()) {
        std::string msg = "malformed annotation file";
        if (!parsed.diagnostics.empty()) msg += ": " + tca::format_diagnostic(parsed.diagnostics.front());
        throw py::value_error(msg);
    }
    return tca::serialize_annotation_file(*parsed.file);
}

std::string validate(const std::string& text) { return tca::json_io::to_json(tca::validator::validate_text(text)).dump(); }

std::string resolve(const std::string& text) {
    const auto file = require_file(text);
    tca::AnnotationFile completed{file.dialog_date, {}};
    json out = json::array();
    for (const auto& r : file.records) {
        tca::resolver::DialogContext ctx{file.dialog_date, completed.records};
        auto res = tca::resolver::resolve_record(r, ctx);
        for (const auto& s : res.suggestions)
            out.push_back({{"label", tca::format_label(r.label)},
                           {"fieldPath", s.field_path},
                           {"proposedValue", s.proposed_value},
                           {"rule", s.rule},
                           {"confidence", std::string(tca::resolver::to_string(s.confidence))}});
        completed.records.push_back(res.completed);
    }
    return out.dump();
}

std::string compare(const std::string& a, const std::string& b, bool gold) {
    const auto fa = require_file(a);
    const auto fb = require_file(b);
    try {
        if (gold) return tca::agreement::to_json(tca::agreement::score_against_gold(fa, fb)).dump();
        return tca::agreement::to_json(tca::agreement::compare_files(fa, fb)).dump();
    } catch (const tca::agreement::DateMismatch& e) {
        throw py::value_error(e.what());
    }
}

std::string make_template(const std::string& dialog_json) {
    tca::service::DialogTranscript t;
    try {
        t = tca::service::transcript_from_json(json::parse(dialog_json));
    } catch (const std::exception& e) {
        throw py::value_error(e.what());
    }
    std::vector<tca::RecordLabel> labels;
    for (const auto& u : t.utterances) labels.push_back(u.label);
    return tca::serialize_annotation_file(tca::make_template(t.dialog_date, labels));
}

std::string weekday(const std::string& iso) {
    return std::string(tca::to_token(tca::calendar::weekday_of(require_iso(iso))));
}

std::string calendar_month(int year, int month) {
    if (month < 1 || month > 12 || year < tca::calendar::kMinYear || year > tca::calendar::kMaxYear)
        throw py::value_error("no such month");
    return tca::service::calendar_json(year, tca::month_from_number(month)).dump();
}

}  // namespace

PYBIND11_MODULE(_tca, m) {
    m.doc() = "Native core of the tca package";
    m.def("parse", &parse, py::arg("text"));
    m.def("serialize", &serialize, py::arg("file_json"));
    m.def("validate", &validate, py::arg("text"));
    m.def("resolve", &resolve, py::arg("text"));
    m.def("compare", &compare, py::arg("a"), py::arg("b"), py::arg("gold") = false);
    m.def("make_template", &make_template, py::arg("dialog_json"));
    m.def("weekday", &weekday, py::arg("iso"));
    m.def("calendar_month", &calendar_month, py::arg("year"), py::arg("month"));
}
