#include "tca/diagnostic.hpp"

namespace tca {

Severity severity_of(std::string_view code) {
    if (code.starts_with("E-")) return Severity::error;
    if (code.starts_with("W-")) return Severity::warning;
    return Severity::info;
}

Diagnostic make_diagnostic(std::string_view code, std::optional<RecordLabel> label,
                           std::optional<std::string> field_path, std::string message) {
    Diagnostic d;
    d.code = std::string(code);
    d.severity = severity_of(code);
    d.label = std::move(label);
    d.field_path = std::move(field_path);
    d.message = std::move(message);
    return d;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics)
        if (d.is_error()) return true;
    return false;
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::error: return "error";
        case Severity::warning: return "warning";
        case Severity::info: return "info";
    }
    return "info";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string s = d.code;
    s += ' ';
    s += d.label ? format_label(*d.label) : "-";
    s += ' ';
    s += d.field_path ? *d.field_path : "-";
    s += ' ';
    s += d.message;
    if (d.line) {
        s += " (" + std::to_string(*d.line);
        if (d.column) s += ":" + std::to_string(*d.column);
        s += ")";
    }
    return s;
}

}  // namespace tca
