#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tca/model.hpp"

namespace tca {

enum class Severity { error, warning, info };

// Stable rule codes. E-codes block export, W-codes do not.
namespace codes {
inline constexpr std::string_view vocab = "E-VOCAB";
inline constexpr std::string_view arity = "E-ARITY";
inline constexpr std::string_view label = "E-LABEL";
inline constexpr std::string_view weekday = "E-WDAY";
inline constexpr std::string_view order = "E-ORDER";
inline constexpr std::string_view qualifier_on_null = "E-QUAL-NULL";
inline constexpr std::string_view alt_base = "W-ALT-BASE";
inline constexpr std::string_view end_complete = "W-END-COMPLETE";
inline constexpr std::string_view qualifier_many = "W-QUAL-MANY";
inline constexpr std::string_view hour_ampm = "W-HOUR-AMPM";
// Parser-only failures.
inline constexpr std::string_view syntax = "E-SYNTAX";
inline constexpr std::string_view missing_header = "E-HEADER";
inline constexpr std::string_view bad_date = "E-DATE";
}  // namespace codes

struct Diagnostic {
    std::string code;
    Severity severity = Severity::error;
    std::optional<RecordLabel> label;
    std::optional<std::string> field_path;
    std::string message;
    std::optional<int> line;
    std::optional<int> column;

    bool is_error() const { return severity == Severity::error; }
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Severity severity_of(std::string_view code);

Diagnostic make_diagnostic(std::string_view code, std::optional<RecordLabel> label,
                           std::optional<std::string> field_path, std::string message);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

std::string_view to_string(Severity s);

/// `CODE label fieldPath message`, with `-` for absent label or path and a
/// trailing `(line:col)` when the position is known.
std::string format_diagnostic(const Diagnostic& d);

}  // namespace tca
