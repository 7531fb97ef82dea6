#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "tca/diagnostic.hpp"
#include "tca/format.hpp"

// JSON projection of records and files for the HTTP service. A record is
// {"Label": "28", "SWeekDay": ["friday"], ..., "ETimeOfDay": ["after", "lunch"]}
// where each slot is null or an array of tokens (qualifiers, then value).
namespace tca::json_io {

using nlohmann::json;

json to_json(const TemporalRecord& record);
json to_json(const AnnotationFile& file);
json to_json(const Diagnostic& d);
json to_json(const std::vector<Diagnostic>& ds);

struct RecordResult {
    std::optional<TemporalRecord> record;
    std::vector<Diagnostic> diagnostics;
};

/// `label` overrides (and must agree with) any "Label" member in the body.
RecordResult record_from_json(const json& j, std::optional<RecordLabel> label = std::nullopt);

ParseResult file_from_json(const json& j);

}  // namespace tca::json_io
