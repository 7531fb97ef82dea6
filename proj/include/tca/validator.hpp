#pragma once

#include <string_view>
#include <vector>

#include "tca/diagnostic.hpp"
#include "tca/format.hpp"

namespace tca::validator {

/// Per-record checks (E-VOCAB, E-QUAL-NULL, E-WDAY, E-ORDER, W-QUAL-MANY,
/// W-END-COMPLETE), ordered by field slot.
std::vector<Diagnostic> validate_record(const TemporalRecord& r, const DialogDate& dialog_date);

/// Per-record diagnostics in file order, then cross-record label checks
/// (E-LABEL duplicates and ordering, W-ALT-BASE families).
std::vector<Diagnostic> validate_file(const AnnotationFile& f);

/// Parse then validate. Parse-stage failures are returned as-is and carry
/// the same rule codes (E-ARITY, E-VOCAB, E-LABEL, E-QUAL-NULL, W-HOUR-AMPM).
std::vector<Diagnostic> validate_text(std::string_view text);

/// Minute of the day a coded hour denotes, or nullopt when the time of day
/// does not pin AM/PM (null, meal values, all-day).
std::optional<int> minute_of_day(const HourSpec& h, TimeOfDay tod);

}  // namespace tca::validator
