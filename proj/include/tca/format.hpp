#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tca/diagnostic.hpp"
#include "tca/model.hpp"

// Reader and writer for `.tca` annotation files:
//
//   /*
//      ;; Dialog Date: 5 March 1993
//      ;; ...month grid...
//   */
//   [
//   [28, [friday], [march], [5], ['12:00'], [afternoon],
//        [friday], [march], [5], ['2:00'], [afternoon]],
//   ...
//   ].
//
// Fields may be delimited by `[ ]` or `( )` on input; output always uses
// brackets. The outer list may be omitted on input.
namespace tca {

struct AnnotationFile {
    DialogDate dialog_date;
    std::vector<TemporalRecord> records;
    friend bool operator==(const AnnotationFile&, const AnnotationFile&) = default;
};

/// `file` is set iff no error diagnostics were produced. Warnings (such as
/// W-HOUR-AMPM) may accompany a successful parse.
struct ParseResult {
    std::optional<AnnotationFile> file;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return file.has_value(); }
};

ParseResult parse_annotation_file(std::string_view text);

/// Source position attached to diagnostics raised while typing a record.
struct SourcePos {
    int line = 0;
    int column = 0;
};

/// Types one record from its label text and raw slot token lists (each list
/// is qualifiers then value, or {"null"}). Shared by the text parser and the
/// JSON reader. Appends diagnostics; returns nullopt on any error.
std::optional<TemporalRecord> assemble_record(std::string_view label_text,
                                              const std::vector<std::vector<std::string>>& slots,
                                              std::vector<Diagnostic>& diagnostics,
                                              std::optional<SourcePos> pos = std::nullopt,
                                              const std::vector<SourcePos>& slot_pos = {});

std::string serialize_annotation_file(const AnnotationFile& file);
std::string serialize_record(const TemporalRecord& record);
std::string header_comment(const DialogDate& date);

/// "5 March 1993"
std::string format_dialog_date(const DialogDate& date);
/// Accepts "5 March 1993", "March 5, 1993", "5 Mar 1993" and "1993-03-05".
std::optional<DialogDate> parse_dialog_date(std::string_view text);

/// All-null records, one per label.
AnnotationFile make_template(const DialogDate& date, const std::vector<RecordLabel>& labels);

}  // namespace tca
