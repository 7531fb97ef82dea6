#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tca/format.hpp"

namespace tca::agreement {

class DateMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SlotAgreement {
    double observed = 0.0;
    /// Absent when either coder used a single category for the slot.
    std::optional<double> kappa;
    int pairs = 0;
};

struct AgreementReport {
    std::array<SlotAgreement, kSlotCount> per_field{};
    double per_record_exact = 0.0;
    int aligned_count = 0;
    std::vector<RecordLabel> unaligned_labels;
};

/// Records are aligned by exact label. A slot agrees when qualifiers (in
/// order) and value match; null = null counts as agreement.
AgreementReport compare_files(const AnnotationFile& a, const AnnotationFile& b);

using CategoryPairs = std::vector<std::pair<std::string, std::string>>;

double observed_agreement(const CategoryPairs& pairs);
/// Cohen's kappa, (po - pe) / (1 - pe) with pe from the two coders' marginals.
std::optional<double> cohen_kappa(const CategoryPairs& pairs);

struct GoldScore {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    int true_positives = 0;
    int predicted = 0;  // non-null predicted slots
    int gold = 0;       // non-null gold slots
};

/// Precision and recall over non-null slot values; unaligned records count
/// against the side that has them.
GoldScore score_against_gold(const AnnotationFile& pred, const AnnotationFile& gold);

std::string format_report(const AgreementReport& r);
std::string format_score(const GoldScore& s);
nlohmann::json to_json(const AgreementReport& r);
nlohmann::json to_json(const GoldScore& s);

}  // namespace tca::agreement
