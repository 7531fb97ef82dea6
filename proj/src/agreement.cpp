#include "tca/agreement.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "tca/calendar.hpp"

namespace tca::agreement {

namespace {

std::string slot_key(const TemporalRecord& r, int slot) {
    std::string key;
    for (const auto& t : slot_tokens(r, slot)) {
        if (!key.empty()) key += ' ';
        key += t;
    }
    return key;
}

bool is_null_slot(const TemporalRecord& r, int slot) {
    const TimePoint& p = slot < 5 ? r.start : r.end;
    switch (slot % 5) {
        case 0: return p.weekday.is_null();
        case 1: return p.month.is_null();
        case 2: return p.date.is_null();
        case 3: return p.hour.is_null();
        default: return p.time_of_day.is_null();
    }
}

void require_same_date(const AnnotationFile& a, const AnnotationFile& b) {
    if (!(a.dialog_date == b.dialog_date))
        throw DateMismatch("dialog dates differ: " + calendar::to_iso(a.dialog_date) + " vs " +
                           calendar::to_iso(b.dialog_date));
}

struct LabelLess {
    bool operator()(const RecordLabel& x, const RecordLabel& y) const { return compare_labels(x, y) < 0; }
};

using Index = std::map<RecordLabel, const TemporalRecord*, LabelLess>;

Index index_of(const AnnotationFile& f, std::vector<const TemporalRecord*>& extras) {
    Index idx;
    for (const auto& r : f.records)
        if (!idx.emplace(r.label, &r).second) extras.push_back(&r);
    return idx;
}

std::optional<double> ratio(int num, int den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / den;
}

}  // namespace

double observed_agreement(const CategoryPairs& pairs) {
    if (pairs.empty()) return 0.0;
    int agree = 0;
    for (const auto& [x, y] : pairs)
        if (x == y) ++agree;
    return static_cast<double>(agree) / static_cast<double>(pairs.size());
}

std::optional<double> cohen_kappa(const CategoryPairs& pairs) {
    if (pairs.empty()) return std::nullopt;
    std::map<std::string, int> count_a, count_b;
    for (const auto& [x, y] : pairs) {
        ++count_a[x];
        ++count_b[y];
    }
    if (count_a.size() < 2 || count_b.size() < 2) return std::nullopt;
    const double n = static_cast<double>(pairs.size());
    double pe = 0.0;
    for (const auto& [category, ca] : count_a)
        if (auto it = count_b.find(category); it != count_b.end()) pe += (ca / n) * (it->second / n);
    if (pe >= 1.0) return std::nullopt;
    return (observed_agreement(pairs) - pe) / (1.0 - pe);
}

AgreementReport compare_files(const AnnotationFile& a, const AnnotationFile& b) {
    require_same_date(a, b);
    AgreementReport report;
    std::vector<const TemporalRecord*> extra_a, extra_b;
    const Index ia = index_of(a, extra_a);
    const Index ib = index_of(b, extra_b);

    std::array<CategoryPairs, kSlotCount> pairs;
    int exact = 0;
    for (const auto& [label, ra] : ia) {
        auto it = ib.find(label);
        if (it == ib.end()) continue;
        ++report.aligned_count;
        bool all = true;
        for (int s = 0; s < kSlotCount; ++s) {
            auto& p = pairs[static_cast<std::size_t>(s)].emplace_back(slot_key(*ra, s), slot_key(*it->second, s));
            all &= p.first == p.second;
        }
        if (all) ++exact;
    }
    for (int s = 0; s < kSlotCount; ++s) {
        const auto& ps = pairs[static_cast<std::size_t>(s)];
        auto& out = report.per_field[static_cast<std::size_t>(s)];
        out.pairs = static_cast<int>(ps.size());
        out.observed = observed_agreement(ps);
        out.kappa = cohen_kappa(ps);
    }
    report.per_record_exact = report.aligned_count ? static_cast<double>(exact) / report.aligned_count : 0.0;

    for (const auto& r : a.records)
        if (!ib.count(r.label)) report.unaligned_labels.push_back(r.label);
    for (const auto& r : b.records)
        if (!ia.count(r.label)) report.unaligned_labels.push_back(r.label);
    for (const auto* r : extra_a) report.unaligned_labels.push_back(r->label);
    for (const auto* r : extra_b) report.unaligned_labels.push_back(r->label);
    return report;
}

GoldScore score_against_gold(const AnnotationFile& pred, const AnnotationFile& gold) {
    require_same_date(pred, gold);
    GoldScore s;
    std::vector<const TemporalRecord*> extra_p, extra_g;
    const Index ip = index_of(pred, extra_p);
    const Index ig = index_of(gold, extra_g);

    auto count_non_null = [](const TemporalRecord& r) {
        int n = 0;
        for (int slot = 0; slot < kSlotCount; ++slot) n += !is_null_slot(r, slot);
        return n;
    };
    for (const auto& r : pred.records) s.predicted += count_non_null(r);
    for (const auto& r : gold.records) s.gold += count_non_null(r);

    for (const auto& [label, rp] : ip) {
        auto it = ig.find(label);
        if (it == ig.end()) continue;
        for (int slot = 0; slot < kSlotCount; ++slot)
            if (!is_null_slot(*rp, slot) && slot_key(*rp, slot) == slot_key(*it->second, slot)) ++s.true_positives;
    }
    s.precision = ratio(s.true_positives, s.predicted);
    s.recall = ratio(s.true_positives, s.gold);
    if (s.precision && s.recall) {
        const double sum = *s.precision + *s.recall;
        s.f1 = sum > 0 ? 2 * *s.precision * *s.recall / sum : 0.0;
    }
    return s;
}

namespace {

std::string fmt(std::optional<double> v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

nlohmann::json opt(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_report(const AgreementReport& r) {
    std::string s;
    char line[128];
    std::snprintf(line, sizeof line, "%-12s %8s %8s %6s\n", "field", "observed", "kappa", "pairs");
    s += line;
    for (int i = 0; i < kSlotCount; ++i) {
        const auto& f = r.per_field[static_cast<std::size_t>(i)];
        std::snprintf(line, sizeof line, "%-12s %8s %8s %6d\n", std::string(kSlotNames[static_cast<std::size_t>(i)]).c_str(),
                      fmt(f.observed).c_str(), fmt(f.kappa).c_str(), f.pairs);
        s += line;
    }
    s += "perRecordExact " + fmt(r.per_record_exact) + "\n";
    s += "alignedCount   " + std::to_string(r.aligned_count) + "\n";
    s += "unaligned      ";
    if (r.unaligned_labels.empty()) s += "-";
    for (std::size_t i = 0; i < r.unaligned_labels.size(); ++i) {
        if (i) s += ' ';
        s += format_label(r.unaligned_labels[i]);
    }
    return s + "\n";
}

std::string format_score(const GoldScore& sc) {
    return "precision " + fmt(sc.precision) + "\nrecall    " + fmt(sc.recall) + "\nf1        " + fmt(sc.f1) +
           "\ntp " + std::to_string(sc.true_positives) + " predicted " + std::to_string(sc.predicted) + " gold " +
           std::to_string(sc.gold) + "\n";
}

nlohmann::json to_json(const AgreementReport& r) {
    nlohmann::json fields = nlohmann::json::object();
    for (int i = 0; i < kSlotCount; ++i) {
        const auto& f = r.per_field[static_cast<std::size_t>(i)];
        fields[std::string(kSlotNames[static_cast<std::size_t>(i)])] = {
            {"observedAgreement", f.observed}, {"kappa", opt(f.kappa)}, {"pairs", f.pairs}};
    }
    nlohmann::json unaligned = nlohmann::json::array();
    for (const auto& l : r.unaligned_labels) unaligned.push_back(format_label(l));
    return {{"perField", fields},
            {"perRecordExact", r.per_record_exact},
            {"alignedCount", r.aligned_count},
            {"unalignedLabels", unaligned}};
}

nlohmann::json to_json(const GoldScore& s) {
    return {{"precision", opt(s.precision)}, {"recall", opt(s.recall)},     {"f1", opt(s.f1)},
            {"truePositives", s.true_positives}, {"predicted", s.predicted}, {"gold", s.gold}};
}

}  // namespace tca::agreement
