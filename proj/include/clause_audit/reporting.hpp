#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "clause_audit/compliance.hpp"
#include "clause_audit/exploitability.hpp"
#include "clause_audit/quantify.hpp"

namespace clause_audit {

// ---------------------------------------------------------------------------
// Per-SDK raw findings
// ---------------------------------------------------------------------------

struct SdkReport {
    std::string sdk;
    int implemented = 0;
    int ni_optional = 0;
    int ni_non_optional = 0;
    int ni_total = 0;
    int exploitable = 0;
    int unknown = 0; // reported in JSON, footnoted out of the printed table
};

inline Json to_json(const SdkReport& r) {
    return Json{
        {"sdk", r.sdk},
        {"implemented", r.implemented},
        {"ni_optional", r.ni_optional},
        {"ni_non_optional", r.ni_non_optional},
        {"ni_total", r.ni_total},
        {"exploitable", r.exploitable},
        {"unknown", r.unknown},
    };
}

/// Folds compliance results and exploitability verdicts into the raw-findings
/// row. Non-implementations split into optional vs. non-optional by the
/// clause's requirement class (conditional MUST counts as optional).
inline SdkReport aggregate(const std::vector<ComplianceResult>& results,
                           const std::vector<ExploitabilityVerdict>& verdicts,
                           const ClauseCatalog& catalog) {
    SdkReport report;
    std::set<std::string> ni_ids;
    for (const auto& result : results) {
        if (!report.sdk.empty() && result.sdk != report.sdk)
            throw MismatchedRunError("results mix sdk tags " + report.sdk + " and " +
                                     result.sdk);
        if (report.sdk.empty()) report.sdk = result.sdk;
        const Clause* clause = catalog.find(result.clause_id);
        if (!clause)
            throw MismatchedRunError("result clause " + result.clause_id +
                                     " is not in the catalog");
        switch (result.status) {
            case ComplianceStatus::Implemented:
                ++report.implemented;
                break;
            case ComplianceStatus::Unknown:
                ++report.unknown;
                break;
            case ComplianceStatus::NonImplemented:
                ++report.ni_total;
                ni_ids.insert(result.clause_id);
                if (classify_clause(*clause) == RequirementClass::MANDATORY)
                    ++report.ni_non_optional;
                else
                    ++report.ni_optional;
                break;
        }
    }
    for (const auto& verdict : verdicts) {
        if (!ni_ids.count(verdict.clause_id))
            throw MismatchedRunError("verdict for " + verdict.clause_id +
                                     " has no NON_IMPLEMENTED result");
        if (verdict.exploitable()) ++report.exploitable;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Detection-performance arithmetic
// ---------------------------------------------------------------------------

struct GroundTruthLabel {
    std::string clause_id;
    std::string sdk;
    bool non_implemented = false;
    std::string note;
};

inline std::vector<GroundTruthLabel> load_labels(const std::filesystem::path& path) {
    std::vector<GroundTruthLabel> out;
    for (const auto& rec : jsonl::read_records(path)) {
        GroundTruthLabel label;
        label.clause_id = rec.at("clause_id").get<std::string>();
        label.sdk = rec.value("sdk", std::string{});
        std::string value = rec.at("label").get<std::string>();
        if (value != "implemented" && value != "non_implemented")
            throw AuditError("BadLabel", path.string() + ": label must be implemented or "
                                                         "non_implemented, got " + value);
        label.non_implemented = value == "non_implemented";
        label.note = rec.value("note", std::string{});
        out.push_back(std::move(label));
    }
    return out;
}

struct EvalReport {
    int tp = 0, fp = 0, tn = 0, fn = 0;
    int unknown_excluded = 0;
    bool has_precision() const { return tp + fp > 0; }
    bool has_recall() const { return tp + fn > 0; }
    double precision() const { return static_cast<double>(tp) / (tp + fp); }
    double recall() const { return static_cast<double>(tp) / (tp + fn); }
};

inline Json to_json(const EvalReport& r) {
    Json j{
        {"tp", r.tp},
        {"fp", r.fp},
        {"tn", r.tn},
        {"fn", r.fn},
        {"unknown_excluded", r.unknown_excluded},
        {"precision", r.has_precision() ? Json(r.precision()) : Json(nullptr)},
        {"recall", r.has_recall() ? Json(r.recall()) : Json(nullptr)},
        {"precision_display", r.has_precision() ? format_percent(r.precision()) + "%" : "n/a"},
        {"recall_display", r.has_recall() ? format_percent(r.recall()) + "%" : "n/a"},
    };
    return j;
}

/// A flagged (NON_IMPLEMENTED) result against a non_implemented label is a
/// true positive. UNKNOWN results are excluded from the confusion counts and
/// reported separately.
inline EvalReport evaluate(const std::vector<ComplianceResult>& results,
                           const std::vector<GroundTruthLabel>& labels) {
    std::map<std::string, bool> truth;
    for (const auto& label : labels) truth[label.clause_id] = label.non_implemented;

    EvalReport report;
    for (const auto& result : results) {
        auto it = truth.find(result.clause_id);
        if (it == truth.end())
            throw MissingLabelError("no ground-truth label for clause " + result.clause_id);
        if (result.status == ComplianceStatus::Unknown) {
            ++report.unknown_excluded;
            continue;
        }
        bool flagged = result.status == ComplianceStatus::NonImplemented;
        bool labeled = it->second;
        if (flagged && labeled) ++report.tp;
        else if (flagged && !labeled) ++report.fp;
        else if (!flagged && labeled) ++report.fn;
        else ++report.tn;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Cost accounting
// ---------------------------------------------------------------------------

struct CostReport {
    double total_cost = 0.0;
    double per_sdk_cost = 0.0;
    double per_check_cost = 0.0;
    long total_checks = 0;
    long total_input_tokens = 0;
    long total_output_tokens = 0;
    double wall_time_s = 0.0;
};

inline Json to_json(const CostReport& r) {
    return Json{
        {"total_cost", r.total_cost},
        {"per_sdk_cost", r.per_sdk_cost},
        {"per_check_cost", r.per_check_cost},
        {"total_checks", r.total_checks},
        {"total_input_tokens", r.total_input_tokens},
        {"total_output_tokens", r.total_output_tokens},
        {"wall_time_s", r.wall_time_s},
        {"total_cost_display", "$" + format_fixed(r.total_cost, 2)},
        {"per_sdk_cost_display", "$" + format_fixed(r.per_sdk_cost, 2)},
        {"per_check_cost_display", "$" + format_fixed(r.per_check_cost, 3)},
    };
}

inline CostReport cost_report(const std::vector<UsageRecord>& usage, long checks,
                              int sdk_count = 1) {
    if (checks <= 0) throw ZeroChecksError();
    if (sdk_count < 1) sdk_count = 1;
    CostReport report;
    report.total_checks = checks;
    for (const auto& rec : usage) {
        report.total_cost += rec.cost;
        report.total_input_tokens += rec.input_tokens;
        report.total_output_tokens += rec.output_tokens;
        report.wall_time_s += rec.wall_time_s;
    }
    report.per_check_cost = report.total_cost / static_cast<double>(checks);
    report.per_sdk_cost = report.total_cost / static_cast<double>(sdk_count);
    return report;
}

inline Json usage_to_json(const UsageRecord& rec) {
    return Json{
        {"backend", rec.backend},
        {"op", rec.op},
        {"input_tokens", rec.input_tokens},
        {"output_tokens", rec.output_tokens},
        {"cost", rec.cost},
        {"wall_time_s", rec.wall_time_s},
    };
}

inline UsageRecord usage_from_json(const Json& j) {
    UsageRecord rec;
    rec.backend = j.value("backend", std::string{});
    rec.op = j.value("op", std::string{});
    rec.input_tokens = j.value("input_tokens", 0L);
    rec.output_tokens = j.value("output_tokens", 0L);
    rec.cost = j.value("cost", 0.0);
    rec.wall_time_s = j.value("wall_time_s", 0.0);
    return rec;
}

} // namespace clause_audit
