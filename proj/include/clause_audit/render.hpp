#pragma once

#include <string>
#include <vector>

#include "clause_audit/quantify.hpp"
#include "clause_audit/reporting.hpp"

namespace clause_audit {

/// Left-aligned first column, right-aligned rest; plain spaces, no box art.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return "";
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i == 0) {
                out += row[i];
                out.append(width[i] - row[i].size(), ' ');
            } else {
                out += "  ";
                out.append(width[i] - row[i].size(), ' ');
                out += row[i];
            }
        }
        out += '\n';
    }
    return out;
}

inline std::string render_quantification(const QuantificationReport& r) {
    std::vector<std::vector<std::string>> rows = {
        {"Compatibility", "RFC keywords", "Count", "Share"},
        {"Mandatory", "Unconditional MUST", std::to_string(r.mandatory),
         format_percent(r.mandatory_share) + "%"},
        {"Optional", "Conditional MUST", std::to_string(r.conditional_must),
         format_percent(r.conditional_must_share) + "%"},
        {"Optional", "Non-MUST", std::to_string(r.non_must),
         format_percent(r.non_must_share) + "%"},
        {"Total", "", std::to_string(r.total), ""},
    };
    return render_table(rows);
}

inline std::string render_sdk_report(const SdkReport& r) {
    std::vector<std::vector<std::string>> rows = {
        {"SDK", "I", "NI-O", "NI-NO", "NI", "Exploitable"},
        {r.sdk, std::to_string(r.implemented), std::to_string(r.ni_optional),
         std::to_string(r.ni_non_optional), std::to_string(r.ni_total),
         std::to_string(r.exploitable)},
    };
    std::string out = render_table(rows);
    if (r.unknown > 0)
        out += "note: " + std::to_string(r.unknown) +
               " clause(s) UNKNOWN, excluded from the table\n";
    return out;
}

inline std::string render_eval_report(const EvalReport& r) {
    std::vector<std::vector<std::string>> rows = {
        {"TP", "FP", "TN", "FN", "Precision", "Recall"},
        {std::to_string(r.tp), std::to_string(r.fp), std::to_string(r.tn),
         std::to_string(r.fn),
         r.has_precision() ? format_percent(r.precision()) + "%" : "n/a",
         r.has_recall() ? format_percent(r.recall()) + "%" : "n/a"},
    };
    std::string out = render_table(rows);
    if (r.unknown_excluded > 0)
        out += "note: " + std::to_string(r.unknown_excluded) +
               " UNKNOWN result(s) excluded from the counts\n";
    return out;
}

inline std::string render_cost_report(const CostReport& r) {
    std::vector<std::vector<std::string>> rows = {
        {"total", "$" + format_fixed(r.total_cost, 2)},
        {"per SDK", "$" + format_fixed(r.per_sdk_cost, 2)},
        {"per check", "$" + format_fixed(r.per_check_cost, 3)},
        {"checks", std::to_string(r.total_checks)},
        {"input tokens", std::to_string(r.total_input_tokens)},
        {"output tokens", std::to_string(r.total_output_tokens)},
        {"wall time", format_fixed(r.wall_time_s, 2) + " s"},
    };
    return render_table(rows);
}

} // namespace clause_audit
