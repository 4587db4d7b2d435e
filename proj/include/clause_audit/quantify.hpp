#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "clause_audit/clause.hpp"
#include "clause_audit/errors.hpp"

namespace clause_audit {

/// Total function over valid clauses; applies the keyword/scope invariant
/// table directly and never yields an "unspecified" bucket.
inline RequirementClass classify_clause(const Clause& clause) {
    if (!is_must_family(clause.rfc_keyword)) return RequirementClass::OPTIONAL_NON_MUST;
    return clause.scope_condition.empty() ? RequirementClass::MANDATORY
                                          : RequirementClass::OPTIONAL_CONDITIONAL_MUST;
}

struct QuantificationReport {
    int total = 0;
    int mandatory = 0;
    int conditional_must = 0;
    int non_must = 0;
    // Full-precision shares; display rounding is applied only when rendering.
    double mandatory_share = 0.0;
    double conditional_must_share = 0.0;
    double non_must_share = 0.0;
};

inline QuantificationReport quantify(const ClauseCatalog& catalog) {
    if (catalog.clauses.empty()) throw EmptyCatalogError();
    QuantificationReport r;
    r.total = static_cast<int>(catalog.clauses.size());
    for (const auto& c : catalog.clauses) {
        switch (classify_clause(c)) {
            case RequirementClass::MANDATORY: ++r.mandatory; break;
            case RequirementClass::OPTIONAL_CONDITIONAL_MUST: ++r.conditional_must; break;
            case RequirementClass::OPTIONAL_NON_MUST: ++r.non_must; break;
        }
    }
    r.mandatory_share = static_cast<double>(r.mandatory) / r.total;
    r.conditional_must_share = static_cast<double>(r.conditional_must) / r.total;
    r.non_must_share = static_cast<double>(r.non_must) / r.total;
    return r;
}

/// Round-half-up at the given number of decimals (display semantics; the
/// tiny epsilon absorbs binary representation error of exact halves).
inline double round_half_up(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_half_up(value, decimals));
    return buf;
}

/// "21.5" style percentage of a [0,1] share.
inline std::string format_percent(double share) {
    return format_fixed(share * 100.0, 1);
}

inline Json to_json(const QuantificationReport& r) {
    return Json{
        {"total", r.total},
        {"mandatory", r.mandatory},
        {"conditional_must", r.conditional_must},
        {"non_must", r.non_must},
        {"shares",
         Json{{"mandatory", r.mandatory_share},
              {"conditional_must", r.conditional_must_share},
              {"non_must", r.non_must_share}}},
        {"shares_display",
         Json{{"mandatory", format_percent(r.mandatory_share) + "%"},
              {"conditional_must", format_percent(r.conditional_must_share) + "%"},
              {"non_must", format_percent(r.non_must_share) + "%"}}},
    };
}

} // namespace clause_audit
