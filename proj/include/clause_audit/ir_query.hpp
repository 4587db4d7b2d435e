#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "clause_audit/ir.hpp"
#include "clause_audit/reasoner.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

struct IrHit {
    std::optional<DefRecord> def;
    std::optional<CallRecord> call;
    int matches = 0;

    const std::string& filepath() const { return def ? def->filepath : call->filepath; }
    Span span() const { return def ? def->span : call->span; }
    const std::string& name() const { return def ? def->name : call->name; }
};

namespace detail {

inline std::set<std::string> def_token_folds(const DefRecord& def) {
    std::set<std::string> folds;
    for (const auto& frag : text::split_identifier(def.name))
        folds.insert(text::fold_token(frag));
    return folds;
}

inline std::set<std::string> call_token_folds(const CallRecord& call) {
    std::set<std::string> folds;
    for (const auto& frag : text::split_identifier(call.name))
        folds.insert(text::fold_token(frag));
    for (const auto& frag : text::split_identifier(call.recv))
        folds.insert(text::fold_token(frag));
    for (const auto& cond : call.cond)
        for (const auto& frag : text::word_tokens(cond))
            folds.insert(text::fold_token(frag));
    return folds;
}

inline int keyword_matches(const KeywordSet& keywords, const std::set<std::string>& folds) {
    int matched = 0;
    for (const auto& f : keywords.folds())
        if (folds.count(f)) ++matched;
    return matched;
}

} // namespace detail

/// A record hits when at least half the keywords (rounded up) match its
/// name/recv/cond tokens after camel/underscore splitting and folding. Hits
/// come back ordered by match count, then canonical record order.
inline std::vector<IrHit> query_ir(const IRBundle& bundle, const KeywordSet& keywords) {
    const int threshold =
        static_cast<int>(std::ceil(static_cast<double>(keywords.size()) / 2.0));
    std::vector<IrHit> hits;
    if (keywords.empty()) return hits;

    for (const auto& def : bundle.defs) {
        int m = detail::keyword_matches(keywords, detail::def_token_folds(def));
        if (m >= threshold) hits.push_back({def, std::nullopt, m});
    }
    for (const auto& call : bundle.calls) {
        int m = detail::keyword_matches(keywords, detail::call_token_folds(call));
        if (m >= threshold) hits.push_back({std::nullopt, call, m});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const IrHit& a, const IrHit& b) {
        if (a.matches != b.matches) return a.matches > b.matches;
        auto ka = std::make_tuple(std::cref(a.filepath()), a.span().start, std::cref(a.name()),
                                  a.call.has_value());
        auto kb = std::make_tuple(std::cref(b.filepath()), b.span().start, std::cref(b.name()),
                                  b.call.has_value());
        return ka < kb;
    });
    return hits;
}

} // namespace clause_audit
