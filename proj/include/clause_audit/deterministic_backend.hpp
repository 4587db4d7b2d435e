#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clause_audit/reasoner.hpp"

namespace clause_audit {

/// Identifier-synonym pairs used to widen a keyword probe between
/// iterations. Lookup folds both sides, so "changes" finds the "changed"
/// entry. Versioned with the analyzer; extend deliberately.
inline const std::vector<std::pair<std::string, std::string>>& synonym_table() {
    static const std::vector<std::pair<std::string, std::string>> kTable = {
        {"changed", "update"},       {"update", "changed"},
        {"notification", "notify"},  {"notify", "notification"},
        {"send", "emit"},            {"emit", "send"},
        {"respond", "reply"},        {"reply", "respond"},
        {"configurable", "configure"}, {"configure", "configurable"},
        {"cancelled", "cancel"},     {"cancel", "cancelled"},
    };
    return kTable;
}

inline std::vector<std::string> synonyms_of(const std::string& token) {
    std::vector<std::string> out;
    std::string f = text::fold_token(token);
    for (const auto& [word, alt] : synonym_table())
        if (text::fold_token(word) == f) out.push_back(alt);
    return out;
}

/// Action verbs recognized in clause prose when deriving search keywords.
inline const std::vector<std::string>& action_verb_lexicon() {
    static const std::vector<std::string> kVerbs = {
        "send",      "notify",    "emit",     "dispatch",  "publish", "respond",
        "reply",     "answer",    "check",    "validate",  "verify",  "reject",
        "configure", "configurable", "log",   "record",    "close",   "retry",
        "subscribe", "unsubscribe", "cancel", "update",    "issue",   "limit",
    };
    return kVerbs;
}

/// Initial probe for a clause: the message name's fragments plus any action
/// verbs found in the sentence; clauses naming no protocol message fall back
/// to their content words.
inline KeywordSet initial_keywords(const Clause& clause) {
    KeywordSet keywords;
    if (!clause.message_kind.empty())
        for (const auto& frag : text::split_identifier(clause.message_kind))
            keywords.insert(frag);
    auto words = text::word_tokens(clause.text);
    if (!clause.message_kind.empty()) {
        for (const auto& w : words)
            for (const auto& verb : action_verb_lexicon())
                if (text::tokens_fold_equal(w, verb)) keywords.insert(w);
    } else {
        for (const auto& w : words) {
            if (w.size() < 3) continue;
            if (text::stop_words().count(w)) continue;
            keywords.insert(w);
            if (keywords.size() >= 16) break;
        }
    }
    if (keywords.empty()) keywords.insert("clause");
    return keywords;
}

/// One concept per initial keyword: the token plus its synonyms, identified
/// by fold. Scoring counts matched concepts, so a synonym expansion can never
/// dilute a match fraction.
struct ConceptGroup {
    std::string label;
    std::vector<std::string> variant_folds;
};

inline std::vector<ConceptGroup> concept_groups(const Clause& clause) {
    std::vector<ConceptGroup> groups;
    const KeywordSet base = initial_keywords(clause);
    for (const auto& token : base.tokens()) {
        ConceptGroup g;
        g.label = token;
        g.variant_folds.push_back(text::fold_token(token));
        for (const auto& alt : synonyms_of(token)) {
            std::string f = text::fold_token(alt);
            if (std::find(g.variant_folds.begin(), g.variant_folds.end(), f) ==
                g.variant_folds.end())
                g.variant_folds.push_back(f);
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

inline size_t matched_group_count(const std::vector<ConceptGroup>& groups,
                                  const std::set<std::string>& token_folds) {
    size_t matched = 0;
    for (const auto& g : groups) {
        for (const auto& variant : g.variant_folds) {
            if (token_folds.count(variant)) {
                ++matched;
                break;
            }
        }
    }
    return matched;
}

inline std::set<std::string> fold_set(const std::vector<std::string>& words) {
    std::set<std::string> out;
    for (const auto& w : words) out.insert(text::fold_token(w));
    return out;
}

/// Deterministic stand-in for semantic reasoning: explicit, testable rules
/// over IR-annotated evidence. Definitions anchor the verdict; call records
/// to the anchoring definition set the confidence tier (guarded 1.0,
/// unguarded 0.6, none 0.4); full-source fallback slices are scored by
/// concept coverage of the evidence text.
class DeterministicBackend : public ReasonerBackend {
public:
    static constexpr double kStrongMatch = 0.8;

    explicit DeterministicBackend(UsageCollector* usage = nullptr) : usage_(usage) {}

    std::string name() const override { return "deterministic"; }

    KeywordSet refine(const Clause& clause, const std::vector<AnnotatedEvidence>&,
                      const Judgment* prior, const KeywordSet* previous) override {
        double elapsed = 0.0;
        KeywordSet result;
        {
            ScopedTimer timer(elapsed);
            if (prior == nullptr || previous == nullptr) {
                result = initial_keywords(clause);
            } else {
                result = *previous;
                for (const auto& token : previous->tokens())
                    for (const auto& alt : synonyms_of(token)) result.insert(alt);
                if (result == *previous) {
                    for (const auto& w : text::word_tokens(clause.text)) {
                        if (w.size() < 3 || text::stop_words().count(w)) continue;
                        result.insert(w);
                    }
                }
                for (int n = 2; result == *previous; ++n)
                    result.insert("r" + std::to_string(n)); // forced progress
            }
        }
        record("refine", elapsed);
        return result;
    }

    ReasonOutcome reason(const Clause& clause,
                         const std::vector<AnnotatedEvidence>& evidence) override {
        double elapsed = 0.0;
        ReasonOutcome out;
        {
            ScopedTimer timer(elapsed);
            out = score(clause, evidence);
        }
        record("reason", elapsed);
        return out;
    }

    ClauseSemantics analyze_semantics(const Clause& clause) override {
        double elapsed = 0.0;
        ClauseSemantics sem;
        {
            ScopedTimer timer(elapsed);
            sem = rule_based_semantics(clause);
        }
        record("semantics", elapsed);
        return sem;
    }

private:
    UsageCollector* usage_;

    void record(const std::string& op, double elapsed) {
        if (usage_) usage_->add({name(), op, 0, 0, 0.0, elapsed});
    }

    ReasonOutcome score(const Clause& clause,
                        const std::vector<AnnotatedEvidence>& evidence) const {
        if (evidence.empty())
            return {{ComplianceStatus::Unknown, "no evidence"}, 0.0};

        auto groups = concept_groups(clause);
        const double group_count = static_cast<double>(groups.size());

        const DefRecord* best_def = nullptr;
        double best_frac = -1.0;
        double best_tier = 0.0;
        bool any_call = false;
        bool any_fallback = false;

        for (const auto& item : evidence) {
            if (item.call) any_call = true;
            if (item.slice.origin == EvidenceOrigin::FullSourceFallback) any_fallback = true;
            if (!item.def) continue;
            double frac =
                matched_group_count(groups, fold_set(text::split_identifier(item.def->name))) /
                group_count;
            double tier = call_tier(item.def->name, evidence);
            if (frac > best_frac || (frac == best_frac && tier > best_tier)) {
                best_def = &*item.def;
                best_frac = frac;
                best_tier = tier;
            }
        }

        if (best_def != nullptr) {
            double s = best_frac * best_tier;
            if (s >= kStrongMatch)
                return {{ComplianceStatus::Implemented,
                         "definition " + best_def->name + " with a guarded call site"},
                        s};
            if (best_tier == 0.4 && best_frac >= kStrongMatch)
                return {{ComplianceStatus::NonImplemented,
                         "definition " + best_def->name + " has no call site"},
                        best_frac};
        }

        if (any_fallback) {
            std::set<std::string> folds;
            for (const auto& item : evidence)
                for (const auto& w : text::word_tokens(item.slice.text))
                    folds.insert(text::fold_token(w));
            double c = matched_group_count(groups, folds) / group_count;
            if (c >= 1.0)
                return {{ComplianceStatus::Implemented,
                         "full-source scan covers every clause concept"},
                        1.0};
            return {{ComplianceStatus::NonImplemented,
                     "full-source scan misses clause concepts"},
                    1.0 - c};
        }

        if (best_def != nullptr)
            return {{ComplianceStatus::Unknown, "definition match too weak"},
                    std::min(0.5, best_frac * best_tier)};
        if (any_call)
            return {{ComplianceStatus::Unknown, "call sites without a matching definition"},
                    0.2};
        return {{ComplianceStatus::Unknown, "unclassifiable evidence"}, 0.2};
    }

    static double call_tier(const std::string& def_name,
                            const std::vector<AnnotatedEvidence>& evidence) {
        double tier = 0.4;
        for (const auto& item : evidence) {
            if (!item.call || item.call->name != def_name) continue;
            if (!item.call->cond.empty()) return 1.0;
            tier = std::max(tier, 0.6);
        }
        return tier;
    }
};

} // namespace clause_audit
