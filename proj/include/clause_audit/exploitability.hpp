#pragma once

#include <string>
#include <vector>

#include "clause_audit/clause.hpp"
#include "clause_audit/clause_semantics.hpp"
#include "clause_audit/compliance.hpp"
#include "clause_audit/errors.hpp"
#include "clause_audit/reasoner.hpp"

namespace clause_audit {

enum class Modality { PyTy, PyTn, PnTy, PnTn };

inline std::string to_string(Modality m) {
    switch (m) {
        case Modality::PyTy: return "PyTy";
        case Modality::PyTn: return "PyTn";
        case Modality::PnTy: return "PnTy";
        case Modality::PnTn: return "PnTn";
    }
    return "PnTn";
}

inline Modality modality_from_string(const std::string& s) {
    if (s == "PyTy") return Modality::PyTy;
    if (s == "PyTn") return Modality::PyTn;
    if (s == "PnTy") return Modality::PnTy;
    return Modality::PnTn;
}

inline Modality modality_of(bool payload, bool timing) {
    if (payload && timing) return Modality::PyTy;
    if (payload) return Modality::PyTn;
    if (timing) return Modality::PnTy;
    return Modality::PnTn;
}

struct ExploitabilityVerdict {
    std::string clause_id;
    std::string sdk;
    bool payload_controllable = false;
    bool timing_controllable = false;
    Modality modality = Modality::PnTn;
    std::string attack_sketch; // "<class>: <sketch>", class from the fixed vocabulary

    bool exploitable() const { return modality != Modality::PnTn; }
};

inline Json to_json(const ExploitabilityVerdict& v) {
    return Json{
        {"clause_id", v.clause_id},
        {"sdk", v.sdk},
        {"payload_controllable", v.payload_controllable},
        {"timing_controllable", v.timing_controllable},
        {"modality", to_string(v.modality)},
        {"attack_sketch", v.attack_sketch},
    };
}

inline ExploitabilityVerdict verdict_from_json(const Json& j) {
    ExploitabilityVerdict v;
    v.clause_id = j.at("clause_id").get<std::string>();
    v.sdk = j.at("sdk").get<std::string>();
    v.payload_controllable = j.at("payload_controllable").get<bool>();
    v.timing_controllable = j.at("timing_controllable").get<bool>();
    v.modality = modality_from_string(j.at("modality").get<std::string>());
    v.attack_sketch = j.value("attack_sketch", std::string{});
    return v;
}

/// Clause semantics via the configured backend (rule tables for the
/// deterministic backend, prompt-driven for a remote one).
inline ClauseSemantics analyze_clause_semantics(const Clause& clause,
                                                ReasonerBackend& backend) {
    return backend.analyze_semantics(clause);
}

namespace detail {

inline bool has_cue(const Clause& clause, std::initializer_list<const char*> cues) {
    std::vector<std::string> folded;
    for (const auto& w : text::word_tokens(clause.text)) folded.push_back(text::fold_token(w));
    for (const char* cue : cues) {
        std::string f = text::fold_token(cue);
        for (const auto& w : folded)
            if (w == f) return true;
    }
    return false;
}

/// Attack-class mapping: modality plus clause context to one of the fixed
/// vocabulary {silent-injection, injection, DoS, replay, spoofing, other}.
inline std::string attack_sketch_for(const Clause& clause, const ClauseSemantics& sem,
                                     Modality m) {
    bool visible_change = is_visibility_notification(sem.message);
    switch (m) {
        case Modality::PyTy:
            if (visible_change)
                return "silent-injection: attacker-chosen content reaches the model while "
                       "the change signal stays muted";
            return "injection: attacker controls both what is sent and when it is sent";
        case Modality::PyTn:
            if (has_cue(clause, {"token", "credential", "secret"}))
                return "replay: attacker-controlled requests executed on unintended servers";
            if (has_cue(clause, {"oauth", "auth", "authorization"}))
                return "spoofing: peer identity is never verified on this transport";
            return "injection: attacker-controlled message content is accepted without the "
                   "omitted guardrail";
        case Modality::PnTy:
            if (has_cue(clause, {"ping", "frequency", "rate", "interval"}))
                return "DoS: ping-flood resource exhaustion";
            return "DoS: unthrottled or unsignaled traffic exhausts the receiver";
        case Modality::PnTn:
            return "other: no attacker-controllable dimension identified";
    }
    return "other: no attacker-controllable dimension identified";
}

} // namespace detail

/// Maps a non-implemented clause to its attack modality. Payload control
/// arises when the omitted guardrail constrained message content, or when
/// the omission suppresses visibility of attacker-chosen content; timing
/// control arises when it constrained when or whether a message is sent.
inline ExploitabilityVerdict derive_modality(const Clause& clause,
                                             const ClauseSemantics& sem,
                                             const ComplianceResult& result) {
    if (result.status != ComplianceStatus::NonImplemented)
        throw NotNonImplementedError("derive_modality requires a NON_IMPLEMENTED result for " +
                                     clause.id);
    ExploitabilityVerdict v;
    v.clause_id = clause.id;
    v.sdk = result.sdk;
    v.payload_controllable = sem.constraint_dimension == ConstraintDimension::Payload ||
                             sem.constraint_dimension == ConstraintDimension::Both ||
                             is_visibility_notification(sem.message);
    v.timing_controllable = sem.constraint_dimension == ConstraintDimension::Timing ||
                            sem.constraint_dimension == ConstraintDimension::Both;
    v.modality = modality_of(v.payload_controllable, v.timing_controllable);
    v.attack_sketch = detail::attack_sketch_for(clause, sem, v.modality);
    return v;
}

/// One verdict per NON_IMPLEMENTED result; IMPLEMENTED and UNKNOWN results
/// produce none. Per-clause errors are collected, not fatal.
struct ClassifyOutcome {
    std::vector<ExploitabilityVerdict> verdicts;
    std::vector<std::string> errors;
};

inline ClassifyOutcome classify_all(const std::vector<ComplianceResult>& results,
                                    const ClauseCatalog& catalog, ReasonerBackend& backend) {
    ClassifyOutcome out;
    for (const auto& result : results) {
        if (result.status != ComplianceStatus::NonImplemented) continue;
        const Clause* clause = catalog.find(result.clause_id);
        if (!clause) {
            out.errors.push_back("no catalog clause for result " + result.clause_id);
            continue;
        }
        try {
            ClauseSemantics sem = analyze_clause_semantics(*clause, backend);
            out.verdicts.push_back(derive_modality(*clause, sem, result));
        } catch (const AuditError& e) {
            out.errors.push_back(e.what());
        }
    }
    return out;
}

inline void save_verdicts(const std::filesystem::path& out_dir, const std::string& language,
                          const std::vector<ExploitabilityVerdict>& verdicts) {
    std::vector<Json> lines;
    lines.reserve(verdicts.size());
    for (const auto& v : verdicts) lines.push_back(to_json(v));
    jsonl::write_records(out_dir / ("exploit_" + language + ".jsonl"), lines);
}

inline std::vector<ExploitabilityVerdict> load_verdicts(const std::filesystem::path& path) {
    std::vector<ExploitabilityVerdict> out;
    for (const auto& rec : jsonl::read_records(path)) out.push_back(verdict_from_json(rec));
    return out;
}

} // namespace clause_audit
