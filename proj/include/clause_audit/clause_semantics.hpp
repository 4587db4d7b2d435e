#pragma once

#include <string>
#include <vector>

#include "clause_audit/clause.hpp"
#include "clause_audit/spec_extract.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

enum class ConstraintDimension { Payload, Timing, Both, None };

inline std::string to_string(ConstraintDimension d) {
    switch (d) {
        case ConstraintDimension::Payload: return "PAYLOAD";
        case ConstraintDimension::Timing: return "TIMING";
        case ConstraintDimension::Both: return "BOTH";
        case ConstraintDimension::None: return "NONE";
    }
    return "NONE";
}

/// What a clause constrains: who sends which message, on what trigger, and
/// whether the constraint binds message content, message timing, or both.
struct ClauseSemantics {
    Actor sender = Actor::UNSPECIFIED;
    std::string message; // message_kind or free text
    std::string trigger; // when the message is sent
    ConstraintDimension constraint_dimension = ConstraintDimension::None;
    std::string fired_rule; // the cue that decided the dimension
};

// ---------------------------------------------------------------------------
// Versioned cue tables. Every cue is fold-matched against clause words, so
// "changes"/"changed" or "pings"/"ping" hit the same entry.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& payload_cues() {
    static const std::vector<std::string> kCues = {
        "content", "token", "oauth", "auth", "authorization", "credential",
        "secret", "payload", "description",
    };
    return kCues;
}

inline const std::vector<std::string>& timing_cues() {
    static const std::vector<std::string> kCues = {
        "changed",  "updated",  "frequency", "rate",      "interval",
        "promptly", "immediately", "before", "after",     "notification",
        "notify",   "configurable", "close", "shutdown",  "shutting",
        "cancelled", "cancel",  "timeout",
    };
    return kCues;
}

namespace detail {

inline bool any_cue_matches(const std::vector<std::string>& cues,
                            const std::vector<std::string>& folded_words,
                            std::string* fired) {
    for (const auto& cue : cues) {
        std::string f = text::fold_token(cue);
        for (const auto& w : folded_words) {
            if (w == f) {
                if (fired) *fired = cue;
                return true;
            }
        }
    }
    return false;
}

} // namespace detail

/// Rule-table semantics: cue sets decide the constrained dimension, the
/// message lexicon supplies the message and default sender. A prohibition
/// keyword combined with a transmission verb counts as a payload constraint.
inline ClauseSemantics rule_based_semantics(const Clause& clause) {
    ClauseSemantics sem;
    std::vector<std::string> folded;
    for (const auto& w : text::word_tokens(clause.text)) folded.push_back(text::fold_token(w));

    std::string payload_rule, timing_rule;
    bool payload = detail::any_cue_matches(payload_cues(), folded, &payload_rule);
    bool timing = detail::any_cue_matches(timing_cues(), folded, &timing_rule);
    if (!payload && (clause.rfc_keyword == RfcKeyword::MUST_NOT ||
                     clause.rfc_keyword == RfcKeyword::SHALL_NOT ||
                     clause.rfc_keyword == RfcKeyword::SHOULD_NOT)) {
        static const std::vector<std::string> kSendVerbs = {"send", "include", "attach",
                                                            "forward"};
        if (detail::any_cue_matches(kSendVerbs, folded, nullptr)) {
            payload = true;
            payload_rule = "prohibited transmission";
        }
    }

    sem.constraint_dimension = payload && timing ? ConstraintDimension::Both
                               : payload         ? ConstraintDimension::Payload
                               : timing          ? ConstraintDimension::Timing
                                                 : ConstraintDimension::None;
    sem.fired_rule = payload && timing ? payload_rule + " + " + timing_rule
                     : payload         ? payload_rule
                     : timing          ? timing_rule
                                       : "";

    sem.message = clause.message_kind;
    const MessageLexiconEntry* entry =
        clause.message_kind.empty() ? match_message(clause.text)
                                    : lexicon_entry(clause.message_kind);
    if (sem.message.empty() && entry) sem.message = entry->name;
    sem.sender = clause.actor != Actor::UNSPECIFIED
                     ? clause.actor
                     : (entry ? entry->default_sender : Actor::UNSPECIFIED);
    sem.trigger = !clause.scope_condition.empty() ? clause.scope_condition : timing_rule;
    return sem;
}

/// True when the message is a change-visibility notification: omitting it
/// hides attacker-chosen content changes from the peer.
inline bool is_visibility_notification(const std::string& message) {
    const MessageLexiconEntry* entry = lexicon_entry(message);
    return entry != nullptr && entry->visibility_notification;
}

inline Json to_json(const ClauseSemantics& s) {
    return Json{
        {"sender", to_string(s.sender)},
        {"message", s.message},
        {"trigger", s.trigger},
        {"constraint_dimension", to_string(s.constraint_dimension)},
        {"fired_rule", s.fired_rule},
    };
}

} // namespace clause_audit
