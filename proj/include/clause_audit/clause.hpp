#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "clause_audit/errors.hpp"
#include "clause_audit/jsonl.hpp"

namespace clause_audit {

enum class RfcKeyword {
    MUST,
    MUST_NOT,
    SHALL,
    SHALL_NOT,
    SHOULD,
    SHOULD_NOT,
    RECOMMENDED,
    MAY,
    OPTIONAL,
};

enum class RequirementClass {
    MANDATORY,
    OPTIONAL_CONDITIONAL_MUST,
    OPTIONAL_NON_MUST,
};

enum class Actor { CLIENT, SERVER, BOTH, UNSPECIFIED };

inline bool is_must_family(RfcKeyword k) {
    return k == RfcKeyword::MUST || k == RfcKeyword::MUST_NOT ||
           k == RfcKeyword::SHALL || k == RfcKeyword::SHALL_NOT;
}

/// The keyword as it appears in specification prose ("MUST NOT", not "MUST_NOT").
inline std::string keyword_phrase(RfcKeyword k) {
    switch (k) {
        case RfcKeyword::MUST: return "MUST";
        case RfcKeyword::MUST_NOT: return "MUST NOT";
        case RfcKeyword::SHALL: return "SHALL";
        case RfcKeyword::SHALL_NOT: return "SHALL NOT";
        case RfcKeyword::SHOULD: return "SHOULD";
        case RfcKeyword::SHOULD_NOT: return "SHOULD NOT";
        case RfcKeyword::RECOMMENDED: return "RECOMMENDED";
        case RfcKeyword::MAY: return "MAY";
        case RfcKeyword::OPTIONAL: return "OPTIONAL";
    }
    return "MUST";
}

inline std::string to_string(RfcKeyword k) {
    switch (k) {
        case RfcKeyword::MUST: return "MUST";
        case RfcKeyword::MUST_NOT: return "MUST_NOT";
        case RfcKeyword::SHALL: return "SHALL";
        case RfcKeyword::SHALL_NOT: return "SHALL_NOT";
        case RfcKeyword::SHOULD: return "SHOULD";
        case RfcKeyword::SHOULD_NOT: return "SHOULD_NOT";
        case RfcKeyword::RECOMMENDED: return "RECOMMENDED";
        case RfcKeyword::MAY: return "MAY";
        case RfcKeyword::OPTIONAL: return "OPTIONAL";
    }
    return "MUST";
}

inline std::optional<RfcKeyword> rfc_keyword_from_string(const std::string& s) {
    if (s == "MUST") return RfcKeyword::MUST;
    if (s == "MUST_NOT") return RfcKeyword::MUST_NOT;
    if (s == "SHALL") return RfcKeyword::SHALL;
    if (s == "SHALL_NOT") return RfcKeyword::SHALL_NOT;
    if (s == "SHOULD") return RfcKeyword::SHOULD;
    if (s == "SHOULD_NOT") return RfcKeyword::SHOULD_NOT;
    if (s == "RECOMMENDED") return RfcKeyword::RECOMMENDED;
    if (s == "MAY") return RfcKeyword::MAY;
    if (s == "OPTIONAL") return RfcKeyword::OPTIONAL;
    return std::nullopt;
}

inline std::string to_string(RequirementClass c) {
    switch (c) {
        case RequirementClass::MANDATORY: return "MANDATORY";
        case RequirementClass::OPTIONAL_CONDITIONAL_MUST: return "OPTIONAL_CONDITIONAL_MUST";
        case RequirementClass::OPTIONAL_NON_MUST: return "OPTIONAL_NON_MUST";
    }
    return "OPTIONAL_NON_MUST";
}

inline std::optional<RequirementClass> requirement_class_from_string(const std::string& s) {
    if (s == "MANDATORY") return RequirementClass::MANDATORY;
    if (s == "OPTIONAL_CONDITIONAL_MUST") return RequirementClass::OPTIONAL_CONDITIONAL_MUST;
    if (s == "OPTIONAL_NON_MUST") return RequirementClass::OPTIONAL_NON_MUST;
    return std::nullopt;
}

inline std::string to_string(Actor a) {
    switch (a) {
        case Actor::CLIENT: return "CLIENT";
        case Actor::SERVER: return "SERVER";
        case Actor::BOTH: return "BOTH";
        case Actor::UNSPECIFIED: return "UNSPECIFIED";
    }
    return "UNSPECIFIED";
}

inline std::optional<Actor> actor_from_string(const std::string& s) {
    if (s == "CLIENT") return Actor::CLIENT;
    if (s == "SERVER") return Actor::SERVER;
    if (s == "BOTH") return Actor::BOTH;
    if (s == "UNSPECIFIED") return Actor::UNSPECIFIED;
    return std::nullopt;
}

/// One normative statement extracted from the specification.
struct Clause {
    std::string id;
    std::string text;
    RfcKeyword rfc_keyword = RfcKeyword::MUST;
    std::string scope_condition; // empty when unconditional
    RequirementClass requirement_class = RequirementClass::MANDATORY;
    Actor actor = Actor::UNSPECIFIED;
    std::string message_kind; // empty when the clause names no protocol message
    std::string section_ref;

    bool operator==(const Clause&) const = default;
};

struct ClauseCatalog {
    std::string spec_version;
    std::vector<Clause> clauses;

    const Clause* find(const std::string& id) const {
        for (const auto& c : clauses)
            if (c.id == id) return &c;
        return nullptr;
    }
};

inline Json to_json(const Clause& c) {
    return Json{
        {"id", c.id},
        {"text", c.text},
        {"rfc_keyword", to_string(c.rfc_keyword)},
        {"scope_condition", c.scope_condition},
        {"requirement_class", to_string(c.requirement_class)},
        {"actor", to_string(c.actor)},
        {"message_kind", c.message_kind},
        {"section_ref", c.section_ref},
    };
}

inline Clause clause_from_json(const Json& j) {
    Clause c;
    c.id = j.at("id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    auto kw = rfc_keyword_from_string(j.at("rfc_keyword").get<std::string>());
    if (!kw) throw AuditError("BadCatalog", "unknown rfc_keyword in clause " + c.id);
    c.rfc_keyword = *kw;
    c.scope_condition = j.value("scope_condition", std::string{});
    auto rc = requirement_class_from_string(j.at("requirement_class").get<std::string>());
    if (!rc) throw AuditError("BadCatalog", "unknown requirement_class in clause " + c.id);
    c.requirement_class = *rc;
    auto actor = actor_from_string(j.value("actor", std::string{"UNSPECIFIED"}));
    c.actor = actor.value_or(Actor::UNSPECIFIED);
    c.message_kind = j.value("message_kind", std::string{});
    c.section_ref = j.value("section_ref", std::string{});
    return c;
}

/// Checks the structural invariants of a single clause; returns a diagnostic
/// or empty string when valid.
inline std::string validate_clause(const Clause& c) {
    if (c.id.empty()) return "clause id is empty";
    if (c.text.find(keyword_phrase(c.rfc_keyword)) == std::string::npos)
        return "clause " + c.id + " text does not contain its keyword " +
               keyword_phrase(c.rfc_keyword);
    bool must = is_must_family(c.rfc_keyword);
    bool scoped = !c.scope_condition.empty();
    RequirementClass expect =
        !must ? RequirementClass::OPTIONAL_NON_MUST
              : (scoped ? RequirementClass::OPTIONAL_CONDITIONAL_MUST
                        : RequirementClass::MANDATORY);
    if (c.requirement_class != expect)
        return "clause " + c.id + " requirement_class " + to_string(c.requirement_class) +
               " inconsistent with keyword/scope (expected " + to_string(expect) + ")";
    return {};
}

inline std::string validate_catalog(const ClauseCatalog& catalog) {
    std::unordered_set<std::string> ids;
    for (const auto& c : catalog.clauses) {
        if (!ids.insert(c.id).second) return "duplicate clause id " + c.id;
        if (auto err = validate_clause(c); !err.empty()) return err;
    }
    return {};
}

inline void save_catalog(const std::filesystem::path& path, const ClauseCatalog& catalog) {
    std::vector<Json> lines;
    lines.reserve(catalog.clauses.size());
    for (const auto& c : catalog.clauses) lines.push_back(to_json(c));
    jsonl::write_records(path, lines);
}

inline ClauseCatalog load_catalog(const std::filesystem::path& path,
                                  const std::string& spec_version = {}) {
    ClauseCatalog catalog;
    catalog.spec_version = spec_version;
    for (const auto& rec : jsonl::read_records(path))
        catalog.clauses.push_back(clause_from_json(rec));
    if (auto err = validate_catalog(catalog); !err.empty())
        throw AuditError("BadCatalog", path.string() + ": " + err);
    return catalog;
}

} // namespace clause_audit
