#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clause_audit/ir.hpp"
#include "clause_audit/jsonl.hpp"

namespace clause_audit {

enum class EvidenceOrigin { CalleeDefinition, CallSite, FullSourceFallback };

inline std::string to_string(EvidenceOrigin o) {
    switch (o) {
        case EvidenceOrigin::CalleeDefinition: return "callee_definition";
        case EvidenceOrigin::CallSite: return "call_site";
        case EvidenceOrigin::FullSourceFallback: return "full_source_fallback";
    }
    return "call_site";
}

inline EvidenceOrigin evidence_origin_from_string(const std::string& s) {
    if (s == "callee_definition") return EvidenceOrigin::CalleeDefinition;
    if (s == "full_source_fallback") return EvidenceOrigin::FullSourceFallback;
    return EvidenceOrigin::CallSite;
}

/// A source excerpt backing a judgment; `text` is the exact file content at
/// `span` when the slice was read.
struct EvidenceSlice {
    std::string filepath;
    Span span;
    std::string text;
    EvidenceOrigin origin = EvidenceOrigin::CallSite;

    bool operator==(const EvidenceSlice&) const = default;
};

/// Evidence as handed to a reasoner: the slice plus the IR record it came
/// from. The record never reaches the serialized result; it exists so a
/// backend can see kind, name, and guard chain without re-parsing the slice.
struct AnnotatedEvidence {
    EvidenceSlice slice;
    std::optional<DefRecord> def;
    std::optional<CallRecord> call;
};

inline Json to_json(const EvidenceSlice& s) {
    return Json{
        {"filepath", s.filepath},
        {"span", to_json(s.span)},
        {"text", s.text},
        {"origin", to_string(s.origin)},
    };
}

inline EvidenceSlice evidence_slice_from_json(const Json& j) {
    EvidenceSlice s;
    s.filepath = j.at("filepath").get<std::string>();
    s.span = span_from_json(j.at("span"));
    s.text = j.at("text").get<std::string>();
    s.origin = evidence_origin_from_string(j.at("origin").get<std::string>());
    return s;
}

} // namespace clause_audit
