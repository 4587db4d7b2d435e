#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "clause_audit/errors.hpp"
#include "clause_audit/jsonl.hpp"

namespace clause_audit {

struct Span {
    int start = 1; // 1-based, inclusive
    int end = 1;

    bool operator==(const Span&) const = default;
};

enum class CallKind { DirectCall, MethodCall, ConstructorCall };
enum class DefKind { Function, Method, ClosureProperty };

inline std::string to_string(CallKind k) {
    switch (k) {
        case CallKind::DirectCall: return "direct_call";
        case CallKind::MethodCall: return "method_call";
        case CallKind::ConstructorCall: return "constructor_call";
    }
    return "direct_call";
}

inline CallKind call_kind_from_string(const std::string& s) {
    if (s == "method_call") return CallKind::MethodCall;
    if (s == "constructor_call") return CallKind::ConstructorCall;
    return CallKind::DirectCall;
}

inline std::string to_string(DefKind k) {
    switch (k) {
        case DefKind::Function: return "function";
        case DefKind::Method: return "method";
        case DefKind::ClosureProperty: return "closure_property";
    }
    return "function";
}

inline DefKind def_kind_from_string(const std::string& s) {
    if (s == "method") return DefKind::Method;
    if (s == "closure_property") return DefKind::ClosureProperty;
    return DefKind::Function;
}

/// A guarded function invocation: `cond` holds the chain of enclosing guard
/// conditions, outermost first (innermost last), empty when unguarded.
struct CallRecord {
    CallKind kind = CallKind::DirectCall;
    std::string name;
    std::string recv; // receiver expression text, empty for bare calls
    std::vector<std::string> cond;
    std::string filepath;
    Span span;

    bool operator==(const CallRecord&) const = default;
};

struct DefRecord {
    DefKind kind = DefKind::Function;
    std::string name;
    std::vector<std::string> params;
    std::string filepath;
    Span span;

    bool operator==(const DefRecord&) const = default;
};

struct IRBundle {
    std::string language;
    std::vector<CallRecord> calls;
    std::vector<DefRecord> defs;
    std::string repo_fingerprint;
};

inline Json to_json(const Span& s) { return Json{{"start", s.start}, {"end", s.end}}; }

inline Span span_from_json(const Json& j) {
    return Span{j.at("start").get<int>(), j.at("end").get<int>()};
}

inline Json to_json(const CallRecord& r) {
    return Json{
        {"kind", to_string(r.kind)}, {"name", r.name},     {"recv", r.recv},
        {"cond", r.cond},            {"filepath", r.filepath}, {"span", to_json(r.span)},
    };
}

inline CallRecord call_from_json(const Json& j) {
    CallRecord r;
    r.kind = call_kind_from_string(j.at("kind").get<std::string>());
    r.name = j.at("name").get<std::string>();
    r.recv = j.value("recv", std::string{});
    r.cond = j.value("cond", std::vector<std::string>{});
    r.filepath = j.at("filepath").get<std::string>();
    r.span = span_from_json(j.at("span"));
    return r;
}

inline Json to_json(const DefRecord& r) {
    return Json{
        {"kind", to_string(r.kind)},     {"name", r.name},
        {"params", r.params},            {"filepath", r.filepath},
        {"span", to_json(r.span)},
    };
}

inline DefRecord def_from_json(const Json& j) {
    DefRecord r;
    r.kind = def_kind_from_string(j.at("kind").get<std::string>());
    r.name = j.at("name").get<std::string>();
    r.params = j.value("params", std::vector<std::string>{});
    r.filepath = j.at("filepath").get<std::string>();
    r.span = span_from_json(j.at("span"));
    return r;
}

/// Canonical record order: (filepath, span.start, name).
inline void canonicalize(IRBundle& bundle) {
    auto call_key = [](const CallRecord& r) { return std::tie(r.filepath, r.span.start, r.name); };
    auto def_key = [](const DefRecord& r) { return std::tie(r.filepath, r.span.start, r.name); };
    std::stable_sort(bundle.calls.begin(), bundle.calls.end(),
                     [&](const auto& a, const auto& b) { return call_key(a) < call_key(b); });
    std::stable_sort(bundle.defs.begin(), bundle.defs.end(),
                     [&](const auto& a, const auto& b) { return def_key(a) < def_key(b); });
}

inline void save_bundle(const std::filesystem::path& out_dir, const IRBundle& bundle) {
    std::vector<Json> calls, defs;
    calls.reserve(bundle.calls.size());
    defs.reserve(bundle.defs.size());
    for (const auto& r : bundle.calls) calls.push_back(to_json(r));
    for (const auto& r : bundle.defs) defs.push_back(to_json(r));
    jsonl::write_records(out_dir / ("calls_" + bundle.language + ".jsonl"), calls);
    jsonl::write_records(out_dir / ("defs_" + bundle.language + ".jsonl"), defs);
}

inline IRBundle load_bundle(const std::filesystem::path& dir, const std::string& language,
                            const std::string& fingerprint = {}) {
    IRBundle bundle;
    bundle.language = language;
    bundle.repo_fingerprint = fingerprint;
    for (const auto& rec : jsonl::read_records(dir / ("calls_" + language + ".jsonl")))
        bundle.calls.push_back(call_from_json(rec));
    for (const auto& rec : jsonl::read_records(dir / ("defs_" + language + ".jsonl")))
        bundle.defs.push_back(def_from_json(rec));
    return bundle;
}

} // namespace clause_audit
