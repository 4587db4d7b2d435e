#pragma once

#include <memory>
#include <string>
#include <vector>

#include "clause_audit/ir.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

// ---------------------------------------------------------------------------
// Uniform tree-with-node-kinds interface produced by every language adapter.
// Node kinds are plain strings so query packs stay declarative data.
//
//   module, class, interface, function, method, closure_property,
//   if, else, loop, case, switch, object, block,
//   call_direct, call_method, call_constructor
// ---------------------------------------------------------------------------

struct SyntaxNode {
    std::string kind;
    std::string name;      // definition name / callee identifier / property
    std::string receiver;  // call nodes: receiver expression text
    std::string cond_text; // guard nodes: condition or arm header text
    std::vector<std::string> params;
    int start_line = 1;
    int end_line = 1;
    SyntaxNode* parent = nullptr;
    std::vector<std::unique_ptr<SyntaxNode>> children;

    SyntaxNode* add_child(std::string child_kind) {
        auto node = std::make_unique<SyntaxNode>();
        node->kind = std::move(child_kind);
        node->parent = this;
        children.push_back(std::move(node));
        return children.back().get();
    }
};

using SyntaxTree = std::unique_ptr<SyntaxNode>;

inline SyntaxTree make_module(int end_line) {
    auto root = std::make_unique<SyntaxNode>();
    root->kind = "module";
    root->start_line = 1;
    root->end_line = end_line;
    return root;
}

// ---------------------------------------------------------------------------
// Query packs: declarative node-kind patterns per language
// ---------------------------------------------------------------------------

struct QueryPattern {
    std::string node_kind;
    std::string capture; // node field holding the identifier ("name")
};

struct QueryPack {
    std::string language;
    std::vector<QueryPattern> call_patterns;
    std::vector<QueryPattern> def_patterns;
    std::vector<std::string> guard_kinds;
};

inline bool pack_matches(const std::vector<QueryPattern>& patterns, const std::string& kind) {
    for (const auto& p : patterns)
        if (p.node_kind == kind) return true;
    return false;
}

inline bool is_guard_kind(const QueryPack& pack, const std::string& kind) {
    for (const auto& k : pack.guard_kinds)
        if (k == kind) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Generic extraction: walks any adapter's tree under a query pack
// ---------------------------------------------------------------------------

namespace detail {

inline CallKind call_kind_of(const std::string& kind) {
    if (kind == "call_method") return CallKind::MethodCall;
    if (kind == "call_constructor") return CallKind::ConstructorCall;
    return CallKind::DirectCall;
}

inline DefKind def_kind_of(const std::string& kind) {
    if (kind == "method") return DefKind::Method;
    if (kind == "closure_property") return DefKind::ClosureProperty;
    return DefKind::Function;
}

/// Guard chain between a call node and its nearest enclosing named
/// definition, outermost first. Closure properties act as guards, so the walk
/// passes through them up to a function/method (or the module root).
inline std::vector<std::string> guard_chain(const SyntaxNode& call, const QueryPack& pack) {
    std::vector<std::string> inner_first;
    for (const SyntaxNode* n = call.parent; n != nullptr; n = n->parent) {
        if (n->kind == "function" || n->kind == "method" || n->kind == "module") break;
        if (is_guard_kind(pack, n->kind)) inner_first.push_back(n->cond_text);
    }
    return {inner_first.rbegin(), inner_first.rend()};
}

template <typename Fn>
inline void walk(const SyntaxNode& node, Fn&& fn) {
    fn(node);
    for (const auto& child : node.children) walk(*child, fn);
}

} // namespace detail

/// One CallRecord per call node matched by the pack, with the guard-condition
/// chain collected from its ancestors.
inline std::vector<CallRecord> extract_calls(const SyntaxNode& tree, const QueryPack& pack,
                                             const std::string& filepath) {
    std::vector<CallRecord> records;
    detail::walk(tree, [&](const SyntaxNode& node) {
        if (!pack_matches(pack.call_patterns, node.kind)) return;
        CallRecord rec;
        rec.kind = detail::call_kind_of(node.kind);
        rec.name = node.name;
        rec.recv = node.receiver;
        rec.cond = detail::guard_chain(node, pack);
        rec.filepath = filepath;
        rec.span = {node.start_line, node.end_line};
        records.push_back(std::move(rec));
    });
    return records;
}

/// One DefRecord per definition node matched by the pack, including
/// function-valued properties of object literals.
inline std::vector<DefRecord> extract_defs(const SyntaxNode& tree, const QueryPack& pack,
                                           const std::string& filepath) {
    std::vector<DefRecord> records;
    detail::walk(tree, [&](const SyntaxNode& node) {
        if (!pack_matches(pack.def_patterns, node.kind)) return;
        DefRecord rec;
        rec.kind = detail::def_kind_of(node.kind);
        rec.name = node.name;
        rec.params = node.params;
        rec.filepath = filepath;
        rec.span = {node.start_line, node.end_line};
        records.push_back(std::move(rec));
    });
    return records;
}

} // namespace clause_audit
