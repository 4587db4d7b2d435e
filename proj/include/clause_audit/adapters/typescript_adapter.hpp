#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "clause_audit/adapters/common.hpp"
#include "clause_audit/lex.hpp"
#include "clause_audit/syntax_tree.hpp"

namespace clause_audit::adapters {

inline const QueryPack& typescript_pack() {
    static const QueryPack kPack = {
        "typescript",
        {{"call_direct", "name"}, {"call_method", "name"}, {"call_constructor", "name"}},
        {{"function", "name"}, {"method", "name"}, {"closure_property", "name"}},
        {"if", "else", "loop", "case", "closure_property"},
    };
    return kPack;
}

namespace ts_detail {

using common::matching_close;
using common::params_from_group;
using common::receiver_chain;
using lex::Token;

inline const std::unordered_set<std::string>& call_excluded() {
    static const std::unordered_set<std::string> kSet = {
        "if", "for", "while", "switch", "catch", "return", "typeof", "function",
        "new", "in", "of", "instanceof", "void", "delete", "do", "else", "case",
        "default", "import", "export", "const", "let", "var", "class", "extends",
        "await", "yield", "throw",
    };
    return kSet;
}

inline bool is_modifier(const std::string& s) {
    return s == "public" || s == "private" || s == "protected" || s == "static" ||
           s == "async" || s == "readonly" || s == "get" || s == "set" ||
           s == "abstract" || s == "override" || s == "export" || s == "declare";
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string filepath)
        : t_(std::move(tokens)), filepath_(std::move(filepath)) {}

    SyntaxTree run() {
        int last_line = t_.empty() ? 1 : t_.back().line;
        root_ = make_module(last_line);
        stack_.push_back({root_.get(), true, false, false, 0, "", false});
        while (i_ < t_.size()) step();
        while (stack_.size() > 1) pop_scope(last_line);
        return std::move(root_);
    }

private:
    struct Scope {
        SyntaxNode* node;
        bool brace;          // opened by '{'
        bool braceless_stmt; // guard without braces; closes at statement end
        bool single_expr;    // arrow expression body
        int open_depth;      // paren/bracket depth at open
        std::string owner;   // object scopes: label for closure properties
        bool type_ctx;       // interface/type literal: no defs or calls inside
        bool case_arm = false; // closes only at the next arm or the switch '}'
    };

    std::vector<Token> t_;
    std::string filepath_;
    SyntaxTree root_;
    std::vector<Scope> stack_;
    size_t i_ = 0;
    int depth_ = 0; // paren/bracket depth
    int prev_line_ = 1;
    std::string prev_text_; // previous significant token text
    std::string pending_assign_;
    std::string pending_prop_;
    bool pending_type_ = false;

    SyntaxNode* top() { return stack_.back().node; }

    const Token& tok(size_t k) const { return t_[k]; }
    bool has(size_t k) const { return k < t_.size(); }

    void pop_scope(int end_line) {
        stack_.back().node->end_line = std::max(stack_.back().node->start_line, end_line);
        stack_.pop_back();
    }

    void push_scope(SyntaxNode* node, bool brace, bool braceless, bool single_expr,
                    const std::string& owner = "", bool type_ctx = false) {
        node->start_line = node->start_line == 1 && !t_.empty() ? tok(std::min(i_, t_.size() - 1)).line
                                                                : node->start_line;
        stack_.push_back({node, brace, braceless, single_expr, depth_, owner, type_ctx});
    }

    bool in_type_ctx() const {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
            if (it->type_ctx) return true;
        return false;
    }

    std::string enclosing_def_name() const {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const std::string& k = it->node->kind;
            if (k == "function" || k == "method" || k == "closure_property")
                return it->node->name;
        }
        return "";
    }

    static bool continuation_token(const std::string& s) {
        static const std::unordered_set<std::string> kCont = {
            ".", "?.", ",", "(", "[", "+", "-", "*", "/", "%", "&&", "||", "=",
            "=>", ":", "?", "<", ">", "==", "===", "!=", "!==", "<=", ">=",
            "typeof", "new", "in", "of", "instanceof", "return",
        };
        return kCont.count(s) > 0;
    }

    // Statement-end bookkeeping for braceless guards and expression arrows.
    void close_virtual_scopes(const Token& cur) {
        for (;;) {
            if (stack_.size() <= 1) return;
            Scope& sc = stack_.back();
            if (sc.brace) return;
            if (sc.case_arm) return; // arms close at the next arm or the switch '}'
            bool close = false;
            if (cur.is_punct(";") && depth_ == sc.open_depth) close = true;
            else if (cur.is_punct(",") && depth_ == sc.open_depth && sc.single_expr) close = true;
            else if ((cur.is_punct(")") || cur.is_punct("]")) && depth_ == sc.open_depth) close = true;
            else if (cur.is_punct("}")) close = true;
            else if (cur.is_ident("else") && sc.braceless_stmt) close = true;
            else if (cur.line > prev_line_ && depth_ == sc.open_depth &&
                     !continuation_token(prev_text_) && !continuation_token(cur.token_text) &&
                     !cur.is_punct(")") && !cur.is_punct("]") && !cur.is_punct("}") &&
                     !cur.is_punct(";"))
                close = true; // newline ends the single statement (ASI)
            if (!close) return;
            pop_scope(prev_line_);
        }
    }

    void record_call(size_t name_idx, const std::string& kind_override = "") {
        if (in_type_ctx()) return;
        const std::string& name = tok(name_idx).token_text;
        if (call_excluded().count(name)) return;
        std::string recv = receiver_chain(t_, name_idx);
        std::string kind = kind_override;
        if (kind.empty()) {
            bool dotted = name_idx >= 1 && (tok(name_idx - 1).is_punct(".") ||
                                            tok(name_idx - 1).is_punct("?."));
            kind = dotted ? "call_method" : "call_direct";
        }
        SyntaxNode* call = top()->add_child(kind);
        call->name = name;
        call->receiver = recv;
        call->start_line = tok(name_idx).line;
        call->end_line = tok(name_idx).line;
    }

    // Calls written inside a guard condition run unconditionally; they are
    // attributed to the scope that contains the guard.
    void extract_calls_in_range(size_t begin, size_t end) {
        for (size_t k = begin; k + 1 < end; ++k) {
            if (tok(k).type == Token::Type::Ident && tok(k + 1).is_punct("(") &&
                !(k >= 1 && tok(k - 1).is_ident("new")))
                record_call(k);
            if (tok(k).is_ident("new") && k + 1 < end) {
                size_t m = k + 1;
                while (m + 2 < end && tok(m + 1).is_punct(".") &&
                       tok(m + 2).type == Token::Type::Ident)
                    m += 2;
                if (tok(m).type == Token::Type::Ident && m + 1 < end && tok(m + 1).is_punct("("))
                    record_call(m, "call_constructor");
            }
        }
    }

    void skip_to_matching_close_brace() {
        // fast-forward over interface/type bodies; nothing inside is IR
        int d = 0;
        while (i_ < t_.size()) {
            if (tok(i_).is_punct("{")) ++d;
            if (tok(i_).is_punct("}")) {
                --d;
                if (d == 0) { ++i_; return; }
            }
            ++i_;
        }
    }

    /// Skip a type annotation after ':' up to '=' , ';' , ')' or ',' at this
    /// depth; the first '{' is treated as a body opener and left in place.
    size_t skip_type_annotation(size_t k) {
        int d = 0;
        while (k < t_.size()) {
            const Token& tk = tok(k);
            if (tk.is_punct("(") || tk.is_punct("[")) ++d;
            if (tk.is_punct(")") || tk.is_punct("]")) {
                if (d == 0) return k;
                --d;
            }
            if (d == 0 && (tk.is_punct("=") || tk.is_punct(";") || tk.is_punct(",") ||
                           tk.is_punct("{")))
                return k;
            ++k;
        }
        return k;
    }

    void open_guard(const std::string& kind, const std::string& cond, size_t body_idx) {
        SyntaxNode* guard = top()->add_child(kind);
        guard->cond_text = cond;
        guard->start_line = has(body_idx) ? tok(body_idx).line : prev_line_;
        if (has(body_idx) && tok(body_idx).is_punct("{")) {
            i_ = body_idx + 1;
            push_scope(guard, true, false, false);
        } else {
            i_ = body_idx;
            push_scope(guard, false, true, false);
        }
    }

    void open_function(const std::string& kind, const std::string& name,
                       std::vector<std::string> params, size_t body_idx,
                       const std::string& cond_text = "") {
        SyntaxNode* def = top()->add_child(kind);
        def->name = name;
        def->params = std::move(params);
        def->cond_text = cond_text;
        def->start_line = prev_line_;
        if (has(body_idx) && tok(body_idx).is_punct("{")) {
            i_ = body_idx + 1;
            push_scope(def, true, false, false);
        } else {
            i_ = body_idx;
            push_scope(def, false, false, true);
        }
    }

    /// Handles "(params) => body" or "ident => body" when detected; returns
    /// true if an arrow was consumed starting at i_.
    bool try_arrow() {
        size_t open = i_;
        std::vector<std::string> params;
        size_t arrow;
        if (tok(open).is_punct("(")) {
            size_t close = matching_close(t_, open);
            if (!has(close + 1) || !tok(close + 1).is_punct("=>")) return false;
            params = params_from_group(t_, open, close);
            arrow = close + 1;
        } else if (tok(open).type == Token::Type::Ident && has(open + 1) &&
                   tok(open + 1).is_punct("=>")) {
            params = {tok(open).token_text};
            arrow = open + 1;
        } else {
            return false;
        }
        std::string kind = "function";
        std::string name = pending_assign_;
        std::string cond;
        if (!pending_prop_.empty() && top()->kind == "object") {
            kind = "closure_property";
            std::string owner = stack_.back().owner.empty() ? enclosing_def_name()
                                                            : stack_.back().owner;
            name = owner.empty() ? pending_prop_ : owner + "." + pending_prop_;
            std::string plist;
            for (size_t k = 0; k < params.size(); ++k) {
                if (k) plist += ", ";
                plist += params[k];
            }
            cond = pending_prop_ + ": (" + plist + ")";
        } else if (top()->kind == "class") {
            kind = "method";
            name = pending_prop_.empty() ? pending_assign_ : pending_prop_;
        }
        pending_prop_.clear();
        pending_assign_.clear();
        open_function(kind, name, std::move(params), arrow + 1, cond);
        return true;
    }

    void handle_open_brace() {
        SyntaxNode* node;
        if (pending_type_) {
            pending_type_ = false;
            skip_to_matching_close_brace();
            return;
        }
        bool value_pos = prev_text_ == "=" || prev_text_ == "(" || prev_text_ == "[" ||
                         prev_text_ == "," || prev_text_ == ":" || prev_text_ == "return" ||
                         prev_text_ == "=>" || prev_text_ == "&&" || prev_text_ == "||" ||
                         prev_text_ == "?";
        if (value_pos) {
            node = top()->add_child("object");
            std::string owner = !pending_assign_.empty() ? pending_assign_ : pending_prop_;
            node->name = owner;
            node->start_line = tok(i_).line;
            ++i_;
            push_scope(node, true, false, false, owner);
            pending_prop_.clear();
            return;
        }
        node = top()->add_child("block");
        node->start_line = tok(i_).line;
        ++i_;
        push_scope(node, true, false, false);
    }

    void handle_close_brace() {
        int line = tok(i_).line;
        while (stack_.size() > 1 && !stack_.back().brace) pop_scope(line);
        if (stack_.size() > 1) pop_scope(line);
        ++i_;
        pending_prop_.clear();
        pending_assign_.clear();
    }

    void step() {
        const Token& cur = tok(i_);
        close_virtual_scopes(cur);

        auto advance = [&] {
            prev_line_ = cur.line;
            prev_text_ = cur.token_text;
            ++i_;
        };

        if (cur.type == Token::Type::Punct) {
            const std::string& s = cur.token_text;
            if (s == "{") { handle_open_brace(); prev_line_ = cur.line; prev_text_ = s; return; }
            if (s == "}") {
                // a case arm is virtual: it ends with its switch block
                handle_close_brace();
                prev_line_ = cur.line;
                prev_text_ = s;
                return;
            }
            if (s == "(") {
                if (try_arrow()) { prev_line_ = cur.line; prev_text_ = "=>"; return; }
                ++depth_;
                advance();
                return;
            }
            if (s == ")" || s == "]") { --depth_; advance(); return; }
            if (s == "[") { ++depth_; advance(); return; }
            if (s == ";") { pending_assign_.clear(); pending_prop_.clear(); advance(); return; }
            if (s == ",") { pending_prop_.clear(); advance(); return; }
            advance();
            return;
        }

        if (cur.type == Token::Type::Str) {
            // string-keyed object property: "name": value
            if (top()->kind == "object" && has(i_ + 1) && tok(i_ + 1).is_punct(":") &&
                cur.token_text.size() >= 2) {
                pending_prop_ = cur.token_text.substr(1, cur.token_text.size() - 2);
                prev_line_ = cur.line;
                prev_text_ = ":";
                i_ += 2;
                return;
            }
            advance();
            return;
        }

        if (cur.type == Token::Type::Number) { advance(); return; }

        const std::string& s = cur.token_text;

        if (s == "class") {
            SyntaxNode* cls = top()->add_child("class");
            if (has(i_ + 1) && tok(i_ + 1).type == Token::Type::Ident)
                cls->name = tok(i_ + 1).token_text;
            cls->start_line = cur.line;
            size_t k = i_ + 1;
            while (has(k) && !tok(k).is_punct("{")) ++k;
            i_ = k + 1;
            push_scope(cls, true, false, false);
            prev_line_ = cur.line;
            prev_text_ = "{";
            return;
        }
        if (s == "interface" || s == "enum" || (s == "namespace" && has(i_ + 1))) {
            size_t k = i_ + 1;
            while (has(k) && !tok(k).is_punct("{") && !tok(k).is_punct(";")) ++k;
            if (has(k) && tok(k).is_punct("{")) {
                if (s == "namespace") {
                    SyntaxNode* blk = top()->add_child("block");
                    blk->start_line = cur.line;
                    i_ = k + 1;
                    push_scope(blk, true, false, false);
                } else {
                    i_ = k;
                    skip_to_matching_close_brace();
                }
            } else {
                i_ = k;
            }
            prev_line_ = cur.line;
            prev_text_ = s;
            return;
        }
        if (s == "type" && has(i_ + 1) && tok(i_ + 1).type == Token::Type::Ident &&
            has(i_ + 2) && (tok(i_ + 2).is_punct("=") || tok(i_ + 2).is_punct("<"))) {
            pending_type_ = true;
            size_t k = i_ + 2;
            while (has(k) && !tok(k).is_punct("{") && !tok(k).is_punct(";")) ++k;
            if (has(k) && tok(k).is_punct("{")) {
                i_ = k;
                skip_to_matching_close_brace();
            } else {
                i_ = has(k) ? k + 1 : k;
            }
            pending_type_ = false;
            prev_text_ = ";";
            prev_line_ = cur.line;
            return;
        }
        if (s == "function") {
            size_t k = i_ + 1;
            if (has(k) && tok(k).is_punct("*")) ++k;
            std::string name;
            if (has(k) && tok(k).type == Token::Type::Ident) {
                name = tok(k).token_text;
                ++k;
            }
            std::vector<std::string> params;
            if (has(k) && tok(k).is_punct("(")) {
                size_t close = matching_close(t_, k);
                params = params_from_group(t_, k, close);
                k = close + 1;
            }
            if (has(k) && tok(k).is_punct(":")) k = skip_type_annotation(k + 1);
            std::string kind = "function";
            std::string cond;
            if (name.empty()) {
                if (!pending_prop_.empty() && top()->kind == "object") {
                    kind = "closure_property";
                    std::string owner = stack_.back().owner.empty() ? enclosing_def_name()
                                                                    : stack_.back().owner;
                    name = owner.empty() ? pending_prop_ : owner + "." + pending_prop_;
                    std::string plist;
                    for (size_t p = 0; p < params.size(); ++p) {
                        if (p) plist += ", ";
                        plist += params[p];
                    }
                    cond = pending_prop_ + ": (" + plist + ")";
                } else {
                    name = pending_assign_;
                }
            }
            pending_prop_.clear();
            prev_line_ = cur.line;
            prev_text_ = "=>";
            open_function(kind, name, std::move(params), k, cond);
            return;
        }
        if (s == "if" && has(i_ + 1) && tok(i_ + 1).is_punct("(")) {
            size_t close = matching_close(t_, i_ + 1);
            extract_calls_in_range(i_ + 2, close);
            std::string cond = lex::join_tokens(t_, i_ + 2, close);
            prev_line_ = cur.line;
            prev_text_ = ")";
            open_guard("if", cond, close + 1);
            return;
        }
        if (s == "else") {
            if (has(i_ + 1) && tok(i_ + 1).is_ident("if")) {
                size_t close = matching_close(t_, i_ + 2);
                extract_calls_in_range(i_ + 3, close);
                std::string cond = "else if " + lex::join_tokens(t_, i_ + 3, close);
                prev_line_ = cur.line;
                prev_text_ = ")";
                open_guard("if", cond, close + 1);
                return;
            }
            prev_line_ = cur.line;
            prev_text_ = s;
            open_guard("else", "else", i_ + 1);
            return;
        }
        if ((s == "for" || s == "while") && has(i_ + 1) && tok(i_ + 1).is_punct("(")) {
            size_t close = matching_close(t_, i_ + 1);
            extract_calls_in_range(i_ + 2, close);
            std::string cond = s + " (" + lex::join_tokens(t_, i_ + 2, close) + ")";
            prev_line_ = cur.line;
            prev_text_ = ")";
            open_guard("loop", cond, close + 1);
            return;
        }
        if (s == "do" && has(i_ + 1) && tok(i_ + 1).is_punct("{")) {
            prev_line_ = cur.line;
            prev_text_ = s;
            open_guard("loop", "do", i_ + 1);
            return;
        }
        if (s == "switch" && has(i_ + 1) && tok(i_ + 1).is_punct("(")) {
            size_t close = matching_close(t_, i_ + 1);
            extract_calls_in_range(i_ + 2, close);
            SyntaxNode* sw = top()->add_child("switch");
            sw->cond_text = lex::join_tokens(t_, i_ + 2, close);
            sw->start_line = cur.line;
            size_t body = close + 1;
            if (has(body) && tok(body).is_punct("{")) {
                i_ = body + 1;
                push_scope(sw, true, false, false);
            } else {
                i_ = body;
            }
            prev_line_ = cur.line;
            prev_text_ = "{";
            return;
        }
        if ((s == "case" || s == "default") &&
            (top()->kind == "switch" || top()->kind == "case")) {
            if (top()->kind == "case") pop_scope(cur.line);
            size_t k = i_ + 1;
            int d = 0;
            while (has(k)) {
                if (tok(k).is_punct("(") || tok(k).is_punct("[")) ++d;
                if (tok(k).is_punct(")") || tok(k).is_punct("]")) --d;
                if (d == 0 && tok(k).is_punct(":")) break;
                ++k;
            }
            SyntaxNode* arm = top()->add_child("case");
            arm->cond_text = s == "default" ? "default" : "case " + lex::join_tokens(t_, i_ + 1, k);
            arm->start_line = cur.line;
            i_ = has(k) ? k + 1 : k;
            push_scope(arm, false, false, false);
            stack_.back().case_arm = true;
            prev_line_ = cur.line;
            prev_text_ = ":";
            return;
        }
        if (s == "new") {
            size_t m = i_ + 1;
            while (has(m + 2) && tok(m + 1).is_punct(".") && tok(m + 2).type == Token::Type::Ident)
                m += 2;
            size_t after = m + 1;
            if (has(after) && tok(after).is_punct("<")) { // generic arguments
                int angle = 0;
                while (after < t_.size()) {
                    if (tok(after).is_punct("<")) ++angle;
                    if (tok(after).is_punct(">")) {
                        --angle;
                        if (angle == 0) { ++after; break; }
                    }
                    ++after;
                }
            }
            if (has(m) && tok(m).type == Token::Type::Ident && has(after) &&
                tok(after).is_punct("(")) {
                record_call(m, "call_constructor");
                prev_line_ = tok(m).line;
                prev_text_ = tok(m).token_text;
                i_ = after;
                return;
            }
            advance();
            return;
        }
        if (s == "const" || s == "let" || s == "var") {
            if (has(i_ + 1) && tok(i_ + 1).type == Token::Type::Ident)
                pending_assign_ = tok(i_ + 1).token_text;
            advance();
            return;
        }

        // class member level: method definitions and field declarations
        bool member_level = top()->kind == "class" && depth_ == stack_.back().open_depth;
        if (member_level) {
            if (is_modifier(s) && has(i_ + 1) &&
                (tok(i_ + 1).type == Token::Type::Ident || tok(i_ + 1).is_punct("["))) {
                advance();
                return;
            }
            if (has(i_ + 1) && tok(i_ + 1).is_punct("(")) {
                size_t close = matching_close(t_, i_ + 1);
                size_t k = close + 1;
                if (has(k) && tok(k).is_punct(":")) k = skip_type_annotation(k + 1);
                if (has(k) && tok(k).is_punct("{")) {
                    auto params = params_from_group(t_, i_ + 1, close);
                    prev_line_ = cur.line;
                    prev_text_ = ")";
                    open_function("method", s, std::move(params), k);
                    return;
                }
                i_ = k; // signature or unparsable member: skip header
                prev_line_ = cur.line;
                prev_text_ = ";";
                return;
            }
            if (has(i_ + 1) && tok(i_ + 1).is_punct(":")) {
                pending_prop_ = s;
                size_t k = skip_type_annotation(i_ + 2);
                i_ = k;
                prev_line_ = cur.line;
                prev_text_ = tok(std::min(k, t_.size() - 1)).is_punct("=") ? "" : ";";
                if (has(k) && tok(k).is_punct("=")) {
                    pending_assign_ = s;
                    prev_text_ = "=";
                    ++i_;
                }
                return;
            }
            if (has(i_ + 1) && tok(i_ + 1).is_punct("=")) {
                pending_assign_ = s;
                pending_prop_ = s;
                prev_line_ = cur.line;
                prev_text_ = "=";
                i_ += 2;
                return;
            }
        }

        // object literal property key: name: value
        if (top()->kind == "object" && has(i_ + 1) && tok(i_ + 1).is_punct(":") &&
            depth_ == stack_.back().open_depth) {
            pending_prop_ = s;
            prev_line_ = cur.line;
            prev_text_ = ":";
            i_ += 2;
            return;
        }
        // object literal shorthand method: name(params) { ... }
        if (top()->kind == "object" && has(i_ + 1) && tok(i_ + 1).is_punct("(") &&
            depth_ == stack_.back().open_depth && !is_modifier(s)) {
            size_t close = matching_close(t_, i_ + 1);
            size_t k = close + 1;
            if (has(k) && tok(k).is_punct(":")) k = skip_type_annotation(k + 1);
            if (has(k) && tok(k).is_punct("{")) {
                auto params = params_from_group(t_, i_ + 1, close);
                std::string owner = stack_.back().owner.empty() ? enclosing_def_name()
                                                                : stack_.back().owner;
                std::string name = owner.empty() ? s : owner + "." + s;
                std::string plist;
                for (size_t p = 0; p < params.size(); ++p) {
                    if (p) plist += ", ";
                    plist += params[p];
                }
                prev_line_ = cur.line;
                prev_text_ = ")";
                open_function("closure_property", name, std::move(params), k,
                              s + ": (" + plist + ")");
                return;
            }
        }

        // single-identifier arrow: x => body
        if (has(i_ + 1) && tok(i_ + 1).is_punct("=>")) {
            if (try_arrow()) { prev_line_ = cur.line; prev_text_ = "=>"; return; }
        }

        // plain call
        if (has(i_ + 1) && tok(i_ + 1).is_punct("(") &&
            !(i_ >= 1 && tok(i_ - 1).is_ident("new"))) {
            record_call(i_);
            advance();
            return;
        }

        advance();
    }
};

} // namespace ts_detail

/// Brace-structured parse of a TypeScript/JavaScript source file into the
/// uniform syntax tree. Interfaces and type literals contribute nothing;
/// function-valued object properties become closure_property definitions and
/// act as guards for the calls inside them.
inline SyntaxTree parse_typescript(const std::string& src, const std::string& filepath) {
    lex::LexOptions opt;
    opt.line_comment_slash = true;
    opt.block_comment = true;
    opt.backtick_string = true;
    auto tokens = lex::tokenize(src, opt, filepath);
    return ts_detail::Parser(std::move(tokens), filepath).run();
}

} // namespace clause_audit::adapters
