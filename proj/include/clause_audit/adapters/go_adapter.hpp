#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "clause_audit/adapters/common.hpp"
#include "clause_audit/lex.hpp"
#include "clause_audit/syntax_tree.hpp"

namespace clause_audit::adapters {

inline const QueryPack& go_pack() {
    static const QueryPack kPack = {
        "go",
        {{"call_direct", "name"}, {"call_method", "name"}},
        {{"function", "name"}, {"method", "name"}, {"closure_property", "name"}},
        {"if", "else", "loop", "case", "closure_property"},
    };
    return kPack;
}

namespace go_detail {

using common::matching_close;
using common::params_from_group;
using common::receiver_chain;
using lex::Token;

inline const std::unordered_set<std::string>& call_excluded() {
    static const std::unordered_set<std::string> kSet = {
        "if", "for", "switch", "select", "case", "default", "return", "func",
        "range", "type", "struct", "interface", "package", "import", "const",
        "var", "else", "chan", "goto", "fallthrough", "break", "continue",
        "defer", "go", "map",
    };
    return kSet;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string filepath)
        : t_(std::move(tokens)), filepath_(std::move(filepath)) {}

    SyntaxTree run() {
        int last_line = t_.empty() ? 1 : t_.back().line;
        root_ = make_module(last_line);
        stack_.push_back({root_.get(), true, false, ""});
        while (i_ < t_.size()) step();
        while (stack_.size() > 1) pop_scope(last_line);
        return std::move(root_);
    }

private:
    struct Scope {
        SyntaxNode* node;
        bool brace;
        bool case_arm;
        std::string owner; // composite literal scopes
    };

    std::vector<Token> t_;
    std::string filepath_;
    SyntaxTree root_;
    std::vector<Scope> stack_;
    size_t i_ = 0;
    int prev_line_ = 1;
    bool value_context_ = false; // next '{' opens a composite literal
    std::string pending_assign_;
    std::string pending_prop_;

    SyntaxNode* top() { return stack_.back().node; }
    const Token& tok(size_t k) const { return t_[k]; }
    bool has(size_t k) const { return k < t_.size(); }

    void pop_scope(int end_line) {
        stack_.back().node->end_line = std::max(stack_.back().node->start_line, end_line);
        stack_.pop_back();
    }

    std::string enclosing_def_name() const {
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            const std::string& k = it->node->kind;
            if (k == "function" || k == "method" || k == "closure_property")
                return it->node->name;
        }
        return "";
    }

    void record_call(size_t name_idx) {
        const std::string& name = tok(name_idx).token_text;
        if (call_excluded().count(name)) return;
        bool dotted = name_idx >= 1 && tok(name_idx - 1).is_punct(".");
        SyntaxNode* call = top()->add_child(dotted ? "call_method" : "call_direct");
        call->name = name;
        call->receiver = receiver_chain(t_, name_idx);
        call->start_line = tok(name_idx).line;
        call->end_line = tok(name_idx).line;
    }

    void extract_calls_in_range(size_t begin, size_t end) {
        for (size_t k = begin; k + 1 < end; ++k)
            if (tok(k).type == Token::Type::Ident && tok(k + 1).is_punct("("))
                record_call(k);
    }

    /// Header scan: first '{' at paren/bracket depth zero; returns its index.
    /// Semicolons stay inside the header (init statements, three-clause for).
    size_t find_body_brace(size_t from) const {
        int d = 0;
        for (size_t k = from; k < t_.size(); ++k) {
            if (tok(k).is_punct("(") || tok(k).is_punct("[")) ++d;
            if (tok(k).is_punct(")") || tok(k).is_punct("]")) --d;
            if (d == 0 && tok(k).is_punct("{")) return k;
            if (d == 0 && tok(k).is_punct("}")) break; // ran out of the enclosing block
        }
        return t_.size();
    }

    void skip_type_block(size_t open_brace) {
        int d = 0;
        size_t k = open_brace;
        while (k < t_.size()) {
            if (tok(k).is_punct("{")) ++d;
            if (tok(k).is_punct("}")) {
                --d;
                if (d == 0) { i_ = k + 1; return; }
            }
            ++k;
        }
        i_ = t_.size();
    }

    void open_block(SyntaxNode* node, size_t body_brace) {
        node->start_line = tok(std::min(i_, t_.size() - 1)).line;
        i_ = body_brace + 1;
        stack_.push_back({node, true, false, ""});
        value_context_ = false;
    }

    void handle_func() {
        int line = tok(i_).line;
        size_t k = i_ + 1;
        std::string recv_name;
        bool is_method = false;
        if (has(k) && tok(k).is_punct("(")) {
            // receiver group: func (s *Server) Name(...)
            size_t close = matching_close(t_, k);
            if (has(close + 1) && tok(close + 1).type == Token::Type::Ident &&
                has(close + 2) && tok(close + 2).is_punct("(")) {
                auto recv = params_from_group(t_, k, close);
                if (!recv.empty()) recv_name = recv.front();
                is_method = true;
                k = close + 1;
            }
        }
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
        size_t body = find_body_brace(k);
        if (!has(body)) { // declaration without body
            i_ = k;
            return;
        }
        std::string kind = is_method ? "method" : "function";
        std::string cond;
        if (name.empty()) {
            // function literal in value position
            if (!pending_prop_.empty() && top()->kind == "object") {
                kind = "closure_property";
                std::string owner =
                    stack_.back().owner.empty() ? enclosing_def_name() : stack_.back().owner;
                name = owner.empty() ? pending_prop_ : owner + "." + pending_prop_;
                std::string plist;
                for (size_t p = 0; p < params.size(); ++p) {
                    if (p) plist += ", ";
                    plist += params[p];
                }
                cond = pending_prop_ + ": (" + plist + ")";
            } else {
                name = pending_assign_;
                kind = "function";
            }
        }
        pending_prop_.clear();
        SyntaxNode* def = top()->add_child(kind);
        def->name = name;
        def->params = params;
        def->cond_text = cond;
        def->start_line = line;
        (void)recv_name;
        i_ = body + 1;
        stack_.push_back({def, true, false, ""});
        value_context_ = false;
        prev_line_ = line;
    }

    void step() {
        const Token& cur = tok(i_);

        if (cur.type == Token::Type::Punct) {
            const std::string& s = cur.token_text;
            if (s == "{") {
                if (value_context_) {
                    SyntaxNode* obj = top()->add_child("object");
                    obj->name = pending_assign_.empty() ? pending_prop_ : pending_assign_;
                    obj->start_line = cur.line;
                    std::string owner = obj->name;
                    ++i_;
                    stack_.push_back({obj, true, false, owner});
                    pending_prop_.clear();
                } else {
                    SyntaxNode* blk = top()->add_child("block");
                    blk->start_line = cur.line;
                    ++i_;
                    stack_.push_back({blk, true, false, ""});
                }
                prev_line_ = cur.line;
                return;
            }
            if (s == "}") {
                while (stack_.size() > 1 && !stack_.back().brace) pop_scope(cur.line);
                if (stack_.size() > 1) pop_scope(cur.line);
                ++i_;
                prev_line_ = cur.line;
                value_context_ = false;
                pending_prop_.clear();
                pending_assign_.clear();
                return;
            }
            if (s == "=" || s == ":=" || s == "return" || s == "," || s == "(" || s == "[" ||
                s == ":" || s == "<-")
                value_context_ = true;
            if (s == ";") {
                value_context_ = false;
                pending_assign_.clear();
                pending_prop_.clear();
            }
            prev_line_ = cur.line;
            ++i_;
            return;
        }

        if (cur.type != Token::Type::Ident) {
            prev_line_ = cur.line;
            ++i_;
            return;
        }

        const std::string& s = cur.token_text;

        if (s == "func") {
            handle_func();
            return;
        }
        if (s == "type" && has(i_ + 2) &&
            (tok(i_ + 2).is_ident("struct") || tok(i_ + 2).is_ident("interface"))) {
            size_t brace = find_body_brace(i_ + 2);
            if (has(brace)) {
                skip_type_block(brace);
            } else {
                i_ += 3;
            }
            prev_line_ = cur.line;
            return;
        }
        if (s == "if") {
            size_t body = find_body_brace(i_ + 1);
            extract_calls_in_range(i_ + 1, body);
            SyntaxNode* guard = top()->add_child("if");
            guard->cond_text = lex::join_tokens(t_, i_ + 1, body);
            open_block(guard, body);
            prev_line_ = cur.line;
            return;
        }
        if (s == "else") {
            if (has(i_ + 1) && tok(i_ + 1).is_ident("if")) {
                size_t body = find_body_brace(i_ + 2);
                extract_calls_in_range(i_ + 2, body);
                SyntaxNode* guard = top()->add_child("if");
                guard->cond_text = "else if " + lex::join_tokens(t_, i_ + 2, body);
                open_block(guard, body);
            } else {
                size_t body = find_body_brace(i_ + 1);
                SyntaxNode* guard = top()->add_child("else");
                guard->cond_text = "else";
                open_block(guard, body);
            }
            prev_line_ = cur.line;
            return;
        }
        if (s == "for") {
            size_t body = find_body_brace(i_ + 1);
            extract_calls_in_range(i_ + 1, body);
            SyntaxNode* guard = top()->add_child("loop");
            guard->cond_text =
                body == i_ + 1 ? "for" : "for " + lex::join_tokens(t_, i_ + 1, body);
            open_block(guard, body);
            prev_line_ = cur.line;
            return;
        }
        if (s == "switch" || s == "select") {
            size_t body = find_body_brace(i_ + 1);
            extract_calls_in_range(i_ + 1, body);
            SyntaxNode* sw = top()->add_child("switch");
            sw->cond_text = lex::join_tokens(t_, i_ + 1, body);
            open_block(sw, body);
            prev_line_ = cur.line;
            return;
        }
        if ((s == "case" || s == "default") &&
            (top()->kind == "switch" || top()->kind == "case")) {
            if (top()->kind == "case") pop_scope(cur.line);
            size_t k = i_ + 1;
            int d = 0;
            while (has(k)) {
                if (tok(k).is_punct("(") || tok(k).is_punct("[") || tok(k).is_punct("{")) ++d;
                if (tok(k).is_punct(")") || tok(k).is_punct("]") || tok(k).is_punct("}")) --d;
                if (d == 0 && tok(k).is_punct(":")) break;
                ++k;
            }
            SyntaxNode* arm = top()->add_child("case");
            arm->cond_text =
                s == "default" ? "default" : "case " + lex::join_tokens(t_, i_ + 1, k);
            arm->start_line = cur.line;
            stack_.push_back({arm, false, true, ""});
            i_ = has(k) ? k + 1 : k;
            prev_line_ = cur.line;
            value_context_ = false;
            return;
        }
        if (s == "var" || s == "const") {
            if (has(i_ + 1) && tok(i_ + 1).type == Token::Type::Ident)
                pending_assign_ = tok(i_ + 1).token_text;
            prev_line_ = cur.line;
            ++i_;
            return;
        }

        // composite-literal field: Name: value
        if (top()->kind == "object" && has(i_ + 1) && tok(i_ + 1).is_punct(":")) {
            pending_prop_ = s;
            prev_line_ = cur.line;
            i_ += 2;
            value_context_ = true;
            return;
        }

        // assignment target for composite-literal owners: x := ... / x = ...
        if (has(i_ + 1) && (tok(i_ + 1).is_punct(":=") || tok(i_ + 1).is_punct("="))) {
            pending_assign_ = s;
            prev_line_ = cur.line;
            ++i_;
            return;
        }

        if (has(i_ + 1) && tok(i_ + 1).is_punct("(")) {
            record_call(i_);
            prev_line_ = cur.line;
            ++i_;
            return;
        }

        // identifier in expression position keeps composite-literal context
        prev_line_ = cur.line;
        ++i_;
    }
};

} // namespace go_detail

/// Brace-structured parse of a Go source file into the uniform syntax tree.
/// Struct and interface type blocks contribute nothing; function literals in
/// composite-literal fields become closure_property definitions.
inline SyntaxTree parse_go(const std::string& src, const std::string& filepath) {
    lex::LexOptions opt;
    opt.line_comment_slash = true;
    opt.block_comment = true;
    opt.backtick_string = true;
    opt.single_quote_string = true; // rune literals
    auto tokens = lex::tokenize(src, opt, filepath);
    return go_detail::Parser(std::move(tokens), filepath).run();
}

} // namespace clause_audit::adapters
