#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "clause_audit/lex.hpp"
#include "clause_audit/syntax_tree.hpp"

namespace clause_audit::adapters {

inline const QueryPack& python_pack() {
    static const QueryPack kPack = {
        "python",
        {{"call_direct", "name"}, {"call_method", "name"}, {"call_constructor", "name"}},
        {{"function", "name"}, {"method", "name"}},
        {"if", "else", "loop", "case"},
    };
    return kPack;
}

namespace py_detail {

using lex::Token;

inline const std::unordered_set<std::string>& call_excluded_keywords() {
    static const std::unordered_set<std::string> kKeywords = {
        "if", "elif", "else", "while", "for", "with", "except", "return", "and",
        "or", "not", "in", "is", "lambda", "del", "assert", "raise", "yield",
        "await", "def", "class", "import", "from", "pass", "break", "continue",
        "global", "nonlocal", "try", "finally",
    };
    return kKeywords;
}

inline size_t matching_paren(const std::vector<Token>& t, size_t open) {
    int depth = 0;
    for (size_t i = open; i < t.size(); ++i) {
        if (t[i].is_punct("(") || t[i].is_punct("[") || t[i].is_punct("{")) ++depth;
        if (t[i].is_punct(")") || t[i].is_punct("]") || t[i].is_punct("}")) {
            --depth;
            if (depth == 0) return i;
        }
    }
    return t.size();
}

inline std::vector<std::string> parse_params(const std::vector<Token>& t, size_t open,
                                             size_t close) {
    std::vector<std::string> params;
    int depth = 0;
    bool want_name = true;
    for (size_t i = open + 1; i < close; ++i) {
        if (t[i].is_punct("(") || t[i].is_punct("[") || t[i].is_punct("{")) ++depth;
        if (t[i].is_punct(")") || t[i].is_punct("]") || t[i].is_punct("}")) --depth;
        if (depth == 0 && t[i].is_punct(",")) {
            want_name = true;
            continue;
        }
        if (want_name && t[i].type == Token::Type::Ident) {
            params.push_back(t[i].token_text);
            want_name = false;
        }
    }
    return params;
}

/// First ':' at bracket depth 0, the header/suite separator.
inline size_t suite_colon(const std::vector<Token>& t, size_t from) {
    int depth = 0;
    for (size_t i = from; i < t.size(); ++i) {
        if (t[i].is_punct("(") || t[i].is_punct("[") || t[i].is_punct("{")) ++depth;
        if (t[i].is_punct(")") || t[i].is_punct("]") || t[i].is_punct("}")) --depth;
        if (depth == 0 && t[i].is_punct(":")) return i;
    }
    return t.size();
}

/// Scans a token range for call expressions and appends call nodes to
/// `parent`. Receiver chains follow dotted identifiers only; a chain broken
/// by a call or subscript result keeps the method-call kind with the partial
/// receiver text.
inline void extract_calls_into(SyntaxNode* parent, const std::vector<Token>& t, size_t begin,
                               size_t end, int start_line, int end_line) {
    for (size_t i = begin; i + 1 < end; ++i) {
        if (t[i].type != Token::Type::Ident || !t[i + 1].is_punct("(")) continue;
        if (call_excluded_keywords().count(t[i].token_text)) continue;
        if (i > begin && (t[i - 1].is_ident("def") || t[i - 1].is_ident("class"))) continue;

        std::vector<std::string> recv_parts;
        bool dotted = i >= 1 && t[i - 1].is_punct(".");
        size_t j = i;
        while (j >= 2 && t[j - 1].is_punct(".") && t[j - 2].type == Token::Type::Ident) {
            recv_parts.insert(recv_parts.begin(), t[j - 2].token_text);
            j -= 2;
        }
        SyntaxNode* call = parent->add_child(
            std::isupper(static_cast<unsigned char>(t[i].token_text[0]))
                ? "call_constructor"
                : (dotted ? "call_method" : "call_direct"));
        call->name = t[i].token_text;
        call->receiver = text::join(recv_parts, ".");
        call->start_line = start_line;
        call->end_line = end_line;
    }
}

} // namespace py_detail

/// Indentation-structured parse of a Python source file into the uniform
/// syntax tree. Guard headers ("if cond:") attribute calls written in the
/// condition itself to the surrounding block, since those run unconditionally.
inline SyntaxTree parse_python(const std::string& src, const std::string& filepath) {
    using lex::Token;
    auto logical = lex::python_logical_lines(src, filepath);

    int last_line = 1;
    for (const auto& l : logical) last_line = std::max(last_line, l.end_line);
    SyntaxTree root = make_module(last_line);

    struct Open {
        SyntaxNode* node;
        int header_indent;
    };
    std::vector<Open> stack{{root.get(), -1}};

    lex::LexOptions opt;
    opt.hash_comment = true;

    auto close_to_indent = [&](int indent, int prev_end_line) {
        while (stack.size() > 1 && stack.back().header_indent >= indent) {
            stack.back().node->end_line = prev_end_line;
            stack.pop_back();
        }
    };

    int prev_end = 1;
    for (const auto& line : logical) {
        close_to_indent(line.indent, prev_end);
        prev_end = line.end_line;
        SyntaxNode* top = stack.back().node;
        auto t = lex::tokenize(line.line_text, opt, filepath);
        if (t.empty()) continue;

        size_t k = 0;
        if (t[k].is_ident("async")) ++k;

        auto push_block = [&](SyntaxNode* node, size_t colon) {
            node->start_line = line.start_line;
            node->end_line = line.end_line;
            stack.push_back({node, line.indent});
            // single-line suite: "if x: foo()"
            if (colon + 1 < t.size()) {
                py_detail::extract_calls_into(node, t, colon + 1, t.size(), line.start_line,
                                              line.end_line);
                stack.back().node->end_line = line.end_line;
                stack.pop_back();
            }
        };

        if (k < t.size() && t[k].is_ident("def") && k + 1 < t.size() &&
            t[k + 1].type == Token::Type::Ident) {
            bool in_class = false;
            for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                if (it->node->kind == "class") { in_class = true; break; }
                if (it->node->kind == "function" || it->node->kind == "method") break;
            }
            SyntaxNode* def = top->add_child(in_class ? "method" : "function");
            def->name = t[k + 1].token_text;
            size_t open = k + 2;
            if (open < t.size() && t[open].is_punct("(")) {
                size_t close = py_detail::matching_paren(t, open);
                def->params = py_detail::parse_params(t, open, close);
            }
            push_block(def, py_detail::suite_colon(t, k));
            continue;
        }
        if (k < t.size() && t[k].is_ident("class") && k + 1 < t.size()) {
            SyntaxNode* cls = top->add_child("class");
            cls->name = t[k + 1].token_text;
            push_block(cls, py_detail::suite_colon(t, k));
            continue;
        }
        if (t[k].is_ident("if") || t[k].is_ident("elif")) {
            size_t colon = py_detail::suite_colon(t, k);
            // condition-position calls run unconditionally: attach to parent
            py_detail::extract_calls_into(top, t, k + 1, colon, line.start_line, line.end_line);
            SyntaxNode* guard = top->add_child("if");
            guard->cond_text = lex::join_tokens(t, k + 1, colon);
            push_block(guard, colon);
            continue;
        }
        if (t[k].is_ident("else")) {
            SyntaxNode* guard = top->add_child("else");
            guard->cond_text = "else";
            push_block(guard, py_detail::suite_colon(t, k));
            continue;
        }
        if (t[k].is_ident("for") || t[k].is_ident("while")) {
            size_t colon = py_detail::suite_colon(t, k);
            py_detail::extract_calls_into(top, t, k + 1, colon, line.start_line, line.end_line);
            SyntaxNode* guard = top->add_child("loop");
            guard->cond_text = lex::join_tokens(t, k, colon);
            push_block(guard, colon);
            continue;
        }
        if (t[k].is_ident("match") && py_detail::suite_colon(t, k) == t.size() - 1) {
            SyntaxNode* sw = top->add_child("switch");
            sw->cond_text = lex::join_tokens(t, k + 1, t.size() - 1);
            push_block(sw, t.size() - 1);
            continue;
        }
        if (t[k].is_ident("case") && top->kind == "switch") {
            size_t colon = py_detail::suite_colon(t, k);
            SyntaxNode* arm = top->add_child("case");
            arm->cond_text = lex::join_tokens(t, k, colon);
            // match patterns are not invocations: no call extraction here
            arm->start_line = line.start_line;
            arm->end_line = line.end_line;
            stack.push_back({arm, line.indent});
            if (colon + 1 < t.size()) {
                py_detail::extract_calls_into(arm, t, colon + 1, t.size(), line.start_line,
                                              line.end_line);
                stack.pop_back();
            }
            continue;
        }
        if (t[k].is_ident("try") || t[k].is_ident("except") || t[k].is_ident("finally") ||
            t[k].is_ident("with")) {
            size_t colon = py_detail::suite_colon(t, k);
            if (t[k].is_ident("with"))
                py_detail::extract_calls_into(top, t, k + 1, colon, line.start_line,
                                              line.end_line);
            SyntaxNode* block = top->add_child("block");
            push_block(block, colon);
            continue;
        }

        // plain statement (including decorators)
        py_detail::extract_calls_into(top, t, 0, t.size(), line.start_line, line.end_line);
    }
    close_to_indent(0, prev_end);
    root->end_line = std::max(root->end_line, prev_end);
    return root;
}

} // namespace clause_audit::adapters
