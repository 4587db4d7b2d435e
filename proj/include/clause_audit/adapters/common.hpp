#pragma once

#include <string>
#include <vector>

#include "clause_audit/lex.hpp"
#include "clause_audit/syntax_tree.hpp"

namespace clause_audit::adapters::common {

using lex::Token;

inline size_t matching_close(const std::vector<Token>& t, size_t open) {
    int depth = 0;
    for (size_t i = open; i < t.size(); ++i) {
        const std::string& s = t[i].token_text;
        if (t[i].type == Token::Type::Punct) {
            if (s == "(" || s == "[" || s == "{") ++depth;
            if (s == ")" || s == "]" || s == "}") {
                --depth;
                if (depth == 0) return i;
            }
        }
    }
    return t.size();
}

/// Parameter names from a parenthesized group: the first identifier of each
/// top-level comma segment, rest/spread markers skipped.
inline std::vector<std::string> params_from_group(const std::vector<Token>& t, size_t open,
                                                  size_t close) {
    std::vector<std::string> params;
    int depth = 0;
    bool want_name = true;
    for (size_t i = open + 1; i < close && i < t.size(); ++i) {
        const std::string& s = t[i].token_text;
        if (t[i].type == Token::Type::Punct) {
            if (s == "(" || s == "[" || s == "{" || s == "<") ++depth;
            if (s == ")" || s == "]" || s == "}" || s == ">") --depth;
            if (depth == 0 && s == ",") want_name = true;
            continue;
        }
        if (want_name && t[i].type == Token::Type::Ident) {
            params.push_back(t[i].token_text);
            want_name = false;
        }
    }
    return params;
}

/// Dotted receiver chain ending just before position `i` (the callee name).
/// Chains are identifier/dot sequences only; a chain broken by a call or
/// index result yields the longest trailing identifier run.
inline std::string receiver_chain(const std::vector<Token>& t, size_t i) {
    std::vector<std::string> parts;
    size_t j = i;
    while (j >= 2 && (t[j - 1].is_punct(".") || t[j - 1].is_punct("?.")) &&
           t[j - 2].type == Token::Type::Ident) {
        parts.insert(parts.begin(), t[j - 2].token_text);
        j -= 2;
    }
    std::string out;
    for (size_t k = 0; k < parts.size(); ++k) {
        if (k) out += '.';
        out += parts[k];
    }
    return out;
}

} // namespace clause_audit::adapters::common
