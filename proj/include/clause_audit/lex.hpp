#pragma once

#include <string>
#include <vector>

#include "clause_audit/errors.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit::lex {

struct Token {
    enum class Type { Ident, Number, Str, Punct };
    Type type = Type::Punct;
    std::string token_text;
    int line = 1;

    bool is_ident(std::string_view s = {}) const {
        return type == Type::Ident && (s.empty() || token_text == s);
    }
    bool is_punct(std::string_view s) const { return type == Type::Punct && token_text == s; }
};

struct LexOptions {
    bool line_comment_slash = false;  // //
    bool block_comment = false;       // /* */
    bool hash_comment = false;        // #
    bool backtick_string = false;     // `...` (template / raw)
    bool single_quote_string = true;
};

/// Comment- and string-aware tokenizer for brace-structured languages.
/// Strings become single Str tokens; comments are dropped. Multi-char
/// operators that matter for structure ("=>", ":=", "?.") stay fused.
inline std::vector<Token> tokenize(const std::string& src, const LexOptions& opt,
                                   const std::string& filepath) {
    static const char* kMultiOps[] = {"===", "!==", "=>", ":=", "==", "!=", "<=",
                                      ">=", "&&", "||", "<-", "...", "?."};
    std::vector<Token> out;
    int line = 1;
    size_t i = 0;
    const size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (opt.hash_comment && c == '#') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (opt.line_comment_slash && c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (opt.block_comment && c == '/' && i + 1 < n && src[i + 1] == '*') {
            int start_line = line;
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
                if (src[i] == '\n') ++line;
                ++i;
            }
            if (i + 1 >= n) throw ParseFailureError(filepath, start_line, "unterminated block comment");
            i += 2;
            continue;
        }
        if (c == '"' || (opt.single_quote_string && c == '\'') ||
            (opt.backtick_string && c == '`')) {
            char quote = c;
            int start_line = line;
            size_t j = i + 1;
            while (j < n) {
                if (src[j] == '\\' && quote != '`') {
                    j += 2;
                    continue;
                }
                if (src[j] == '\n') ++line;
                if (src[j] == quote) break;
                ++j;
            }
            if (j >= n) throw ParseFailureError(filepath, start_line, "unterminated string literal");
            out.push_back({Token::Type::Str, src.substr(i, j - i + 1), start_line});
            i = j + 1;
            continue;
        }
        if (text::is_word_char(c) && !std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < n && text::is_word_char(src[j])) ++j;
            out.push_back({Token::Type::Ident, src.substr(i, j - i), line});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < n && (text::is_word_char(src[j]) || src[j] == '.')) ++j;
            out.push_back({Token::Type::Number, src.substr(i, j - i), line});
            i = j;
            continue;
        }
        bool fused = false;
        for (const char* op : kMultiOps) {
            size_t len = std::char_traits<char>::length(op);
            if (i + len <= n && src.compare(i, len, op) == 0) {
                out.push_back({Token::Type::Punct, op, line});
                i += len;
                fused = true;
                break;
            }
        }
        if (fused) continue;
        out.push_back({Token::Type::Punct, std::string(1, c), line});
        ++i;
    }
    return out;
}

/// Joins tokens back into readable expression text ("a.b(x, y)" style).
inline std::string join_tokens(const std::vector<Token>& tokens, size_t begin, size_t end) {
    std::string out;
    for (size_t i = begin; i < end && i < tokens.size(); ++i) {
        const std::string& t = tokens[i].token_text;
        if (!out.empty()) {
            bool tight_left = t == "." || t == "," || t == ")" || t == "]" || t == "(" ||
                              t == "[" || t == ":" || t == ";" || t == "?.";
            char prev = out.back();
            bool tight_right = prev == '.' || prev == '(' || prev == '[' || prev == '!';
            if (!tight_left && !tight_right) out += ' ';
        }
        out += t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Python physical-to-logical line pass
// ---------------------------------------------------------------------------

struct LogicalLine {
    int indent = 0;
    std::string line_text; // comments stripped, continuations joined
    int start_line = 1;
    int end_line = 1;
};

/// Folds bracket continuations, backslash continuations, and triple-quoted
/// strings into single logical lines; strips comments; records the physical
/// span. Tabs in indentation are rejected to keep block depth unambiguous.
inline std::vector<LogicalLine> python_logical_lines(const std::string& src,
                                                     const std::string& filepath) {
    std::vector<LogicalLine> out;
    size_t i = 0;
    const size_t n = src.size();
    int line = 1;

    while (i < n) {
        // measure indentation
        size_t bol = i;
        int indent = 0;
        while (i < n && (src[i] == ' ' || src[i] == '\t')) {
            if (src[i] == '\t') throw ParseFailureError(filepath, line, "tab in indentation");
            ++indent;
            ++i;
        }
        if (i >= n) break;
        if (src[i] == '\n') { // blank line
            ++line;
            ++i;
            continue;
        }
        if (src[i] == '#') { // comment-only line
            while (i < n && src[i] != '\n') ++i;
            continue;
        }

        LogicalLine logical;
        logical.indent = indent;
        logical.start_line = line;
        int depth = 0;
        std::string buf;
        bool done = false;
        while (i < n && !done) {
            char c = src[i];
            if (c == '#' ) {
                while (i < n && src[i] != '\n') ++i;
                continue;
            }
            if (c == '"' || c == '\'') {
                char q = c;
                bool triple = i + 2 < n && src[i + 1] == q && src[i + 2] == q;
                int start_line = line;
                size_t j = i + (triple ? 3 : 1);
                bool closed = false;
                while (j < n) {
                    if (src[j] == '\\') { j += 2; continue; }
                    if (src[j] == '\n') {
                        if (!triple) break; // unterminated single-line string
                        ++line;
                    }
                    if (triple ? (j + 2 < n && src[j] == q && src[j + 1] == q && src[j + 2] == q)
                               : src[j] == q) {
                        closed = true;
                        break;
                    }
                    ++j;
                }
                if (!closed) throw ParseFailureError(filepath, start_line, "unterminated string literal");
                size_t close = j + (triple ? 3 : 1);
                buf += src.substr(i, close - i);
                i = close;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (c == '\\' && i + 1 < n && src[i + 1] == '\n') {
                buf += ' ';
                ++line;
                i += 2;
                continue;
            }
            if (c == '\n') {
                ++line;
                ++i;
                if (depth > 0) {
                    buf += ' ';
                    // skip leading whitespace of the continuation line
                    while (i < n && (src[i] == ' ' || src[i] == '\t')) ++i;
                    continue;
                }
                done = true;
                continue;
            }
            buf += c;
            ++i;
        }
        if (depth > 0)
            throw ParseFailureError(filepath, logical.start_line, "unbalanced brackets");
        logical.end_line = done ? line - 1 : line;
        logical.line_text = text::trim(buf);
        if (!logical.line_text.empty()) out.push_back(std::move(logical));
        (void)bol;
    }
    return out;
}

} // namespace clause_audit::lex
