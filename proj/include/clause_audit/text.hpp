#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace clause_audit::text {

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool is_all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

/// Splits an identifier on underscore, digit, and camel-case boundaries and
/// lowercases the fragments: "sendToolListChanged" and "send_tool_list_changed"
/// both yield {"send","tool","list","changed"}. Runs of capitals stay together
/// except for a trailing capital that starts a new word ("HTTPServer" ->
/// {"http","server"}). Pure-digit fragments are dropped.
inline std::vector<std::string> split_identifier(std::string_view ident) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !is_all_digits(cur)) parts.push_back(to_lower(cur));
        cur.clear();
    };
    for (size_t i = 0; i < ident.size(); ++i) {
        char c = ident[i];
        if (c == '_' || c == '$' || !is_word_char(c)) {
            flush();
            continue;
        }
        bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
        bool digit = std::isdigit(static_cast<unsigned char>(c)) != 0;
        if (!cur.empty()) {
            char prev = cur.back();
            bool prev_upper = std::isupper(static_cast<unsigned char>(prev)) != 0;
            bool prev_digit = std::isdigit(static_cast<unsigned char>(prev)) != 0;
            bool next_lower = i + 1 < ident.size() &&
                              std::islower(static_cast<unsigned char>(ident[i + 1])) != 0;
            if ((upper && !prev_upper) ||            // fooBar -> foo|Bar
                (upper && prev_upper && next_lower) || // HTTPServer -> HTTP|Server
                (digit != prev_digit)) {             // utf8Name -> utf|8|Name
                flush();
            }
        }
        cur.push_back(c);
    }
    flush();
    return parts;
}

/// Canonical fold used whenever two tokens are compared for identity:
/// lowercase plus light plural/participle stripping, applied identically to
/// both sides ("tools"/"tool", "updated"/"updates"/"update" share a fold).
inline std::string fold_token(std::string_view token) {
    std::string t = to_lower(token);
    auto ends_with = [&](std::string_view suf) {
        return t.size() >= suf.size() &&
               t.compare(t.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (t.size() > 4 && ends_with("ies")) {
        t.replace(t.size() - 3, 3, "y");
    } else if (t.size() > 3 && ends_with("s") && !ends_with("ss")) {
        t.pop_back();
    }
    if (t.size() > 3 && ends_with("ed")) {
        t.pop_back(); // "updated" -> "update", "changed" -> "change"
    } else if (t.size() > 5 && ends_with("ing")) {
        t.erase(t.size() - 3);
    }
    return t;
}

inline bool tokens_fold_equal(std::string_view a, std::string_view b) {
    return fold_token(a) == fold_token(b);
}

/// Word tokens of free text, with identifier-style words further split on
/// camel/underscore boundaries. Lowercased; pure numbers dropped.
inline std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < text.size() && is_word_char(text[j])) ++j;
        for (auto& piece : split_identifier(text.substr(i, j - i)))
            out.push_back(std::move(piece));
        i = j;
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

/// Stop words ignored when deriving search keywords from clause prose.
inline const std::unordered_set<std::string>& stop_words() {
    static const std::unordered_set<std::string> kStop = {
        "the", "a", "an", "of", "to", "with", "for", "and", "or", "is", "are",
        "be", "been", "by", "that", "this", "these", "those", "when", "if",
        "where", "unless", "in", "on", "at", "as", "it", "its", "was", "were",
        "will", "can", "has", "have", "had", "do", "does", "did", "not", "no",
        "any", "all", "such", "than", "then", "there", "their", "they", "them",
        "using", "use", "used", "via", "from", "into", "out", "up", "down",
        "must", "shall", "should", "may", "recommended", "optional", "required",
    };
    return kStop;
}

} // namespace clause_audit::text
