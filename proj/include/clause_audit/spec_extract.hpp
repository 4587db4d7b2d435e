#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clause_audit/clause.hpp"
#include "clause_audit/errors.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

// ---------------------------------------------------------------------------
// Protocol message lexicon
// ---------------------------------------------------------------------------

struct MessageLexiconEntry {
    std::string name;              // schema message name
    std::vector<std::string> cues; // every cue must fold-match a sentence word
    Actor default_sender = Actor::UNSPECIFIED;
    bool visibility_notification = false; // omitting it hides state changes
};

/// Message names from the protocol schema plus the prose cues under which a
/// clause sentence refers to them. Order matters: first full match wins.
inline const std::vector<MessageLexiconEntry>& message_lexicon() {
    static const std::vector<MessageLexiconEntry> kLexicon = {
        {"ToolListChangedNotification", {"tool", "list", "changed"}, Actor::SERVER, true},
        {"ResourceListChangedNotification", {"resource", "list", "changed"}, Actor::SERVER, true},
        {"PromptListChangedNotification", {"prompt", "list", "changed"}, Actor::SERVER, true},
        {"RootsListChangedNotification", {"roots", "list", "changed"}, Actor::CLIENT, true},
        {"ResourceUpdatedNotification", {"resource", "updated"}, Actor::SERVER, true},
        {"CancelledNotification", {"cancelled", "notification"}, Actor::UNSPECIFIED, false},
        {"ProgressNotification", {"progress", "notification"}, Actor::UNSPECIFIED, false},
        {"LoggingMessageNotification", {"log", "message", "notification"}, Actor::SERVER, false},
        {"InitializedNotification", {"initialized", "notification"}, Actor::CLIENT, false},
        {"InitializeRequest", {"initialize", "request"}, Actor::CLIENT, false},
        {"CallToolRequest", {"call", "tool", "request"}, Actor::CLIENT, false},
        {"ListToolsRequest", {"list", "tool", "request"}, Actor::CLIENT, false},
        {"ListResourcesRequest", {"list", "resource", "request"}, Actor::CLIENT, false},
        {"ReadResourceRequest", {"read", "resource", "request"}, Actor::CLIENT, false},
        {"SubscribeRequest", {"subscribe", "request"}, Actor::CLIENT, false},
        {"UnsubscribeRequest", {"unsubscribe", "request"}, Actor::CLIENT, false},
        {"ListPromptsRequest", {"list", "prompt", "request"}, Actor::CLIENT, false},
        {"GetPromptRequest", {"get", "prompt", "request"}, Actor::CLIENT, false},
        {"ListRootsRequest", {"list", "roots", "request"}, Actor::SERVER, false},
        {"CreateMessageRequest", {"create", "message", "request"}, Actor::SERVER, false},
        {"ElicitRequest", {"elicit", "request"}, Actor::SERVER, false},
        {"SetLevelRequest", {"set", "level", "request"}, Actor::CLIENT, false},
        {"CompleteRequest", {"completion", "request"}, Actor::CLIENT, false},
        {"PingRequest", {"ping"}, Actor::UNSPECIFIED, false},
    };
    return kLexicon;
}

inline const MessageLexiconEntry* lexicon_entry(const std::string& message_name) {
    for (const auto& e : message_lexicon())
        if (e.name == message_name) return &e;
    return nullptr;
}

/// Resolves the protocol message a sentence refers to: an exact schema name
/// anywhere in the sentence wins; otherwise the first lexicon entry whose
/// cues all fold-match sentence words.
inline const MessageLexiconEntry* match_message(const std::string& sentence) {
    for (const auto& e : message_lexicon())
        if (sentence.find(e.name) != std::string::npos) return &e;

    std::vector<std::string> folded;
    for (const auto& w : text::word_tokens(sentence)) folded.push_back(text::fold_token(w));
    auto has = [&](const std::string& cue) {
        std::string f = text::fold_token(cue);
        for (const auto& w : folded)
            if (w == f) return true;
        return false;
    };
    for (const auto& e : message_lexicon()) {
        bool all = true;
        for (const auto& cue : e.cues)
            if (!has(cue)) { all = false; break; }
        if (all) return &e;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Clause extraction
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_upper_word_at(std::string_view s, size_t pos, std::string_view word) {
    if (pos + word.size() > s.size()) return false;
    if (s.compare(pos, word.size(), word) != 0) return false;
    if (pos > 0 && text::is_word_char(s[pos - 1])) return false;
    size_t end = pos + word.size();
    if (end < s.size() && text::is_word_char(s[end])) return false;
    return true;
}

struct KeywordHit {
    size_t pos;
    RfcKeyword keyword;
};

/// Case-sensitive whole-word scan; "MUST NOT" consumes the whole phrase so it
/// is never double-counted as a bare MUST.
inline std::vector<KeywordHit> find_keywords(std::string_view sentence) {
    struct Probe { std::string_view phrase; RfcKeyword keyword; };
    static const Probe kProbes[] = {
        {"MUST NOT", RfcKeyword::MUST_NOT},
        {"MUST", RfcKeyword::MUST},
        {"SHALL NOT", RfcKeyword::SHALL_NOT},
        {"SHALL", RfcKeyword::SHALL},
        {"SHOULD NOT", RfcKeyword::SHOULD_NOT},
        {"SHOULD", RfcKeyword::SHOULD},
        {"RECOMMENDED", RfcKeyword::RECOMMENDED},
        {"OPTIONAL", RfcKeyword::OPTIONAL},
        {"MAY", RfcKeyword::MAY},
    };
    std::vector<KeywordHit> hits;
    for (size_t i = 0; i < sentence.size();) {
        bool matched = false;
        for (const auto& p : kProbes) {
            if (is_upper_word_at(sentence, i, p.phrase)) {
                hits.push_back({i, p.keyword});
                i += p.phrase.size();
                matched = true;
                break;
            }
        }
        if (!matched) ++i;
    }
    return hits;
}

inline std::string leading_scope_condition(const std::string& sentence) {
    static const char* kConnectives[] = {"When", "If", "Where", "For", "Unless", "In case"};
    for (const char* conn : kConnectives) {
        std::string_view c = conn;
        if (text::starts_with(sentence, c) &&
            (sentence.size() == c.size() || !text::is_word_char(sentence[c.size()]))) {
            size_t comma = sentence.find(',');
            if (comma == std::string::npos) return {};
            return text::trim(std::string_view(sentence).substr(0, comma));
        }
    }
    return {};
}

inline Actor detect_actor(const std::string& sentence) {
    bool client = false, server = false;
    for (const auto& w : text::word_tokens(sentence)) {
        if (w == "client" || w == "clients") client = true;
        if (w == "server" || w == "servers") server = true;
    }
    if (client && server) return Actor::BOTH;
    if (client) return Actor::CLIENT;
    if (server) return Actor::SERVER;
    return Actor::UNSPECIFIED;
}

inline std::string slugify(const std::string& heading) {
    std::string slug;
    bool pending_dash = false;
    for (char ch : heading) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            if (pending_dash && !slug.empty()) slug += '-';
            pending_dash = false;
            slug += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else {
            pending_dash = true;
        }
    }
    return slug.empty() ? "section" : slug;
}

/// Deterministic sentence splitter. A sentence ends at '.', '!' or '?' when
/// the terminator is not inside a decimal number, is not part of a
/// single-letter abbreviation ("e.g."), and is followed by whitespace and an
/// uppercase letter, a digit, or end of text.
inline std::vector<std::string> split_sentences(const std::string& paragraph) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i < paragraph.size(); ++i) {
        char c = paragraph[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool prev_digit = i > 0 && std::isdigit(static_cast<unsigned char>(paragraph[i - 1])) != 0;
        bool next_digit = i + 1 < paragraph.size() &&
                          std::isdigit(static_cast<unsigned char>(paragraph[i + 1])) != 0;
        if (c == '.' && prev_digit && next_digit) continue; // "2.0"
        if (c == '.' && i >= 1) {
            // single-letter word right before the dot: abbreviation, keep going
            bool single = std::isalpha(static_cast<unsigned char>(paragraph[i - 1])) &&
                          (i < 2 || !text::is_word_char(paragraph[i - 2]));
            if (single) continue;
        }
        size_t j = i + 1;
        while (j < paragraph.size() && (paragraph[j] == ' ' || paragraph[j] == '\t' ||
                                        paragraph[j] == '\n' || paragraph[j] == '\r'))
            ++j;
        bool boundary = j >= paragraph.size() ||
                        (j > i + 1 && (std::isupper(static_cast<unsigned char>(paragraph[j])) ||
                                       std::isdigit(static_cast<unsigned char>(paragraph[j]))));
        if (!boundary) continue;
        std::string sentence = text::trim(std::string_view(paragraph).substr(start, i + 1 - start));
        if (!sentence.empty()) out.push_back(std::move(sentence));
        start = j;
        i = j == 0 ? 0 : j - 1;
    }
    std::string tail = text::trim(std::string_view(paragraph).substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

struct SectionedParagraph {
    std::string section;
    std::string paragraph;
};

/// Markdown pass: headings delimit sections, fenced code blocks are skipped,
/// blank lines delimit paragraphs. List markers are stripped so an item reads
/// as ordinary prose.
inline std::vector<SectionedParagraph> markdown_paragraphs(const std::string& doc) {
    std::vector<SectionedParagraph> out;
    std::map<std::string, int> slug_uses;
    std::string section = "preamble";
    std::string para;
    bool in_fence = false;
    auto flush = [&] {
        std::string trimmed = text::trim(para);
        if (!trimmed.empty()) out.push_back({section, trimmed});
        para.clear();
    };
    size_t pos = 0;
    while (pos <= doc.size()) {
        size_t nl = doc.find('\n', pos);
        std::string line = doc.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = text::trim(line);
        if (text::starts_with(stripped, "```")) {
            in_fence = !in_fence;
            flush();
        } else if (in_fence) {
            // skip
        } else if (!stripped.empty() && stripped[0] == '#') {
            flush();
            size_t h = stripped.find_first_not_of('#');
            std::string title = h == std::string::npos ? "" : text::trim(std::string_view(stripped).substr(h));
            std::string slug = slugify(title);
            int n = ++slug_uses[slug];
            section = n == 1 ? slug : slug + "-" + std::to_string(n);
        } else if (stripped.empty()) {
            flush();
        } else {
            // strip list markers
            std::string_view body = stripped;
            if (text::starts_with(body, "- ") || text::starts_with(body, "* ")) {
                body.remove_prefix(2);
            } else {
                size_t d = 0;
                while (d < body.size() && std::isdigit(static_cast<unsigned char>(body[d]))) ++d;
                if (d > 0 && d + 1 < body.size() && body[d] == '.' && body[d + 1] == ' ')
                    body.remove_prefix(d + 2);
            }
            if (!para.empty()) para += ' ';
            para += text::trim(body);
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    flush();
    return out;
}

inline std::vector<SectionedParagraph> plain_paragraphs(const std::string& doc) {
    std::vector<SectionedParagraph> out;
    std::string para;
    int ordinal = 0;
    auto flush = [&] {
        std::string trimmed = text::trim(para);
        if (!trimmed.empty()) out.push_back({"p" + std::to_string(++ordinal), trimmed});
        para.clear();
    };
    size_t pos = 0;
    while (pos <= doc.size()) {
        size_t nl = doc.find('\n', pos);
        std::string line = doc.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) {
            flush();
        } else {
            if (!para.empty()) para += ' ';
            para += text::trim(line);
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    flush();
    return out;
}

} // namespace detail

enum class SpecFormat { Markdown, Plain };

inline SpecFormat spec_format_from_string(const std::string& s) {
    if (s == "markdown" || s == "md") return SpecFormat::Markdown;
    if (s == "plain" || s == "txt") return SpecFormat::Plain;
    throw UnsupportedFormatError("unsupported specification format: " + s);
}

/// Extracts every RFC-keyword clause from a specification document. One
/// clause is produced per keyword occurrence; a sentence carrying two
/// keywords therefore yields two clauses sharing the same text. Ids are
/// "<section>-c<ordinal>" with the ordinal counted per section in document
/// order, which makes extraction deterministic for identical input bytes.
inline ClauseCatalog parse_spec_document(const std::string& doc, SpecFormat format,
                                         const std::string& spec_version = {}) {
    if (text::trim(doc).empty()) throw EmptyDocumentError();

    auto paragraphs = format == SpecFormat::Markdown ? detail::markdown_paragraphs(doc)
                                                     : detail::plain_paragraphs(doc);
    ClauseCatalog catalog;
    catalog.spec_version = spec_version;
    std::map<std::string, int> ordinal_by_section;

    for (const auto& sp : paragraphs) {
        for (const auto& sentence : detail::split_sentences(sp.paragraph)) {
            auto hits = detail::find_keywords(sentence);
            if (hits.empty()) continue;
            std::string scope = detail::leading_scope_condition(sentence);
            Actor actor = detail::detect_actor(sentence);
            const MessageLexiconEntry* msg = match_message(sentence);
            for (const auto& hit : hits) {
                Clause c;
                c.text = sentence;
                c.rfc_keyword = hit.keyword;
                c.scope_condition = scope;
                c.actor = actor;
                c.message_kind = msg ? msg->name : "";
                c.section_ref = sp.section;
                c.requirement_class =
                    !is_must_family(c.rfc_keyword)
                        ? RequirementClass::OPTIONAL_NON_MUST
                        : (scope.empty() ? RequirementClass::MANDATORY
                                         : RequirementClass::OPTIONAL_CONDITIONAL_MUST);
                int n = ++ordinal_by_section[sp.section];
                c.id = sp.section + "-c" + std::to_string(n);
                catalog.clauses.push_back(std::move(c));
            }
        }
    }
    return catalog;
}

} // namespace clause_audit
