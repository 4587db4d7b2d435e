#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clause_audit/adapters/go_adapter.hpp"
#include "clause_audit/adapters/python_adapter.hpp"
#include "clause_audit/adapters/typescript_adapter.hpp"
#include "clause_audit/errors.hpp"
#include "clause_audit/fingerprint.hpp"
#include "clause_audit/ir.hpp"
#include "clause_audit/jsonl.hpp"
#include "clause_audit/syntax_tree.hpp"

namespace clause_audit {

struct LanguageAdapter {
    std::string tag;
    std::vector<std::string> extensions;
    SyntaxTree (*parse)(const std::string& src, const std::string& filepath);
    const QueryPack& (*pack)();
};

/// Shipped adapters, alphabetical by tag (the detection tie-break order).
/// Adding a language means adding one entry: a grammar binding plus a pack.
inline const std::vector<LanguageAdapter>& language_adapters() {
    static const std::vector<LanguageAdapter> kAdapters = {
        {"go", {".go"}, &adapters::parse_go, &adapters::go_pack},
        {"python", {".py"}, &adapters::parse_python, &adapters::python_pack},
        {"typescript", {".ts", ".tsx", ".js", ".jsx"}, &adapters::parse_typescript,
         &adapters::typescript_pack},
    };
    return kAdapters;
}

inline const LanguageAdapter* find_adapter(const std::string& tag) {
    for (const auto& a : language_adapters())
        if (a.tag == tag) return &a;
    return nullptr;
}

inline const std::vector<std::string>& default_skip_globs() {
    static const std::vector<std::string> kGlobs = {"vendor", "node_modules", "dist", ".git"};
    return kGlobs;
}

namespace detail {

/// Minimal glob: '*' matches any run of characters; everything else literal.
inline bool glob_match(std::string_view pattern, std::string_view s) {
    if (pattern.empty()) return s.empty();
    if (pattern[0] == '*')
        return glob_match(pattern.substr(1), s) ||
               (!s.empty() && glob_match(pattern, s.substr(1)));
    return !s.empty() && pattern[0] == s[0] && glob_match(pattern.substr(1), s.substr(1));
}

inline bool path_skipped(const std::string& rel_path, const std::vector<std::string>& globs) {
    std::vector<std::string> components;
    size_t pos = 0;
    while (pos <= rel_path.size()) {
        size_t slash = rel_path.find('/', pos);
        components.push_back(rel_path.substr(pos, slash == std::string::npos ? std::string::npos
                                                                             : slash - pos));
        if (slash == std::string::npos) break;
        pos = slash + 1;
    }
    for (auto glob : globs) {
        if (!glob.empty() && glob.back() == '/') glob.pop_back();
        for (const auto& comp : components)
            if (glob_match(glob, comp)) return true;
    }
    return false;
}

inline std::string relative_slash_path(const std::filesystem::path& file,
                                       const std::filesystem::path& root) {
    return std::filesystem::relative(file, root).generic_string();
}

} // namespace detail

/// Repo files of interest, repo-relative with '/' separators, sorted.
inline std::vector<std::string> list_repo_files(const std::filesystem::path& repo,
                                                const std::vector<std::string>& skip_globs) {
    std::vector<std::string> files;
    for (auto it = std::filesystem::recursive_directory_iterator(repo);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        std::string rel = detail::relative_slash_path(it->path(), repo);
        if (detail::path_skipped(rel, skip_globs)) continue;
        files.push_back(std::move(rel));
    }
    std::sort(files.begin(), files.end());
    return files;
}

/// Adapter matching the dominant source-file extension set; alphabetical tag
/// order breaks ties. Non-source files are ignored.
inline std::string detect_language(const std::filesystem::path& repo,
                                   const std::vector<std::string>& skip_globs =
                                       default_skip_globs()) {
    if (!std::filesystem::exists(repo))
        throw NoSupportedLanguageError("repository does not exist: " + repo.string());
    std::map<std::string, int> counts;
    for (const auto& rel : list_repo_files(repo, skip_globs)) {
        std::string ext = std::filesystem::path(rel).extension().string();
        for (const auto& adapter : language_adapters())
            for (const auto& known : adapter.extensions)
                if (ext == known) ++counts[adapter.tag];
    }
    std::string best;
    int best_count = 0;
    for (const auto& [tag, count] : counts) { // std::map: alphabetical order
        if (count > best_count) {
            best = tag;
            best_count = count;
        }
    }
    if (best.empty())
        throw NoSupportedLanguageError("no adapter matches any file under " + repo.string());
    return best;
}

struct ParseFailure {
    std::string filepath;
    int line = 0;
    std::string error;
};

struct GeneratedIr {
    IRBundle bundle;
    std::vector<ParseFailure> failures;
    int files_parsed = 0;

    bool partial() const { return !failures.empty(); }
};

/// Computes the content fingerprint of every candidate source file for the
/// language, independent of parse success, so staleness checks reproduce it.
inline std::string repo_fingerprint(const std::filesystem::path& repo,
                                    const LanguageAdapter& adapter,
                                    const std::vector<std::string>& skip_globs) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& rel : list_repo_files(repo, skip_globs)) {
        std::string ext = std::filesystem::path(rel).extension().string();
        if (std::find(adapter.extensions.begin(), adapter.extensions.end(), ext) ==
            adapter.extensions.end())
            continue;
        files.emplace_back(rel, jsonl::read_file(repo / rel));
    }
    return fingerprint_files(files);
}

/// Parses every source file of the detected (or forced) language and
/// aggregates records in canonical order. Files that fail to parse are
/// reported, not fatal.
inline GeneratedIr generate_ir(const std::filesystem::path& repo,
                               const std::string& language_override = {},
                               const std::vector<std::string>& skip_globs =
                                   default_skip_globs()) {
    std::string tag =
        language_override.empty() ? detect_language(repo, skip_globs) : language_override;
    const LanguageAdapter* adapter = find_adapter(tag);
    if (!adapter) throw NoSupportedLanguageError("no adapter for language tag: " + tag);

    GeneratedIr out;
    out.bundle.language = tag;
    const QueryPack& pack = adapter->pack();

    std::vector<std::pair<std::string, std::string>> hashed;
    for (const auto& rel : list_repo_files(repo, skip_globs)) {
        std::string ext = std::filesystem::path(rel).extension().string();
        if (std::find(adapter->extensions.begin(), adapter->extensions.end(), ext) ==
            adapter->extensions.end())
            continue;
        std::string content = jsonl::read_file(repo / rel);
        hashed.emplace_back(rel, content);
        try {
            SyntaxTree tree = adapter->parse(content, rel);
            auto calls = extract_calls(*tree, pack, rel);
            auto defs = extract_defs(*tree, pack, rel);
            out.bundle.calls.insert(out.bundle.calls.end(), calls.begin(), calls.end());
            for (auto& def : defs)
                if (!def.name.empty()) out.bundle.defs.push_back(std::move(def));
            ++out.files_parsed;
        } catch (const ParseFailureError& e) {
            out.failures.push_back({rel, e.line(), e.what()});
        }
    }
    out.bundle.repo_fingerprint = fingerprint_files(hashed);
    canonicalize(out.bundle);
    return out;
}

/// Writes calls/defs JSONL plus the irmeta sidecar (fingerprint, counts,
/// parse failures). All three files are deterministic for identical input.
inline void write_ir(const std::filesystem::path& out_dir, const GeneratedIr& ir) {
    std::filesystem::create_directories(out_dir);
    save_bundle(out_dir, ir.bundle);
    Json meta{
        {"language", ir.bundle.language},
        {"repo_fingerprint", ir.bundle.repo_fingerprint},
        {"files_parsed", ir.files_parsed},
        {"parse_failures", Json::array()},
    };
    for (const auto& f : ir.failures)
        meta["parse_failures"].push_back(
            Json{{"filepath", f.filepath}, {"line", f.line}, {"error", f.error}});
    jsonl::write_file(out_dir / ("irmeta_" + ir.bundle.language + ".json"),
                      meta.dump(2) + "\n");
}

inline IRBundle load_ir(const std::filesystem::path& dir, const std::string& language) {
    Json meta = Json::parse(jsonl::read_file(dir / ("irmeta_" + language + ".json")));
    return load_bundle(dir, language, meta.value("repo_fingerprint", std::string{}));
}

} // namespace clause_audit
