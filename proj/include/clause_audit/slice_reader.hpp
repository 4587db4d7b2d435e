#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "clause_audit/evidence.hpp"
#include "clause_audit/ir_query.hpp"
#include "clause_audit/jsonl.hpp"

namespace clause_audit {

/// Lazy line-indexed view of repository files; one read per file per run.
class RepoReader {
public:
    explicit RepoReader(std::filesystem::path root) : root_(std::move(root)) {}

    const std::vector<std::string>& lines(const std::string& rel_path) {
        auto it = cache_.find(rel_path);
        if (it != cache_.end()) return it->second;
        std::string content = jsonl::read_file(root_ / rel_path);
        std::vector<std::string> lines;
        size_t pos = 0;
        while (pos <= content.size()) {
            size_t nl = content.find('\n', pos);
            if (nl == std::string::npos) {
                if (pos < content.size()) lines.push_back(content.substr(pos));
                break;
            }
            lines.push_back(content.substr(pos, nl - pos));
            pos = nl + 1;
        }
        return cache_.emplace(rel_path, std::move(lines)).first->second;
    }

    int line_count(const std::string& rel_path) {
        return static_cast<int>(lines(rel_path).size());
    }

    std::string slice_text(const std::string& rel_path, Span span) {
        const auto& ls = lines(rel_path);
        std::string out;
        for (int i = span.start; i <= span.end && i <= static_cast<int>(ls.size()); ++i) {
            if (i > span.start) out += '\n';
            out += ls[static_cast<size_t>(i - 1)];
        }
        return out;
    }

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    std::map<std::string, std::vector<std::string>> cache_;
};

/// Definition hits yield their full span; call hits are padded by
/// `context_lines` above and below; slices sharing (filepath, span) collapse
/// to the first occurrence.
inline std::vector<AnnotatedEvidence> read_slices(RepoReader& repo,
                                                  const std::vector<IrHit>& hits,
                                                  int context_lines) {
    std::vector<AnnotatedEvidence> out;
    std::set<std::tuple<std::string, int, int>> seen;
    for (const auto& hit : hits) {
        Span span = hit.span();
        if (hit.call) {
            span.start = std::max(1, span.start - context_lines);
            span.end = std::min(repo.line_count(hit.filepath()), span.end + context_lines);
        }
        if (!seen.insert({hit.filepath(), span.start, span.end}).second) continue;
        AnnotatedEvidence item;
        item.slice.filepath = hit.filepath();
        item.slice.span = span;
        item.slice.text = repo.slice_text(hit.filepath(), span);
        item.slice.origin =
            hit.def ? EvidenceOrigin::CalleeDefinition : EvidenceOrigin::CallSite;
        item.def = hit.def;
        item.call = hit.call;
        out.push_back(std::move(item));
    }
    return out;
}

} // namespace clause_audit
