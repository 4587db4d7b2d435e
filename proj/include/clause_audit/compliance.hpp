#pragma once

#include <algorithm>
#include <atomic>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "clause_audit/analyzer_config.hpp"
#include "clause_audit/clause.hpp"
#include "clause_audit/deterministic_backend.hpp"
#include "clause_audit/ir_generator.hpp"
#include "clause_audit/ir_query.hpp"
#include "clause_audit/reasoner.hpp"
#include "clause_audit/slice_reader.hpp"

namespace clause_audit {

struct ComplianceResult {
    std::string clause_id;
    std::string sdk; // language tag
    ComplianceStatus status = ComplianceStatus::Unknown;
    std::vector<EvidenceSlice> evidence;
    std::vector<std::string> files_analyzed;
    double confidence = 0.0;
    int iterations_used = 0;
    bool fallback_used = false;
    std::string error; // non-empty only when the backend failed; flags a re-run
};

inline Json to_json(const ComplianceResult& r) {
    Json evidence = Json::array();
    for (const auto& slice : r.evidence) evidence.push_back(to_json(slice));
    Json out{
        {"clause_id", r.clause_id},
        {"sdk", r.sdk},
        {"status", to_string(r.status)},
        {"evidence", std::move(evidence)},
        {"files_analyzed", r.files_analyzed},
        {"confidence", r.confidence},
        {"iterations_used", r.iterations_used},
        {"fallback_used", r.fallback_used},
    };
    return out;
}

inline ComplianceResult compliance_result_from_json(const Json& j) {
    ComplianceResult r;
    r.clause_id = j.at("clause_id").get<std::string>();
    r.sdk = j.at("sdk").get<std::string>();
    r.status = compliance_status_from_string(j.at("status").get<std::string>());
    for (const auto& e : j.at("evidence")) r.evidence.push_back(evidence_slice_from_json(e));
    r.files_analyzed = j.at("files_analyzed").get<std::vector<std::string>>();
    r.confidence = j.at("confidence").get<double>();
    r.iterations_used = j.at("iterations_used").get<int>();
    r.fallback_used = j.at("fallback_used").get<bool>();
    return r;
}

namespace detail {

inline std::vector<std::string> dedup_paths(const std::vector<EvidenceSlice>& evidence) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& slice : evidence)
        if (seen.insert(slice.filepath).second) out.push_back(slice.filepath);
    return out;
}

/// Accumulates new slices into the evidence list; returns how many were new.
/// Evidence only ever grows (monotone across iterations).
inline size_t merge_evidence(std::vector<AnnotatedEvidence>& evidence,
                             std::set<std::tuple<std::string, int, int, int>>& seen,
                             std::vector<AnnotatedEvidence> fresh) {
    size_t added = 0;
    for (auto& item : fresh) {
        auto key = std::make_tuple(item.slice.filepath, item.slice.span.start,
                                   item.slice.span.end, static_cast<int>(item.slice.origin));
        if (!seen.insert(key).second) continue;
        evidence.push_back(std::move(item));
        ++added;
    }
    return added;
}

/// Fallback candidates: language source files ranked by keyword matches on
/// their path tokens, then path order; capped. When nothing matches, the
/// first files in path order still go in so the reasoner sees the codebase.
inline std::vector<std::string> rank_fallback_files(const std::filesystem::path& repo,
                                                    const std::string& language,
                                                    const KeywordSet& keywords,
                                                    const AnalyzerConfig& cfg) {
    const LanguageAdapter* adapter = find_adapter(language);
    std::vector<std::pair<int, std::string>> scored;
    for (const auto& rel : list_repo_files(repo, cfg.skip_globs)) {
        std::string ext = std::filesystem::path(rel).extension().string();
        if (adapter && std::find(adapter->extensions.begin(), adapter->extensions.end(),
                                 ext) == adapter->extensions.end())
            continue;
        std::set<std::string> folds;
        for (const auto& w : text::word_tokens(rel)) folds.insert(text::fold_token(w));
        int score = 0;
        for (const auto& f : keywords.folds())
            if (folds.count(f)) ++score;
        scored.emplace_back(-score, rel);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (const auto& [neg_score, rel] : scored) {
        if (static_cast<int>(out.size()) >= cfg.fallback_file_cap) break;
        out.push_back(rel);
    }
    return out;
}

} // namespace detail

/// The IR-driven self-refining loop for one clause: query the IR with the
/// current keywords, read the hit slices, reason over the accumulated
/// evidence, and stop at the first confidence >= tau. After max_iters
/// unsuccessful rounds, reason once more over capped full-source evidence.
inline ComplianceResult check_clause(const Clause& clause, const IRBundle& bundle,
                                     RepoReader& repo, const AnalyzerConfig& cfg,
                                     ReasonerBackend& backend) {
    ComplianceResult result;
    result.clause_id = clause.id;
    result.sdk = bundle.language;

    std::vector<AnnotatedEvidence> evidence;
    std::set<std::tuple<std::string, int, int, int>> seen;

    auto finish = [&](const ReasonOutcome& outcome, int iterations, bool fallback) {
        result.status = outcome.judgment.status;
        result.confidence = std::clamp(outcome.confidence, 0.0, 1.0);
        result.iterations_used = iterations;
        result.fallback_used = fallback;
        result.evidence.clear();
        for (const auto& item : evidence) result.evidence.push_back(item.slice);
        result.files_analyzed = detail::dedup_paths(result.evidence);
        return result;
    };

    try {
        KeywordSet keywords = backend.refine(clause, {}, nullptr, nullptr);
        Judgment last;
        for (int i = 1; i <= cfg.max_iters; ++i) {
            auto hits = query_ir(bundle, keywords);
            detail::merge_evidence(evidence, seen,
                                   read_slices(repo, hits, cfg.slice_context_lines));
            ReasonOutcome outcome = backend.reason(clause, evidence);
            if (outcome.confidence >= cfg.tau) return finish(outcome, i, false);
            last = outcome.judgment;
            if (i < cfg.max_iters) {
                KeywordSet next = backend.refine(clause, evidence, &last, &keywords);
                keywords = std::move(next);
            }
        }

        // full-source fallback, capped
        std::vector<AnnotatedEvidence> full;
        for (const auto& rel :
             detail::rank_fallback_files(repo.root(), bundle.language, keywords, cfg)) {
            AnnotatedEvidence item;
            item.slice.filepath = rel;
            item.slice.span = {1, std::max(1, repo.line_count(rel))};
            item.slice.text = repo.slice_text(rel, item.slice.span);
            item.slice.origin = EvidenceOrigin::FullSourceFallback;
            full.push_back(std::move(item));
        }
        detail::merge_evidence(evidence, seen, std::move(full));
        ReasonOutcome outcome = backend.reason(clause, evidence);
        return finish(outcome, cfg.max_iters, true);
    } catch (const BackendUnavailableError& e) {
        ReasonOutcome failed{{ComplianceStatus::Unknown, e.what()}, 0.0};
        ComplianceResult r = finish(failed, result.iterations_used, false);
        r.error = e.what();
        return r;
    }
}

struct SdkCheck {
    std::vector<ComplianceResult> results;
    std::vector<std::string> flagged_for_rerun; // clause ids with backend failures
};

/// One result per clause, in catalog order. Clause checks are independent;
/// `cfg.concurrency` bounds the worker count (protects remote rate limits).
inline SdkCheck check_sdk(const ClauseCatalog& catalog, const IRBundle& bundle,
                          const std::filesystem::path& repo_path, const AnalyzerConfig& cfg,
                          ReasonerBackend& backend) {
    if (!bundle.repo_fingerprint.empty()) {
        const LanguageAdapter* adapter = find_adapter(bundle.language);
        if (adapter) {
            std::string now = repo_fingerprint(repo_path, *adapter, cfg.skip_globs);
            if (now != bundle.repo_fingerprint)
                throw StaleIrError("repository changed since IR generation (" + now +
                                   " != " + bundle.repo_fingerprint + ")");
        }
    }

    SdkCheck out;
    out.results.resize(catalog.clauses.size());
    int workers = std::max(1, std::min<int>(cfg.concurrency,
                                            static_cast<int>(catalog.clauses.size())));
    if (workers == 1) {
        RepoReader repo(repo_path);
        for (size_t i = 0; i < catalog.clauses.size(); ++i)
            out.results[i] = check_clause(catalog.clauses[i], bundle, repo, cfg, backend);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                RepoReader repo(repo_path); // per-worker read cache
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= catalog.clauses.size()) return;
                    out.results[i] =
                        check_clause(catalog.clauses[i], bundle, repo, cfg, backend);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& r : out.results)
        if (!r.error.empty()) out.flagged_for_rerun.push_back(r.clause_id);
    return out;
}

inline void save_results(const std::filesystem::path& out_dir,
                         const std::string& language,
                         const std::vector<ComplianceResult>& results) {
    std::vector<Json> lines;
    lines.reserve(results.size());
    for (const auto& r : results) lines.push_back(to_json(r));
    jsonl::write_records(out_dir / ("results_" + language + ".jsonl"), lines);
}

inline std::vector<ComplianceResult> load_results(const std::filesystem::path& path) {
    std::vector<ComplianceResult> out;
    for (const auto& rec : jsonl::read_records(path))
        out.push_back(compliance_result_from_json(rec));
    return out;
}

} // namespace clause_audit
