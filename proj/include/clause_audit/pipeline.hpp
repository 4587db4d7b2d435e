#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "clause_audit/compliance.hpp"
#include "clause_audit/exploitability.hpp"
#include "clause_audit/remote_backend.hpp"
#include "clause_audit/reporting.hpp"

namespace clause_audit {

struct PipelineOutcome {
    IRBundle bundle;
    std::vector<ComplianceResult> results;
    std::vector<ExploitabilityVerdict> verdicts;
    SdkReport report;
    int exit_code = 0; // 0 success, 2 partial (parse failures or flagged clauses)
};

/// End-to-end run: ir -> check -> exploit -> aggregate. Deterministic
/// artifacts (IR, results, verdicts, report) go to `out_dir`; wall-clock and
/// usage data land only in run_meta.json, so two runs over identical inputs
/// with the deterministic backend produce identical artifact trees apart from
/// that metadata file.
inline PipelineOutcome run_pipeline(const std::filesystem::path& repo,
                                    const ClauseCatalog& catalog, const AnalyzerConfig& cfg,
                                    const std::filesystem::path& out_dir,
                                    const std::string& language_override = {}) {
    auto started = std::chrono::system_clock::now();
    auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    PipelineOutcome out;
    UsageCollector usage;

    // stage: ir
    GeneratedIr ir = generate_ir(repo, language_override, cfg.skip_globs);
    write_ir(out_dir, ir);
    out.bundle = ir.bundle;
    const std::string& lang = ir.bundle.language;

    // stage: check
    std::string transcript = cfg.reasoner.backend == "remote"
                                 ? (out_dir / ("transcript_" + lang + ".jsonl")).string()
                                 : std::string{};
    auto backend = make_backend(cfg, &usage, transcript);
    SdkCheck check = check_sdk(catalog, ir.bundle, repo, cfg, *backend);
    out.results = check.results;
    save_results(out_dir, lang, out.results);

    // stage: exploit
    ClassifyOutcome classified = classify_all(out.results, catalog, *backend);
    out.verdicts = classified.verdicts;
    save_verdicts(out_dir, lang, out.verdicts);

    // stage: aggregate
    out.report = aggregate(out.results, out.verdicts, catalog);
    jsonl::write_file(out_dir / ("report_" + lang + ".json"),
                      to_json(out.report).dump(2) + "\n");

    // run metadata: everything timing- or environment-dependent lives here
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json usage_json = Json::array();
    for (const auto& rec : usage.snapshot()) usage_json.push_back(usage_to_json(rec));
    Json meta{
        {"started_unix_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(started.time_since_epoch())
             .count()},
        {"wall_time_s", wall},
        {"language", lang},
        {"clauses", catalog.clauses.size()},
        {"parse_failures", ir.failures.size()},
        {"flagged_for_rerun", check.flagged_for_rerun},
        {"classify_errors", classified.errors},
        {"total_cost", usage.total_cost()},
        {"usage", std::move(usage_json)},
        {"config", to_json(cfg)},
    };
    jsonl::write_file(out_dir / "run_meta.json", meta.dump(2) + "\n");

    if (ir.partial() || !check.flagged_for_rerun.empty()) out.exit_code = 2;
    return out;
}

} // namespace clause_audit
