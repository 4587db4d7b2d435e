// clause-audit: normative-clause extraction, language-agnostic IR generation,
// compliance checking, exploitability triage, and reporting over SDK repos.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clause_audit/pipeline.hpp"
#include "clause_audit/render.hpp"
#include "clause_audit/spec_extract.hpp"

using namespace clause_audit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
    std::string config_path;
    bool json = false;
};

AnalyzerConfig effective_config(const CommonOpts& common) {
    if (common.config_path.empty()) return {};
    return load_config(common.config_path);
}

SpecFormat format_for(const std::string& flag, const std::string& path) {
    if (!flag.empty()) return spec_format_from_string(flag);
    auto ext = std::filesystem::path(path).extension().string();
    return ext == ".md" || ext == ".markdown" ? SpecFormat::Markdown : SpecFormat::Plain;
}

int cmd_quantify(const CommonOpts& common, const std::string& catalog_path,
                 const std::string& spec_path, bool extract, const std::string& format_flag,
                 const std::string& write_catalog) {
    ClauseCatalog snapshot = load_catalog(catalog_path);
    QuantificationReport report = quantify(snapshot);

    Json output{{"snapshot", to_json(report)}};
    if (!common.json) std::cout << render_quantification(report);

    if (extract) {
        if (spec_path.empty()) {
            std::cerr << "error: --extract requires --spec\n";
            return kExitUsage;
        }
        ClauseCatalog live = parse_spec_document(jsonl::read_file(spec_path),
                                                 format_for(format_flag, spec_path));
        QuantificationReport live_report = quantify(live);
        output["live"] = to_json(live_report);
        output["drift"] = Json{
            {"total", live_report.total - report.total},
            {"mandatory", live_report.mandatory - report.mandatory},
            {"conditional_must", live_report.conditional_must - report.conditional_must},
            {"non_must", live_report.non_must - report.non_must},
        };
        if (!common.json) {
            std::cout << "\nlive extraction from " << spec_path << ":\n"
                      << render_quantification(live_report);
            std::cout << "drift vs snapshot (live - snapshot): total "
                      << output["drift"]["total"].get<int>() << ", mandatory "
                      << output["drift"]["mandatory"].get<int>() << ", conditional MUST "
                      << output["drift"]["conditional_must"].get<int>() << ", non-MUST "
                      << output["drift"]["non_must"].get<int>() << "\n";
            std::cout << "drift is reported only; the snapshot is never updated in place\n";
        }
        if (!write_catalog.empty()) {
            save_catalog(write_catalog, live);
            if (!common.json)
                std::cout << "extracted catalog written to " << write_catalog << "\n";
        }
    }
    if (common.json) std::cout << output.dump(2) << "\n";
    return kExitOk;
}

int cmd_ir(const CommonOpts& common, const std::string& repo, const std::string& lang,
           const std::string& out_dir) {
    AnalyzerConfig cfg = effective_config(common);
    GeneratedIr ir = generate_ir(repo, lang, cfg.skip_globs);
    write_ir(out_dir, ir);
    Json summary{
        {"language", ir.bundle.language},
        {"files_parsed", ir.files_parsed},
        {"calls", ir.bundle.calls.size()},
        {"defs", ir.bundle.defs.size()},
        {"parse_failures", ir.failures.size()},
        {"repo_fingerprint", ir.bundle.repo_fingerprint},
    };
    if (common.json) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << "language " << ir.bundle.language << ": " << ir.files_parsed
                  << " file(s), " << ir.bundle.defs.size() << " def(s), "
                  << ir.bundle.calls.size() << " call(s)";
        if (ir.partial()) std::cout << ", " << ir.failures.size() << " parse failure(s)";
        std::cout << "\n";
        for (const auto& f : ir.failures)
            std::cerr << "parse failure: " << f.filepath << ":" << f.line << ": " << f.error
                      << "\n";
    }
    return ir.partial() ? kExitPartial : kExitOk;
}

int cmd_check(const CommonOpts& common, AnalyzerConfig cfg, const std::string& repo,
              const std::string& catalog_path, const std::string& ir_dir,
              std::string lang, const std::string& out_dir) {
    ClauseCatalog catalog = load_catalog(catalog_path);
    if (lang.empty()) lang = detect_language(repo, cfg.skip_globs);
    IRBundle bundle = load_ir(ir_dir, lang);

    UsageCollector usage;
    std::filesystem::create_directories(out_dir);
    std::string transcript =
        cfg.reasoner.backend == "remote"
            ? (std::filesystem::path(out_dir) / ("transcript_" + lang + ".jsonl")).string()
            : std::string{};
    auto backend = make_backend(cfg, &usage, transcript);
    SdkCheck check = check_sdk(catalog, bundle, repo, cfg, *backend);
    save_results(out_dir, lang, check.results);

    Json usage_json = Json::array();
    for (const auto& rec : usage.snapshot()) usage_json.push_back(usage_to_json(rec));
    Json meta{{"language", lang},
              {"flagged_for_rerun", check.flagged_for_rerun},
              {"total_cost", usage.total_cost()},
              {"usage", std::move(usage_json)}};
    jsonl::write_file(std::filesystem::path(out_dir) / ("check_meta_" + lang + ".json"),
                      meta.dump(2) + "\n");

    int implemented = 0, non_implemented = 0, unknown = 0;
    for (const auto& r : check.results) {
        if (r.status == ComplianceStatus::Implemented) ++implemented;
        else if (r.status == ComplianceStatus::NonImplemented) ++non_implemented;
        else ++unknown;
    }
    if (common.json) {
        std::cout << Json{{"language", lang},
                          {"implemented", implemented},
                          {"non_implemented", non_implemented},
                          {"unknown", unknown},
                          {"flagged_for_rerun", check.flagged_for_rerun.size()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << lang << ": " << implemented << " implemented, " << non_implemented
                  << " non-implemented, " << unknown << " unknown over "
                  << check.results.size() << " clause(s)\n";
        if (!check.flagged_for_rerun.empty())
            std::cout << check.flagged_for_rerun.size()
                      << " clause(s) flagged for re-run after backend failures\n";
    }
    return check.flagged_for_rerun.empty() ? kExitOk : kExitPartial;
}

int cmd_exploit(const CommonOpts& common, const std::string& results_path,
                const std::string& catalog_path, const std::string& out_dir) {
    AnalyzerConfig cfg = effective_config(common);
    ClauseCatalog catalog = load_catalog(catalog_path);
    std::vector<ComplianceResult> results = load_results(results_path);
    std::string lang = results.empty() ? "unknown" : results.front().sdk;

    UsageCollector usage;
    auto backend = make_backend(cfg, &usage);
    ClassifyOutcome outcome = classify_all(results, catalog, *backend);
    save_verdicts(out_dir, lang, outcome.verdicts);

    size_t exploitable = 0;
    for (const auto& v : outcome.verdicts)
        if (v.exploitable()) ++exploitable;
    if (common.json) {
        std::cout << Json{{"language", lang},
                          {"verdicts", outcome.verdicts.size()},
                          {"exploitable", exploitable},
                          {"errors", outcome.errors}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << lang << ": " << outcome.verdicts.size() << " non-implemented clause(s), "
                  << exploitable << " exploitable\n";
        for (const auto& e : outcome.errors) std::cerr << "error: " << e << "\n";
    }
    return outcome.errors.empty() ? kExitOk : kExitPartial;
}

int cmd_eval(const CommonOpts& common, const std::string& results_path,
             const std::string& labels_path) {
    auto results = load_results(results_path);
    auto labels = load_labels(labels_path);
    EvalReport report = evaluate(results, labels);
    if (common.json)
        std::cout << to_json(report).dump(2) << "\n";
    else
        std::cout << render_eval_report(report);
    return kExitOk;
}

int cmd_cost(const CommonOpts& common, const std::string& usage_path, long checks,
             int sdks) {
    std::vector<UsageRecord> usage;
    for (const auto& rec : jsonl::read_records(usage_path))
        usage.push_back(usage_from_json(rec));
    CostReport report = cost_report(usage, checks, sdks);
    if (common.json)
        std::cout << to_json(report).dump(2) << "\n";
    else
        std::cout << render_cost_report(report);
    return kExitOk;
}

int cmd_run(const CommonOpts& common, const AnalyzerConfig& cfg, const std::string& repo,
            const std::string& catalog_path, const std::string& lang,
            const std::string& out_dir) {
    ClauseCatalog catalog = load_catalog(catalog_path);
    PipelineOutcome outcome = run_pipeline(repo, catalog, cfg, out_dir, lang);
    if (common.json)
        std::cout << to_json(outcome.report).dump(2) << "\n";
    else
        std::cout << render_sdk_report(outcome.report);
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"clause-audit: clause compliance and exploitability analyzer for SDK repos"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config_path, "key-value config file")
        ->envname("CLAUSE_AUDIT_CONFIG");
    app.add_flag("--json", common.json, "emit JSON instead of tables");

    // quantify
    auto* quantify_cmd = app.add_subcommand("quantify", "quantify a clause catalog");
    std::string q_catalog, q_spec, q_format, q_write;
    bool q_extract = false;
    quantify_cmd->add_option("--catalog", q_catalog, "catalog JSONL")->required();
    quantify_cmd->add_option("--spec", q_spec, "specification document for live extraction");
    quantify_cmd->add_flag("--extract", q_extract, "extract from --spec and report drift");
    quantify_cmd->add_option("--format", q_format, "spec format: markdown|plain");
    quantify_cmd->add_option("--write-catalog", q_write, "write the extracted catalog here");

    // ir
    auto* ir_cmd = app.add_subcommand("ir", "generate the conditional-call IR for a repo");
    std::string i_repo, i_lang, i_out;
    ir_cmd->add_option("--repo", i_repo, "SDK repository root")->required();
    ir_cmd->add_option("--lang", i_lang, "force a language tag");
    ir_cmd->add_option("--out", i_out, "output directory")->required();

    // check
    auto* check_cmd = app.add_subcommand("check", "run the compliance loop over an IR");
    std::string c_repo, c_catalog, c_ir, c_lang, c_out, c_backend;
    double c_tau = -1.0;
    int c_iters = -1, c_concurrency = -1;
    check_cmd->add_option("--repo", c_repo, "SDK repository root")->required();
    check_cmd->add_option("--catalog", c_catalog, "catalog JSONL")->required();
    check_cmd->add_option("--ir", c_ir, "directory holding calls/defs JSONL")->required();
    check_cmd->add_option("--lang", c_lang, "language tag (default: detect)");
    check_cmd->add_option("--tau", c_tau, "confidence threshold");
    check_cmd->add_option("--max-iters", c_iters, "max refinement iterations");
    check_cmd->add_option("--backend", c_backend, "deterministic|remote");
    check_cmd->add_option("--concurrency", c_concurrency, "parallel clause checks");
    check_cmd->add_option("--out", c_out, "output directory")->required();

    // exploit
    auto* exploit_cmd = app.add_subcommand("exploit", "classify non-implementations");
    std::string x_results, x_catalog, x_out;
    exploit_cmd->add_option("--results", x_results, "results JSONL")->required();
    exploit_cmd->add_option("--catalog", x_catalog, "catalog JSONL")->required();
    exploit_cmd->add_option("--out", x_out, "output directory")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score results against ground-truth labels");
    std::string e_results, e_labels;
    eval_cmd->add_option("--results", e_results, "results JSONL")->required();
    eval_cmd->add_option("--labels", e_labels, "ground-truth labels JSONL")->required();

    // cost
    auto* cost_cmd = app.add_subcommand("cost", "summarize usage records");
    std::string k_usage;
    long k_checks = 0;
    int k_sdks = 1;
    cost_cmd->add_option("--usage", k_usage, "usage JSONL")->required();
    cost_cmd->add_option("--checks", k_checks, "number of clause checks")->required();
    cost_cmd->add_option("--sdks", k_sdks, "number of SDKs for the per-SDK average");

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline: ir, check, exploit, report");
    std::string r_repo, r_catalog, r_lang, r_out, r_backend;
    double r_tau = -1.0;
    int r_iters = -1, r_concurrency = -1;
    run_cmd->add_option("--repo", r_repo, "SDK repository root")->required();
    run_cmd->add_option("--catalog", r_catalog, "catalog JSONL")->required();
    run_cmd->add_option("--lang", r_lang, "language tag (default: detect)");
    run_cmd->add_option("--tau", r_tau, "confidence threshold");
    run_cmd->add_option("--max-iters", r_iters, "max refinement iterations");
    run_cmd->add_option("--backend", r_backend, "deterministic|remote");
    run_cmd->add_option("--concurrency", r_concurrency, "parallel clause checks");
    run_cmd->add_option("--out", r_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto overlay = [&](double tau, int iters, const std::string& backend, int concurrency) {
        AnalyzerConfig cfg = effective_config(common);
        if (tau > 0) cfg.tau = tau;
        if (iters > 0) cfg.max_iters = iters;
        if (!backend.empty()) cfg.reasoner.backend = backend;
        if (concurrency > 0) cfg.concurrency = concurrency;
        cfg.validate();
        return cfg;
    };

    try {
        if (quantify_cmd->parsed())
            return cmd_quantify(common, q_catalog, q_spec, q_extract, q_format, q_write);
        if (ir_cmd->parsed()) return cmd_ir(common, i_repo, i_lang, i_out);
        if (check_cmd->parsed())
            return cmd_check(common, overlay(c_tau, c_iters, c_backend, c_concurrency),
                             c_repo, c_catalog, c_ir, c_lang, c_out);
        if (exploit_cmd->parsed()) return cmd_exploit(common, x_results, x_catalog, x_out);
        if (eval_cmd->parsed()) return cmd_eval(common, e_results, e_labels);
        if (cost_cmd->parsed()) return cmd_cost(common, k_usage, k_checks, k_sdks);
        if (run_cmd->parsed())
            return cmd_run(common, overlay(r_tau, r_iters, r_backend, r_concurrency), r_repo,
                           r_catalog, r_lang, r_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AuditError& e) {
        std::cerr << "error [" << e.tag() << "]: " << e.what() << "\n";
        return kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitUsage;
}
