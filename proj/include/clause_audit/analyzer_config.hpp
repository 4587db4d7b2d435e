#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clause_audit/errors.hpp"
#include "clause_audit/ir_generator.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

struct ReasonerConfig {
    std::string backend = "deterministic"; // deterministic | remote
    std::string endpoint;
    std::string model;
    std::string api_key_env = "CLAUSE_AUDIT_API_KEY";
    double timeout_s = 60.0;
    int retries = 2;
    std::string prompt_template; // path; empty = built-in template
    double price_per_1k_input = 0.0;
    double price_per_1k_output = 0.0;
};

struct AnalyzerConfig {
    double tau = 0.8;
    int max_iters = 3;
    int slice_context_lines = 3;
    int fallback_file_cap = 20;
    int concurrency = 1;
    std::vector<std::string> skip_globs = default_skip_globs();
    ReasonerConfig reasoner;

    void validate() const {
        if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0, 1]");
        if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
        if (slice_context_lines < 0) throw ConfigError("slice_context_lines must be >= 0");
        if (fallback_file_cap < 1) throw ConfigError("fallback_file_cap must be >= 1");
        if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
        if (reasoner.backend != "deterministic" && reasoner.backend != "remote")
            throw ConfigError("reasoner.backend must be 'deterministic' or 'remote'");
    }
};

namespace detail {

inline std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string item = text::trim(
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        item = strip_quotes(item);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace detail

/// Key-value config file, TOML-style: `key = value` lines, optional
/// `[section]` headers that prefix subsequent keys, `#` comments. Lists are
/// comma-separated; strings may be quoted.
inline std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    std::map<std::string, std::string> kv;
    std::string content = jsonl::read_file(path);
    std::string section;
    size_t pos = 0;
    int lineno = 0;
    while (pos <= content.size()) {
        size_t nl = content.find('\n', pos);
        std::string line = content.substr(pos, nl == std::string::npos ? std::string::npos
                                                                       : nl - pos);
        pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        if (trimmed.front() == '[' && trimmed.back() == ']') {
            section = text::trim(trimmed.substr(1, trimmed.size() - 2));
            continue;
        }
        size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = text::trim(trimmed.substr(0, eq));
        std::string value = text::trim(trimmed.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        kv[key] = value;
    }
    return kv;
}

inline AnalyzerConfig config_from_map(const std::map<std::string, std::string>& kv,
                                      AnalyzerConfig base = {}) {
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto as_double = [&](const std::string& key, double fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        try {
            return std::stod(detail::strip_quotes(*v));
        } catch (...) {
            throw ConfigError("config key " + key + " is not a number: " + *v);
        }
    };
    auto as_int = [&](const std::string& key, int fallback) {
        return static_cast<int>(as_double(key, fallback));
    };
    auto as_string = [&](const std::string& key, const std::string& fallback) {
        const std::string* v = get(key);
        return v ? detail::strip_quotes(*v) : fallback;
    };

    AnalyzerConfig cfg = std::move(base);
    cfg.tau = as_double("tau", cfg.tau);
    cfg.max_iters = as_int("max_iters", cfg.max_iters);
    cfg.slice_context_lines = as_int("slice_context_lines", cfg.slice_context_lines);
    cfg.fallback_file_cap = as_int("fallback_file_cap", cfg.fallback_file_cap);
    cfg.concurrency = as_int("concurrency", cfg.concurrency);
    if (const std::string* globs = get("skip_globs")) cfg.skip_globs = detail::split_csv(*globs);
    cfg.reasoner.backend = as_string("reasoner.backend", cfg.reasoner.backend);
    cfg.reasoner.endpoint = as_string("reasoner.endpoint", cfg.reasoner.endpoint);
    cfg.reasoner.model = as_string("reasoner.model", cfg.reasoner.model);
    cfg.reasoner.api_key_env = as_string("reasoner.api_key_env", cfg.reasoner.api_key_env);
    cfg.reasoner.timeout_s = as_double("reasoner.timeout_s", cfg.reasoner.timeout_s);
    cfg.reasoner.retries = as_int("reasoner.retries", cfg.reasoner.retries);
    cfg.reasoner.prompt_template =
        as_string("reasoner.prompt_template", cfg.reasoner.prompt_template);
    cfg.reasoner.price_per_1k_input =
        as_double("reasoner.price_per_1k_input", cfg.reasoner.price_per_1k_input);
    cfg.reasoner.price_per_1k_output =
        as_double("reasoner.price_per_1k_output", cfg.reasoner.price_per_1k_output);
    cfg.validate();
    return cfg;
}

inline AnalyzerConfig load_config(const std::filesystem::path& path) {
    return config_from_map(parse_config_file(path));
}

/// Config echo for run metadata; never includes the API key itself.
inline Json to_json(const AnalyzerConfig& cfg) {
    return Json{
        {"tau", cfg.tau},
        {"max_iters", cfg.max_iters},
        {"slice_context_lines", cfg.slice_context_lines},
        {"fallback_file_cap", cfg.fallback_file_cap},
        {"concurrency", cfg.concurrency},
        {"skip_globs", cfg.skip_globs},
        {"reasoner",
         Json{{"backend", cfg.reasoner.backend},
              {"endpoint", cfg.reasoner.endpoint},
              {"model", cfg.reasoner.model},
              {"api_key_env", cfg.reasoner.api_key_env},
              {"timeout_s", cfg.reasoner.timeout_s},
              {"retries", cfg.reasoner.retries},
              {"prompt_template", cfg.reasoner.prompt_template}}},
    };
}

} // namespace clause_audit
