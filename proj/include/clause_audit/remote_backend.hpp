#pragma once

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <httplib.h>

#include "clause_audit/analyzer_config.hpp"
#include "clause_audit/deterministic_backend.hpp"
#include "clause_audit/reasoner.hpp"

namespace clause_audit {

inline const char* default_prompt_template() {
    return
        "You are auditing an SDK for compliance with a protocol clause.\n"
        "\n"
        "Clause:\n"
        "{{clause}}\n"
        "\n"
        "Evidence slices from the SDK source:\n"
        "{{evidence}}\n"
        "\n"
        "{{format_instructions}}\n";
}

inline const char* reason_format_instructions() {
    return
        "Decide whether the SDK implements the clause. Respond with strict JSON only:\n"
        "{\"status\": \"IMPLEMENTED\"|\"NON_IMPLEMENTED\"|\"UNKNOWN\", "
        "\"confidence\": <number 0..1>, \"rationale\": \"<one sentence>\"}";
}

namespace detail {

struct ParsedEndpoint {
    bool https = false;
    std::string host_port; // "host:port" or "host"
    std::string path;      // "/v1/..." (default "/")
};

inline ParsedEndpoint parse_endpoint(const std::string& endpoint) {
    ParsedEndpoint out;
    std::string rest = endpoint;
    if (text::starts_with(rest, "https://")) {
        out.https = true;
        rest = rest.substr(8);
    } else if (text::starts_with(rest, "http://")) {
        rest = rest.substr(7);
    }
    size_t slash = rest.find('/');
    out.host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    return out;
}

inline std::string render_template(std::string tpl, const std::string& clause_text,
                                   const std::string& evidence_text,
                                   const std::string& instructions) {
    auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
        size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(tpl, "{{clause}}", clause_text);
    replace_all(tpl, "{{evidence}}", evidence_text);
    replace_all(tpl, "{{format_instructions}}", instructions);
    return tpl;
}

inline std::string render_clause(const Clause& clause) {
    std::string out = clause.text;
    out += "\n(keyword: " + to_string(clause.rfc_keyword);
    if (!clause.scope_condition.empty()) out += "; scope: " + clause.scope_condition;
    if (!clause.message_kind.empty()) out += "; message: " + clause.message_kind;
    out += "; actor: " + to_string(clause.actor) + ")";
    return out;
}

inline std::string render_evidence(const std::vector<AnnotatedEvidence>& evidence) {
    if (evidence.empty()) return "(none found)";
    std::string out;
    for (const auto& item : evidence) {
        out += "--- " + item.slice.filepath + ":" + std::to_string(item.slice.span.start) +
               "-" + std::to_string(item.slice.span.end) + " [" +
               to_string(item.slice.origin) + "]";
        if (item.call) {
            out += " call " + item.call->name;
            if (!item.call->cond.empty()) {
                out += " guarded by: " + text::join(item.call->cond, " && ");
            }
        }
        if (item.def) out += " definition " + item.def->name;
        out += "\n" + item.slice.text + "\n";
    }
    return out;
}

/// Pulls the first JSON object out of a possibly prose- or fence-wrapped
/// model reply.
inline Json extract_json_object(const std::string& content) {
    size_t start = content.find('{');
    while (start != std::string::npos) {
        int depth = 0;
        bool in_string = false;
        for (size_t i = start; i < content.size(); ++i) {
            char c = content[i];
            if (in_string) {
                if (c == '\\') ++i;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            if (c == '{') ++depth;
            if (c == '}') {
                --depth;
                if (depth == 0) {
                    Json parsed = Json::parse(content.substr(start, i - start + 1), nullptr,
                                              false);
                    if (!parsed.is_discarded()) return parsed;
                    break;
                }
            }
        }
        start = content.find('{', start + 1);
    }
    return Json(nullptr);
}

} // namespace detail

/// HTTP JSON backend: submits the fixed prompt template and parses a
/// structured verdict. Replies may carry the verdict object at the top level
/// or wrapped in a chat-completion style content string. A reply that cannot
/// be parsed is treated as UNKNOWN with zero confidence, never a crash.
class RemoteBackend : public ReasonerBackend {
public:
    RemoteBackend(ReasonerConfig cfg, UsageCollector* usage,
                  std::string transcript_path = {})
        : cfg_(std::move(cfg)), usage_(usage), transcript_path_(std::move(transcript_path)) {
        if (!cfg_.prompt_template.empty())
            template_text_ = jsonl::read_file(cfg_.prompt_template);
        else
            template_text_ = default_prompt_template();
        if (!cfg_.api_key_env.empty()) {
            if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
        }
    }

    std::string name() const override { return "remote"; }

    ReasonOutcome reason(const Clause& clause,
                         const std::vector<AnnotatedEvidence>& evidence) override {
        std::string prompt =
            detail::render_template(template_text_, detail::render_clause(clause),
                                    detail::render_evidence(evidence),
                                    reason_format_instructions());
        Json reply = post("reason", clause.id, prompt);
        Json verdict = extract_payload(reply);
        if (!verdict.is_object() || !verdict.contains("status"))
            return {{ComplianceStatus::Unknown, "malformed backend response"}, 0.0};
        ReasonOutcome out;
        out.judgment.status =
            compliance_status_from_string(verdict.value("status", std::string{"UNKNOWN"}));
        out.judgment.rationale = verdict.value("rationale", std::string{});
        double q = 0.0;
        if (verdict.contains("confidence") && verdict["confidence"].is_number())
            q = verdict["confidence"].get<double>();
        out.confidence = std::clamp(q, 0.0, 1.0);
        return out;
    }

    KeywordSet refine(const Clause& clause, const std::vector<AnnotatedEvidence>& evidence,
                      const Judgment* prior, const KeywordSet* previous) override {
        std::string instructions =
            "Propose search keywords (lowercase identifier fragments) for locating the "
            "clause's implementation. Respond with strict JSON only: "
            "{\"keywords\": [\"...\"]}";
        std::string prompt = detail::render_template(
            template_text_, detail::render_clause(clause),
            detail::render_evidence(evidence) +
                (prior ? "\nPrior judgment: " + to_string(prior->status) : ""),
            instructions);
        Json reply = post("refine", clause.id, prompt);
        Json payload = extract_payload(reply);
        KeywordSet keywords;
        if (payload.is_object() && payload.contains("keywords") &&
            payload["keywords"].is_array()) {
            for (const auto& item : payload["keywords"])
                if (item.is_string()) {
                    std::string token = item.get<std::string>();
                    if (token.find_first_of(" \t\n") == std::string::npos && !token.empty())
                        keywords.insert(token);
                }
        }
        // A malformed or empty reply falls back to the mechanical expansion so
        // the loop can still make progress.
        if (keywords.empty()) keywords = fallback_.refine(clause, evidence, prior, previous);
        if (previous != nullptr) {
            for (const auto& t : previous->tokens()) keywords.insert(t);
            for (int n = 2; keywords == *previous; ++n)
                keywords.insert("r" + std::to_string(n));
        }
        return keywords;
    }

    ClauseSemantics analyze_semantics(const Clause& clause) override {
        std::string instructions =
            "Identify the sender, message, trigger, and whether the clause constrains "
            "message content or timing. Respond with strict JSON only: "
            "{\"sender\": \"CLIENT\"|\"SERVER\"|\"BOTH\"|\"UNSPECIFIED\", "
            "\"message\": \"...\", \"trigger\": \"...\", "
            "\"constraint_dimension\": \"PAYLOAD\"|\"TIMING\"|\"BOTH\"|\"NONE\"}";
        std::string prompt = detail::render_template(
            template_text_, detail::render_clause(clause), "(not applicable)", instructions);
        Json reply = post("semantics", clause.id, prompt);
        Json payload = extract_payload(reply);
        if (!payload.is_object() || !payload.contains("constraint_dimension"))
            return rule_based_semantics(clause); // rule table as the auditable default
        ClauseSemantics sem;
        sem.sender = actor_from_string(payload.value("sender", std::string{"UNSPECIFIED"}))
                         .value_or(Actor::UNSPECIFIED);
        sem.message = payload.value("message", clause.message_kind);
        sem.trigger = payload.value("trigger", clause.scope_condition);
        std::string dim = payload.value("constraint_dimension", std::string{"NONE"});
        sem.constraint_dimension = dim == "PAYLOAD" ? ConstraintDimension::Payload
                                   : dim == "TIMING" ? ConstraintDimension::Timing
                                   : dim == "BOTH"   ? ConstraintDimension::Both
                                                     : ConstraintDimension::None;
        sem.fired_rule = "remote";
        return sem;
    }

private:
    ReasonerConfig cfg_;
    UsageCollector* usage_;
    std::string transcript_path_;
    std::string template_text_;
    std::string api_key_;
    std::mutex transcript_mu_;
    DeterministicBackend fallback_;

    static Json extract_payload(const Json& reply) {
        if (!reply.is_object()) return Json(nullptr);
        if (reply.contains("status") || reply.contains("keywords") ||
            reply.contains("constraint_dimension"))
            return reply;
        // chat-completion shapes: choices[0].message.content or content[0].text
        std::string content;
        if (reply.contains("choices") && reply["choices"].is_array() &&
            !reply["choices"].empty()) {
            const Json& msg = reply["choices"][0];
            if (msg.contains("message") && msg["message"].contains("content"))
                content = msg["message"]["content"].get<std::string>();
            else if (msg.contains("text"))
                content = msg["text"].get<std::string>();
        } else if (reply.contains("content") && reply["content"].is_array() &&
                   !reply["content"].empty() && reply["content"][0].contains("text")) {
            content = reply["content"][0]["text"].get<std::string>();
        }
        if (content.empty()) return Json(nullptr);
        return detail::extract_json_object(content);
    }

    Json post(const std::string& op, const std::string& clause_id,
              const std::string& prompt) {
        double elapsed = 0.0;
        Json parsed;
        std::string body;
        {
            ScopedTimer timer(elapsed);
            Json request{{"model", cfg_.model}, {"op", op}, {"input", prompt}};
            body = send_with_retries(request.dump());
            parsed = Json::parse(body, nullptr, false);
        }
        UsageRecord rec{name(), op, 0, 0, 0.0, elapsed};
        long in_tokens = static_cast<long>(prompt.size() / 4);
        long out_tokens = static_cast<long>(body.size() / 4);
        if (parsed.is_object() && parsed.contains("usage")) {
            const Json& u = parsed["usage"];
            in_tokens = u.value("input_tokens", u.value("prompt_tokens", in_tokens));
            out_tokens = u.value("output_tokens", u.value("completion_tokens", out_tokens));
        }
        rec.input_tokens = in_tokens;
        rec.output_tokens = out_tokens;
        rec.cost = cfg_.price_per_1k_input * in_tokens / 1000.0 +
                   cfg_.price_per_1k_output * out_tokens / 1000.0;
        if (usage_) usage_->add(rec);
        log_transcript(op, clause_id, prompt, body);
        if (parsed.is_discarded()) return Json(nullptr);
        return parsed;
    }

    std::string send_with_retries(const std::string& body) {
        detail::ParsedEndpoint ep = detail::parse_endpoint(cfg_.endpoint);
        if (ep.host_port.empty())
            throw BackendUnavailableError("reasoner.endpoint is not configured");
        std::string last_error;
        for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
            httplib::Client client((ep.https ? "https://" : "http://") + ep.host_port);
            client.set_connection_timeout(static_cast<int>(cfg_.timeout_s), 0);
            client.set_read_timeout(static_cast<int>(cfg_.timeout_s), 0);
            httplib::Headers headers;
            if (!api_key_.empty())
                headers.emplace("Authorization", "Bearer " + api_key_);
            auto res = client.Post(ep.path, headers, body, "application/json");
            if (!res) {
                last_error = "connection failed: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500) {
                last_error = "server error " + std::to_string(res->status);
                continue;
            }
            if (res->status >= 400)
                throw BackendUnavailableError("backend rejected request with status " +
                                              std::to_string(res->status));
            return res->body;
        }
        throw BackendUnavailableError("backend unreachable after " +
                                      std::to_string(cfg_.retries + 1) + " attempts: " +
                                      last_error);
    }

    void log_transcript(const std::string& op, const std::string& clause_id,
                        const std::string& prompt, const std::string& response) {
        if (transcript_path_.empty()) return;
        std::lock_guard<std::mutex> lock(transcript_mu_);
        std::ofstream out(transcript_path_, std::ios::app);
        out << Json{{"op", op}, {"clause_id", clause_id}, {"prompt", prompt},
                    {"response", response}}
                   .dump()
            << "\n";
    }
};

/// Backend factory used by the CLI and the pipeline.
inline std::unique_ptr<ReasonerBackend> make_backend(const AnalyzerConfig& cfg,
                                                     UsageCollector* usage,
                                                     const std::string& transcript_path = {}) {
    if (cfg.reasoner.backend == "remote")
        return std::make_unique<RemoteBackend>(cfg.reasoner, usage, transcript_path);
    return std::make_unique<DeterministicBackend>(usage);
}

} // namespace clause_audit
