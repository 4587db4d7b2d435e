#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "clause_audit/clause.hpp"
#include "clause_audit/clause_semantics.hpp"
#include "clause_audit/evidence.hpp"
#include "clause_audit/text.hpp"

namespace clause_audit {

/// Lowercase identifier fragments used to probe the IR. Tokens are unique up
/// to fold identity and keep insertion order, so refinement is reproducible.
class KeywordSet {
public:
    bool insert(const std::string& token) {
        if (token.empty()) return false;
        std::string f = text::fold_token(token);
        for (const auto& existing : folds_)
            if (existing == f) return false;
        tokens_.push_back(text::to_lower(token));
        folds_.push_back(std::move(f));
        return true;
    }

    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::vector<std::string>& folds() const { return folds_; }
    size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }

    bool operator==(const KeywordSet& other) const { return folds_ == other.folds_; }

private:
    std::vector<std::string> tokens_;
    std::vector<std::string> folds_;
};

enum class ComplianceStatus { Implemented, NonImplemented, Unknown };

inline std::string to_string(ComplianceStatus s) {
    switch (s) {
        case ComplianceStatus::Implemented: return "IMPLEMENTED";
        case ComplianceStatus::NonImplemented: return "NON_IMPLEMENTED";
        case ComplianceStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

inline ComplianceStatus compliance_status_from_string(const std::string& s) {
    if (s == "IMPLEMENTED") return ComplianceStatus::Implemented;
    if (s == "NON_IMPLEMENTED") return ComplianceStatus::NonImplemented;
    return ComplianceStatus::Unknown;
}

struct Judgment {
    ComplianceStatus status = ComplianceStatus::Unknown;
    std::string rationale;
};

struct ReasonOutcome {
    Judgment judgment;
    double confidence = 0.0; // clamped to [0,1]
};

struct UsageRecord {
    std::string backend;
    std::string op; // "reason" | "refine" | "semantics"
    long input_tokens = 0;
    long output_tokens = 0;
    double cost = 0.0;
    double wall_time_s = 0.0;
};

/// Thread-safe sink: every backend call appends exactly one record, so the
/// summed records account for the whole run with no hidden calls.
class UsageCollector {
public:
    void add(UsageRecord rec) {
        std::lock_guard<std::mutex> lock(mu_);
        records_.push_back(std::move(rec));
    }

    std::vector<UsageRecord> snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return records_;
    }

    double total_cost() const {
        std::lock_guard<std::mutex> lock(mu_);
        double total = 0.0;
        for (const auto& r : records_) total += r.cost;
        return total;
    }

    size_t count() const {
        std::lock_guard<std::mutex> lock(mu_);
        return records_.size();
    }

private:
    mutable std::mutex mu_;
    std::vector<UsageRecord> records_;
};

class ScopedTimer {
public:
    explicit ScopedTimer(double& out) : out_(out), start_(std::chrono::steady_clock::now()) {}
    ~ScopedTimer() {
        out_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    double& out_;
    std::chrono::steady_clock::time_point start_;
};

/// Pluggable semantic backend. The analyzer behaves identically under any
/// implementation honoring this interface; `previous` carries the prior
/// iteration's keyword set so refinement can guarantee progress.
class ReasonerBackend {
public:
    virtual ~ReasonerBackend() = default;
    virtual std::string name() const = 0;
    virtual KeywordSet refine(const Clause& clause,
                              const std::vector<AnnotatedEvidence>& evidence,
                              const Judgment* prior, const KeywordSet* previous) = 0;
    virtual ReasonOutcome reason(const Clause& clause,
                                 const std::vector<AnnotatedEvidence>& evidence) = 0;
    virtual ClauseSemantics analyze_semantics(const Clause& clause) = 0;
};

} // namespace clause_audit
