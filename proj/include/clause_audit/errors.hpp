#pragma once

#include <stdexcept>
#include <string>

namespace clause_audit {

// Base for all analyzer errors; carries a stable machine-readable tag so the
// CLI can map failures to exit codes without string matching.
class AuditError : public std::runtime_error {
public:
    AuditError(std::string tag, const std::string& what)
        : std::runtime_error(what), tag_(std::move(tag)) {}

    const std::string& tag() const noexcept { return tag_; }

private:
    std::string tag_;
};

struct EmptyDocumentError : AuditError {
    explicit EmptyDocumentError(const std::string& what = "document is empty")
        : AuditError("EmptyDocument", what) {}
};

struct UnsupportedFormatError : AuditError {
    explicit UnsupportedFormatError(const std::string& what)
        : AuditError("UnsupportedFormat", what) {}
};

struct EmptyCatalogError : AuditError {
    explicit EmptyCatalogError(const std::string& what = "catalog has no clauses")
        : AuditError("EmptyCatalog", what) {}
};

struct NoSupportedLanguageError : AuditError {
    explicit NoSupportedLanguageError(const std::string& what)
        : AuditError("NoSupportedLanguage", what) {}
};

// A single file could not be parsed; position is 1-based.
class ParseFailureError : public AuditError {
public:
    ParseFailureError(std::string filepath, int line, const std::string& what)
        : AuditError("ParseFailure", filepath + ":" + std::to_string(line) + ": " + what),
          filepath_(std::move(filepath)),
          line_(line) {}

    const std::string& filepath() const noexcept { return filepath_; }
    int line() const noexcept { return line_; }

private:
    std::string filepath_;
    int line_;
};

struct StaleIrError : AuditError {
    explicit StaleIrError(const std::string& what)
        : AuditError("StaleIR", what) {}
};

struct BackendUnavailableError : AuditError {
    explicit BackendUnavailableError(const std::string& what)
        : AuditError("BackendUnavailable", what) {}
};

struct MalformedBackendResponseError : AuditError {
    explicit MalformedBackendResponseError(const std::string& what)
        : AuditError("MalformedBackendResponse", what) {}
};

struct NotNonImplementedError : AuditError {
    explicit NotNonImplementedError(const std::string& what)
        : AuditError("NotNonImplemented", what) {}
};

struct MismatchedRunError : AuditError {
    explicit MismatchedRunError(const std::string& what)
        : AuditError("MismatchedRun", what) {}
};

struct MissingLabelError : AuditError {
    explicit MissingLabelError(const std::string& what)
        : AuditError("MissingLabel", what) {}
};

struct ZeroChecksError : AuditError {
    explicit ZeroChecksError(const std::string& what = "cost report requires checks > 0")
        : AuditError("ZeroChecks", what) {}
};

struct ConfigError : AuditError {
    explicit ConfigError(const std::string& what)
        : AuditError("ConfigError", what) {}
};

} // namespace clause_audit
