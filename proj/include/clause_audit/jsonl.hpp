#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clause_audit/errors.hpp"

namespace clause_audit {

// All artifacts are serialized with insertion-ordered objects so that field
// order matches the documented record layout and files are byte-stable.
using Json = nlohmann::ordered_json;

namespace jsonl {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw AuditError("IoError", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw AuditError("IoError", "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// One JSON object per line, UTF-8, LF endings, trailing newline.
inline void write_records(const std::filesystem::path& path, const std::vector<Json>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += rec.dump();
        out += '\n';
    }
    write_file(path, out);
}

inline std::vector<Json> parse_lines(std::string_view content, const std::string& origin) {
    std::vector<Json> records;
    size_t pos = 0;
    int lineno = 0;
    while (pos < content.size()) {
        size_t nl = content.find('\n', pos);
        std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() : nl + 1;
        ++lineno;
        std::string trimmed(line);
        if (trimmed.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json rec = Json::parse(trimmed, nullptr, false);
        if (rec.is_discarded())
            throw AuditError("IoError", origin + ":" + std::to_string(lineno) + ": invalid JSON line");
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<Json> read_records(const std::filesystem::path& path) {
    return parse_lines(read_file(path), path.string());
}

} // namespace jsonl
} // namespace clause_audit
