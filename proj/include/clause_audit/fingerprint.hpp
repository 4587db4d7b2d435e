#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clause_audit {

// 64-bit FNV-1a; used for repo fingerprints where a stable, dependency-free
// content hash is enough (no adversarial inputs).
class Fnv1a64 {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
    }

    uint64_t value() const noexcept { return state_; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<size_t>(i)] = digits[v & 0xF];
            v >>= 4;
        }
        return out;
    }

private:
    uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Fingerprint over (path, content) pairs; callers pass them pre-sorted by
/// path so the digest is independent of traversal order.
inline std::string fingerprint_files(
    const std::vector<std::pair<std::string, std::string>>& files) {
    Fnv1a64 h;
    for (const auto& [path, content] : files) {
        h.update(path);
        h.update(std::string_view("\0", 1));
        h.update(content);
        h.update(std::string_view("\0", 1));
    }
    return h.hex();
}

} // namespace clause_audit
