#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heegner/ternary_qf.hpp"

namespace heegner::cache {

constexpr const char* kCacheDirEnv = "HEEGNER_CACHE_DIR";

// JSON block cache for theta coefficients r(Q, n), lo <= n <= hi.
class ThetaCache {
public:
    ThetaCache(std::filesystem::path dir, std::ostream& warn);

    // Directory from HEEGNER_CACHE_DIR, if set.
    static std::optional<std::filesystem::path> default_dir();

    std::filesystem::path block_path(const ternary::TernaryForm& q, ternary::i64 lo, ternary::i64 hi) const;

    // Returns the block only if its checksum and one randomly chosen,
    // recomputed coefficient both match; warns on stderr otherwise.
    std::optional<std::vector<std::uint64_t>> load(const ternary::TernaryForm& q, ternary::i64 lo, ternary::i64 hi);
    void store(const ternary::TernaryForm& q, ternary::i64 lo, ternary::i64 hi, const std::vector<std::uint64_t>& coeffs);

    // load, or compute and store
    std::vector<std::uint64_t> fetch(const ternary::TernaryForm& q, ternary::i64 lo, ternary::i64 hi, unsigned threads = 1);

private:
    std::filesystem::path dir_;
    std::ostream& warn_;
};

std::string checksum(const ternary::Mat3& gram, ternary::i64 lo, ternary::i64 hi, const std::vector<std::uint64_t>& coeffs);

}  // namespace heegner::cache
