#include "heegner/theta_cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace heegner::cache {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using ternary::i64;

namespace {

// FNV-1a over the 64-bit words
struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void add(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
};

class LockFile {
public:
    explicit LockFile(fs::path path) : path_(std::move(path)) {
        using namespace std::chrono_literals;
        for (int attempt = 0; attempt < 600; ++attempt) {
            fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
            if (fd_ >= 0) return;
            std::this_thread::sleep_for(50ms);
        }
        throw std::runtime_error("cache: could not acquire lock " + path_.string());
    }
    ~LockFile() {
        if (fd_ >= 0) {
            ::close(fd_);
            std::error_code ec;
            fs::remove(path_, ec);
        }
    }
    LockFile(const LockFile&) = delete;
    LockFile& operator=(const LockFile&) = delete;

private:
    fs::path path_;
    int fd_ = -1;
};

}  // namespace

std::string checksum(const ternary::Mat3& gram, i64 lo, i64 hi, const std::vector<std::uint64_t>& coeffs) {
    Fnv f;
    for (const auto& row : gram)
        for (i64 e : row) f.add(static_cast<std::uint64_t>(e));
    f.add(static_cast<std::uint64_t>(lo));
    f.add(static_cast<std::uint64_t>(hi));
    for (auto c : coeffs) f.add(c);
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << f.h;
    return os.str();
}

ThetaCache::ThetaCache(fs::path dir, std::ostream& warn) : dir_(std::move(dir)), warn_(warn) {
    fs::create_directories(dir_);
}

std::optional<fs::path> ThetaCache::default_dir() {
    const char* env = std::getenv(kCacheDirEnv);
    if (env == nullptr || *env == '\0') return std::nullopt;
    return fs::path(env);
}

fs::path ThetaCache::block_path(const ternary::TernaryForm& q, i64 lo, i64 hi) const {
    std::ostringstream name;
    name << "theta";
    for (i64 c : q.coefficients()) name << "_" << c;
    name << "_" << lo << "_" << hi << ".json";
    return dir_ / name.str();
}

std::optional<std::vector<std::uint64_t>> ThetaCache::load(const ternary::TernaryForm& q, i64 lo, i64 hi) {
    const fs::path path = block_path(q, lo, hi);
    if (!fs::exists(path)) return std::nullopt;
    try {
        std::ifstream in(path);
        const json j = json::parse(in);
        std::vector<std::uint64_t> coeffs = j.at("coeffs").get<std::vector<std::uint64_t>>();
        ternary::Mat3 gram{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) gram[r][c] = j.at("gram").at(r).at(c).get<i64>();
        const bool key_ok = gram == q.gram() && j.at("lo").get<i64>() == lo && j.at("hi").get<i64>() == hi &&
                            coeffs.size() == static_cast<std::size_t>(hi - lo + 1);
        if (!key_ok || j.at("checksum").get<std::string>() != checksum(gram, lo, hi, coeffs)) {
            warn_ << "cache: checksum mismatch in " << path.string() << ", recomputing\n";
            return std::nullopt;
        }
        std::mt19937_64 rng(std::random_device{}());
        const i64 n = std::uniform_int_distribution<i64>(lo, hi)(rng);
        if (ternary::rep_count(q, n) != coeffs[static_cast<std::size_t>(n - lo)]) {
            warn_ << "cache: coefficient r(" << n << ") in " << path.string() << " failed re-verification, recomputing\n";
            return std::nullopt;
        }
        return coeffs;
    } catch (const std::exception& e) {
        warn_ << "cache: unreadable block " << path.string() << " (" << e.what() << "), recomputing\n";
        return std::nullopt;
    }
}

void ThetaCache::store(const ternary::TernaryForm& q, i64 lo, i64 hi, const std::vector<std::uint64_t>& coeffs) {
    const fs::path path = block_path(q, lo, hi);
    LockFile lock(fs::path(path.string() + ".lock"));
    json j;
    j["gram"] = json::array();
    for (const auto& row : q.gram()) j["gram"].push_back(json::array({row[0], row[1], row[2]}));
    j["lo"] = lo;
    j["hi"] = hi;
    j["coeffs"] = coeffs;
    j["checksum"] = checksum(q.gram(), lo, hi, coeffs);
    const fs::path tmp = fs::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp);
        out << j.dump();
        if (!out) throw std::runtime_error("cache: failed to write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<std::uint64_t> ThetaCache::fetch(const ternary::TernaryForm& q, i64 lo, i64 hi, unsigned threads) {
    if (lo < 0 || hi < lo) throw std::invalid_argument("cache: invalid coefficient range");
    if (auto hit = load(q, lo, hi)) return *hit;
    const auto full = ternary::theta_coeffs(q, hi, threads);
    std::vector<std::uint64_t> block(full.begin() + lo, full.end());
    store(q, lo, hi, block);
    return block;
}

}  // namespace heegner::cache
