#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace heegner::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
    u64 p;
    int e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization by trial division, primes ascending.
class Factorization {
public:
    explicit Factorization(u64 n);

    u64 value() const { return n_; }
    const std::vector<PrimePower>& factors() const& { return factors_; }
    std::vector<PrimePower> factors() && { return std::move(factors_); }
    bool divisible_by(u64 p) const;
    int exponent(u64 p) const;

private:
    u64 n_;
    std::vector<PrimePower> factors_;
};

Factorization factorize(u64 n);  // throws std::invalid_argument for n == 0

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 bound);
u64 next_prime(u64 n);  // smallest prime > n

// Kronecker symbol (a/n) for all integers a, n:
// (a/0) = 1 if a = ±1 else 0; (a/-1) = -1 if a < 0 else 1;
// (a/2) = 0 if a even, 1 if a = ±1 mod 8, -1 if a = ±3 mod 8.
int kronecker(i64 a, i64 n);

int moebius(u64 n);
u64 sigma0(u64 n);
u64 euler_phi(u64 n);
int omega(u64 n);  // number of distinct prime factors
std::vector<u64> divisors(u64 n);
std::vector<u64> square_divisors(u64 n);  // e with e^2 | n

u64 isqrt(u64 n);
unsigned __int128 isqrt128(unsigned __int128 n);
bool is_square(u64 n, u64* root = nullptr);

i64 gcd(i64 a, i64 b);
i64 floor_div(i64 a, i64 b);
i64 ceil_div(i64 a, i64 b);
__int128 floor_div128(__int128 a, __int128 b);
__int128 ceil_div128(__int128 a, __int128 b);

i64 checked_mul(i64 a, i64 b);  // throws std::overflow_error
i64 checked_pow(i64 base, int exp);

bool is_fundamental_discriminant(i64 d);

}  // namespace heegner::arith
