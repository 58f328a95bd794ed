#include "heegner/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heegner::arith {

Factorization::Factorization(u64 n) : n_(n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        factors_.push_back({p, e});
    }
    if (n > 1) factors_.push_back({n, 1});
}

bool Factorization::divisible_by(u64 p) const { return exponent(p) > 0; }

int Factorization::exponent(u64 p) const {
    for (const auto& f : factors_)
        if (f.p == p) return f.e;
    return 0;
}

Factorization factorize(u64 n) { return Factorization(n); }

bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<u64> primes_up_to(u64 bound) {
    std::vector<u64> out;
    if (bound < 2) return out;
    std::vector<bool> comp(bound + 1, false);
    for (u64 i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

u64 next_prime(u64 n) {
    u64 m = n + 1;
    while (!is_prime(m)) ++m;
    return m;
}

namespace {

int kron2(i64 a) {
    if (a % 2 == 0) return 0;
    i64 r = ((a % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
}

// Jacobi symbol (a/n) for odd n > 0.
int jacobi(i64 a, i64 n) {
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    while (n % 2 == 0) {
        int k = kron2(a);
        if (k == 0) return 0;
        result *= k;
        n /= 2;
    }
    if (n == 1) return result;
    return result * jacobi(a, n);
}

int moebius(u64 n) {
    auto f = factorize(n);
    for (const auto& pe : f.factors())
        if (pe.e > 1) return 0;
    return (f.factors().size() % 2 == 0) ? 1 : -1;
}

u64 sigma0(u64 n) {
    u64 s = 1;
    for (const auto& pe : factorize(n).factors()) s *= static_cast<u64>(pe.e + 1);
    return s;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (const auto& pe : factorize(n).factors()) r = r / pe.p * (pe.p - 1);
    return r;
}

int omega(u64 n) { return static_cast<int>(factorize(n).factors().size()); }

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out{1};
    for (const auto& pe : factorize(n).factors()) {
        std::size_t sz = out.size();
        u64 pk = 1;
        for (int k = 1; k <= pe.e; ++k) {
            pk *= pe.p;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<u64> square_divisors(u64 n) {
    std::vector<u64> out{1};
    for (const auto& pe : factorize(n).factors()) {
        std::size_t sz = out.size();
        u64 pk = 1;
        for (int k = 1; 2 * k <= pe.e; ++k) {
            pk *= pe.p;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

unsigned __int128 isqrt128(unsigned __int128 n) {
    using u128 = unsigned __int128;
    if (n <= UINT64_MAX) {
        const auto small = static_cast<u64>(n);
        u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(small)));
        while (r > 0 && (r > UINT32_MAX || r * r > small)) --r;
        while (r + 1 <= UINT32_MAX && (r + 1) * (r + 1) <= small) ++r;
        return r;
    }
    u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
    const u128 limit = static_cast<u128>(UINT64_MAX);
    if (r > limit) r = limit;
    while (r * r > n) --r;
    while (r + 1 <= limit && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 isqrt(u64 n) { return static_cast<u64>(isqrt128(n)); }

bool is_square(u64 n, u64* root) {
    u64 r = isqrt(n);
    if (root) *root = r;
    return r * r == n;
}

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

__int128 floor_div128(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

__int128 ceil_div128(__int128 a, __int128 b) { return -floor_div128(-a, b); }

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
    return r;
}

i64 checked_pow(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

bool is_fundamental_discriminant(i64 d) {
    if (d == 0 || d == 1) return false;
    i64 m = ((d % 4) + 4) % 4;
    auto squarefree = [](i64 x) {
        if (x < 0) x = -x;
        for (const auto& pe : factorize(static_cast<u64>(x)).factors())
            if (pe.e > 1) return false;
        return true;
    };
    if (m == 1) return squarefree(d);
    if (m != 0) return false;
    i64 q = d / 4;
    i64 qm = ((q % 4) + 4) % 4;
    return (qm == 2 || qm == 3) && squarefree(q);
}

}  // namespace heegner::arith
