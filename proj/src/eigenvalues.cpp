#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"
#include "heegner/surjectivity.hpp"

namespace heegner::surjectivity {

std::string to_string(Provenance p) { return p == Provenance::Theta ? "theta" : "oracle"; }

EigenvalueTable::EigenvalueTable(u64 ell) : ell_(ell) {
    if (!arith::is_prime(ell)) throw std::invalid_argument("EigenvalueTable: level must be prime");
}

void EigenvalueTable::set_prime(u64 p, const EigenvalueEntry& e) {
    if (!arith::is_prime(p) || p == ell_)
        throw std::invalid_argument("EigenvalueTable: entry must be a prime different from the level");
    if (e.value * e.value > 4 * static_cast<i64>(p))
        throw InvariantError("EigenvalueTable: a_G(" + std::to_string(p) + ") = " + std::to_string(e.value) +
                             " violates the Hasse bound");
    entries_[p] = e;
    for (auto it = powers_.begin(); it != powers_.end();) it = (it->first.first == p) ? powers_.erase(it) : ++it;
}

const EigenvalueEntry& EigenvalueTable::entry(u64 p) const {
    auto it = entries_.find(p);
    if (it == entries_.end())
        throw std::out_of_range("EigenvalueTable: no eigenvalue stored for p = " + std::to_string(p));
    return it->second;
}

i64 EigenvalueTable::at_prime_power(u64 p, int m) const {
    if (m < 0) return 0;
    if (m == 0) return 1;
    if (m == 1) return at_prime(p);
    auto key = std::make_pair(p, m);
    if (auto it = powers_.find(key); it != powers_.end()) return it->second;
    const i64 v = arith::checked_mul(at_prime(p), at_prime_power(p, m - 1)) -
                  arith::checked_mul(static_cast<i64>(p), at_prime_power(p, m - 2));
    powers_[key] = v;
    return v;
}

i64 EigenvalueTable::at(u64 n) const {
    if (n == 0) throw std::invalid_argument("EigenvalueTable::at: n must be positive");
    i64 v = 1;
    for (const auto& pe : arith::factorize(n).factors()) {
        if (pe.p == ell_) throw std::invalid_argument("EigenvalueTable::at: n must be coprime to the level");
        v = arith::checked_mul(v, at_prime_power(pe.p, pe.e));
    }
    return v;
}

Rational cusp_coefficient(const GenusRecord& g, std::size_t s, i64 n) {
    if (s >= g.size()) throw std::invalid_argument("cusp_coefficient: class index out of range");
    // r(Q_s, n) - sum_t r(Q_t, n)/|Aut_t| / sum_t 1/|Aut_t|
    Rational weighted(0);
    i64 own = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        const auto r = static_cast<i64>(ternary::rep_count(g.classes[t].form, n));
        if (t == s) own = r;
        weighted += Rational(r, static_cast<i64>(g.classes[t].automorphs));
    }
    return Rational(own) - weighted / g.automorph_mass();
}

std::vector<i64> auxiliary_discriminants(const GenusRecord& g, u64 p, std::size_t s) {
    std::vector<i64> out;
    const auto ell = static_cast<i64>(g.ell);
    for (i64 D0 = -3; D0 >= -100; --D0) {
        if (!arith::is_fundamental_discriminant(D0)) continue;
        if (arith::kronecker(D0, ell) != -1) continue;
        if ((-D0) % static_cast<i64>(p) == 0) continue;
        if (cusp_coefficient(g, s, -D0).is_zero()) continue;
        out.push_back(D0);
    }
    return out;
}

EigenvalueDerivation derive_eigenvalue(const GenusRecord& g, u64 p, std::size_t s, std::optional<i64> D0) {
    if (!arith::is_prime(p)) throw std::invalid_argument("derive_eigenvalue: p must be prime");
    if ((g.N * g.ell) % p == 0) throw std::invalid_argument("derive_eigenvalue: p must not divide N*ell");
    i64 d0 = 0;
    if (D0) {
        d0 = *D0;
        if (d0 >= 0 || !arith::is_fundamental_discriminant(d0))
            throw std::invalid_argument("derive_eigenvalue: D0 must be a negative fundamental discriminant");
        if (arith::kronecker(d0, static_cast<i64>(g.ell)) != -1)
            throw std::invalid_argument("derive_eigenvalue: ell must be inert in Q(sqrt(D0))");
        if ((-d0) % static_cast<i64>(p) == 0) throw std::invalid_argument("derive_eigenvalue: p divides D0");
    } else {
        const auto ell = static_cast<i64>(g.ell);
        for (i64 cand = -3; cand >= -100 && d0 == 0; --cand) {
            if (!arith::is_fundamental_discriminant(cand) || arith::kronecker(cand, ell) != -1) continue;
            if ((-cand) % static_cast<i64>(p) == 0) continue;
            if (!cusp_coefficient(g, s, -cand).is_zero()) d0 = cand;
        }
        if (d0 == 0)
            throw InvariantError("derive_eigenvalue: no usable auxiliary discriminant with |D0| <= 100 for p = " +
                                 std::to_string(p));
    }
    EigenvalueDerivation out;
    out.D0 = d0;
    out.base = cusp_coefficient(g, s, -d0);
    if (out.base.is_zero()) throw std::invalid_argument("derive_eigenvalue: a_g(|D0|) vanishes");
    const i64 n = arith::checked_mul(-d0, arith::checked_mul(static_cast<i64>(p), static_cast<i64>(p)));
    out.lifted = cusp_coefficient(g, s, n);
    const Rational val = out.lifted / out.base + Rational(arith::kronecker(d0, static_cast<i64>(p)));
    if (!val.is_integer())
        throw InvariantError("derive_eigenvalue: non-integral eigenvalue " + val.str() + " at p = " + std::to_string(p));
    out.value = val.num();
    return out;
}

void extend_eigenvalue_table(EigenvalueTable& table, const GenusRecord& g, u64 pmax, unsigned threads) {
    if (table.ell() != g.ell) throw std::invalid_argument("extend_eigenvalue_table: level mismatch");
    std::vector<u64> todo;
    for (u64 p : arith::primes_up_to(pmax))
        if (p != g.ell && !table.has_prime(p)) todo.push_back(p);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, todo.size())));

    std::vector<EigenvalueDerivation> results(todo.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            try {
                results[i] = derive_eigenvalue(g, todo[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < todo.size(); ++i)
        table.set_prime(todo[i], EigenvalueEntry{results[i].value, Provenance::Theta, results[i].D0});
    table.set_prime_bound(std::max(table.prime_bound(), pmax));
}

EigenvalueTable build_eigenvalue_table(const GenusRecord& g, u64 pmax, unsigned threads) {
    EigenvalueTable table(g.ell);
    extend_eigenvalue_table(table, g, pmax, threads);
    return table;
}

i64 elliptic_curve_ap(const std::array<i64, 5>& ai, u64 p) {
    if (!arith::is_prime(p)) throw std::invalid_argument("elliptic_curve_ap: p must be prime");
    const auto P = static_cast<i64>(p);
    auto mod = [P](i64 v) { return ((v % P) + P) % P; };
    const i64 a1 = mod(ai[0]), a2 = mod(ai[1]), a3 = mod(ai[2]), a4 = mod(ai[3]), a6 = mod(ai[4]);
    i64 points = 1;  // point at infinity
    for (i64 x = 0; x < P; ++x) {
        const i64 rhs = mod(mod(mod(x * x) * x) + mod(a2 * mod(x * x)) + mod(a4 * x) + a6);
        for (i64 y = 0; y < P; ++y) {
            const i64 lhs = mod(mod(y * y) + mod(a1 * mod(x * y)) + mod(a3 * y));
            if (lhs == rhs) ++points;
        }
    }
    return P + 1 - points;
}

std::optional<std::array<i64, 5>> oracle_curve(u64 ell) {
    if (ell == 11) return std::array<i64, 5>{0, -1, 1, -10, -20};
    return std::nullopt;
}

}  // namespace heegner::surjectivity
