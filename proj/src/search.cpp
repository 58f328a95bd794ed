#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/binary_qf.hpp"
#include "heegner/errors.hpp"
#include "heegner/surjectivity.hpp"

namespace heegner::surjectivity {

using boost::multiprecision::cpp_int;

namespace {

cpp_int big(i64 v) { return cpp_int(v); }

cpp_int big_pow(u64 p, int m) {
    cpp_int r = 1;
    for (int i = 0; i < m; ++i) r *= p;
    return r;
}

int sign_of(u64 d, const std::map<u64, int>& eps) {
    int s = 1;
    for (const auto& pe : arith::factorize(d).factors()) {
        auto it = eps.find(pe.p);
        if (it == eps.end()) throw std::invalid_argument("r_c: sign pattern misses prime " + std::to_string(pe.p));
        for (int k = 0; k < pe.e; ++k) s *= it->second;
    }
    return s;
}

}  // namespace

ExtRational r_c(const EigenvalueTable& table, u64 c, const std::map<u64, int>& eps) {
    if (c == 0) throw std::invalid_argument("r_c: c must be positive");
    if (c % table.ell() == 0) throw std::invalid_argument("r_c: c must be coprime to the level");
    i64 num = 0;
    i64 den = 0;
    for (u64 c1 : arith::divisors(c)) {
        const int mu1 = arith::moebius(c1);
        if (mu1 == 0) continue;
        num += mu1 * sign_of(c1, eps) * static_cast<i64>(c / c1);
        i64 inner = 0;
        for (u64 c2 : arith::divisors(c / c1)) {
            const int mu2 = arith::moebius(c2);
            if (mu2 == 0) continue;
            inner += mu2 * sign_of(c2, eps) * table.at(c / (c1 * c2));
        }
        den += mu1 * inner;
    }
    if (den == 0) return ExtRational::inf();
    return ExtRational::of(Rational(num, std::abs(den)));
}

ExtRational r_prime_power(const EigenvalueTable& table, u64 p, int m, int eps) {
    if (m == 0) return ExtRational::of(Rational(1));
    const auto P = static_cast<i64>(p);
    const i64 num = arith::checked_mul(arith::checked_pow(P, m - 1), P - eps);
    auto a = [&](int k) { return table.at_prime_power(p, k); };
    const i64 den = (a(m) - eps * a(m - 1)) - (a(m - 1) - eps * a(m - 2));
    if (den == 0) return ExtRational::inf();
    return ExtRational::of(Rational(num, std::abs(den)));
}

WorstCase r_c_worst(const EigenvalueTable& table, u64 c) {
    if (c % table.ell() == 0) throw std::invalid_argument("r_c: c must be coprime to the level");
    WorstCase w{ExtRational::of(Rational(1)), {}};
    for (const auto& pe : arith::factorize(c).factors()) {
        const ExtRational plus = r_prime_power(table, pe.p, pe.e, 1);
        const ExtRational minus = r_prime_power(table, pe.p, pe.e, -1);
        const bool take_minus = minus < plus;
        w.value = w.value * (take_minus ? minus : plus);
        w.pattern[pe.p] = take_minus ? -1 : 1;
    }
    return w;
}

Rational tilde_r_squared(u64 c) {
    const auto phi = static_cast<__int128>(arith::euler_phi(c));
    const auto s0 = static_cast<__int128>(arith::sigma0(c));
    __int128 den = s0 * s0 * static_cast<__int128>(c);
    for (int i = 0; i < arith::omega(c); ++i) den *= 16;
    return Rational::from_wide(phi * phi, den);
}

bool tilde_r_exceeds(u64 c, const Rational& a) {
    // phi^2 den(a)^2 > num(a)^2 16^v sigma0^2 c
    const cpp_int lhs = cpp_int(arith::euler_phi(c)) * arith::euler_phi(c) * big(a.den()) * big(a.den());
    const cpp_int rhs = big(a.num()) * big(a.num()) * big_pow(16, arith::omega(c)) * cpp_int(arith::sigma0(c)) *
                        arith::sigma0(c) * c;
    return lhs > rhs;
}

bool at_least_tilde_r(const ExtRational& r, u64 c) {
    if (r.infinite) return true;
    const cpp_int lhs = big(r.value.num()) * big(r.value.num()) * big_pow(16, arith::omega(c)) *
                        cpp_int(arith::sigma0(c)) * arith::sigma0(c) * c;
    const cpp_int rhs = cpp_int(arith::euler_phi(c)) * arith::euler_phi(c) * big(r.value.den()) * big(r.value.den());
    return lhs >= rhs;
}

std::string to_string(PrimeCutoff c) { return c == PrimeCutoff::Pa ? "P_a" : "hasse"; }

bool beyond_prime_cutoff(u64 p, const Rational& a, PrimeCutoff kind) {
    if (kind == PrimeCutoff::Hasse) {
        // sqrt(p) > 2a + 1  <=>  p den^2 > (2 num + den)^2
        const cpp_int t = cpp_int(2) * big(a.num()) + big(a.den());
        return cpp_int(p) * big(a.den()) * big(a.den()) > t * t;
    }
    // p > (2a + sqrt(4a^2 + 1))^2  <=>  p - 1 > 4 a sqrt(p)  <=>  (p-1)^2 > 16 a^2 p
    const cpp_int lhs = cpp_int(p - 1) * (p - 1) * big(a.den()) * big(a.den());
    const cpp_int rhs = cpp_int(16) * big(a.num()) * big(a.num()) * p;
    return lhs > rhs;
}

long double prime_cutoff(const Rational& a) {
    const long double x = a.to_long_double();
    const long double r = 2 * x + std::sqrt(4 * x * x + 1);
    return r * r;
}

int exponent_cutoff(u64 p, const Rational& a) {
    // r~_{p^m} > a  <=>  p^m (p-1)^2 den^2 > 16 num^2 (m+1)^2 p^2; increasing in m from m = 2 on
    int last = 0;
    cpp_int pm = 1;
    for (int m = 1;; ++m) {
        pm *= p;
        const bool exceeds = pm * (p - 1) * (p - 1) * big(a.den()) * big(a.den()) >
                             cpp_int(16) * big(a.num()) * big(a.num()) * (m + 1) * (m + 1) * p * p;
        if (!exceeds) last = m;
        if (exceeds && m >= 3) return last;
    }
}

u64 required_prime_bound(const Rational& a, u64 window, PrimeCutoff kind) {
    u64 x = 1;
    while (!beyond_prime_cutoff(x + 1, a, kind)) ++x;
    return x * window;
}

CandidateSets candidate_sets(const EigenvalueTable& table, const Rational& a, u64 window, PrimeCutoff kind) {
    if (a.sign() <= 0) throw std::invalid_argument("candidate_sets: threshold must be positive");
    CandidateSets out;
    out.a = a;
    const u64 bound = required_prime_bound(a, window, kind);
    for (u64 p : arith::primes_up_to(bound)) {
        if (p == table.ell()) continue;
        if (!table.has_prime(p))
            throw std::invalid_argument("candidate_sets: eigenvalue table lacks p = " + std::to_string(p));
        out.largest_prime_checked = p;
        const int mmax = exponent_cutoff(p, a) * static_cast<int>(window) + static_cast<int>(window) - 1;
        for (int m = 1; m <= mmax; ++m) {
            const ExtRational plus = r_prime_power(table, p, m, 1);
            const ExtRational minus = r_prime_power(table, p, m, -1);
            const bool take_minus = minus < plus;
            const ExtRational r = take_minus ? minus : plus;
            if (r.infinite || r.value > a) continue;
            out.entries.push_back({p, m, r.value, take_minus ? -1 : 1});
            auto it = out.min_r.find(p);
            const Rational capped = std::min(r.value, Rational(1));
            if (it == out.min_r.end())
                out.min_r.emplace(p, capped);
            else
                it->second = std::min(it->second, capped);
        }
    }
    return out;
}

Rational r_min(const EigenvalueTable& table) {
    Rational prod(1);
    for (const auto& [p, r] : candidate_sets(table, Rational(1)).min_r) prod *= r;
    return prod;
}

Rational class_threshold(const GenusRecord& g, std::size_t s) {
    if (g.size() != 2) throw std::invalid_argument("class_threshold: the search needs a 2-class genus");
    const Rational ratio(g.classes[1 - s].unit_weight, g.classes[s].unit_weight);
    return std::max(Rational(1), ratio);
}

namespace {

void search_class(const EigenvalueTable& table, ClassSearch& cs) {
    const auto& entries = cs.sets.entries;
    std::vector<u64> primes;
    for (const auto& e : entries)
        if (primes.empty() || primes.back() != e.p) primes.push_back(e.p);
    // suffix[i] = prod_{j >= i} min_r(primes[j])
    std::vector<Rational> suffix(primes.size() + 1, Rational(1));
    for (std::size_t i = primes.size(); i-- > 0;) suffix[i] = suffix[i + 1] * cs.sets.min_r.at(primes[i]);

    std::function<void(u64, const Rational&, std::size_t, std::map<u64, int>&)> dfs =
        [&](u64 c, const Rational& r, std::size_t start, std::map<u64, int>& pattern) {
            if (c > 1 && r <= cs.m_s) cs.members.push_back({c, r, pattern, static_cast<int>(pattern.size())});
            if (start >= primes.size()) return;
            const Rational a_child = cs.m_s / (r * suffix[start]);
            for (const auto& e : entries) {
                if (e.p < primes[start] || e.r > a_child) continue;
                const std::size_t idx =
                    static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), e.p) - primes.begin());
                const u64 pm = static_cast<u64>(arith::checked_pow(static_cast<i64>(e.p), e.m));
                pattern[e.p] = e.eps;
                dfs(static_cast<u64>(arith::checked_mul(static_cast<i64>(c), static_cast<i64>(pm))), r * e.r,
                    idx + 1, pattern);
                pattern.erase(e.p);
            }
        };
    std::map<u64, int> pattern;
    dfs(1, Rational(1), 0, pattern);
    std::sort(cs.members.begin(), cs.members.end(), [](const auto& x, const auto& y) { return x.c < y.c; });
    (void)table;
}

}  // namespace

SearchReport dfs_search(const GenusRecord& g, EigenvalueTable& table, const SearchOptions& opts) {
    if (g.size() != 2) throw std::invalid_argument("dfs_search: the genus must have exactly 2 classes");
    if (g.N != 1) throw std::invalid_argument("dfs_search: only N = 1 is supported");

    SearchReport rep;
    rep.ell = g.ell;
    rep.N = g.N;

    extend_eigenvalue_table(table, g, required_prime_bound(Rational(1), 1, opts.cutoff), opts.threads);
    rep.c1 = candidate_sets(table, Rational(1), 1, opts.cutoff);
    rep.r_min = Rational(1);
    for (const auto& [p, r] : rep.c1.min_r) rep.r_min *= r;

    for (std::size_t s = 0; s < g.size(); ++s) {
        ClassSearch cs;
        cs.cls = s;
        cs.weight = g.classes[s].unit_weight;
        cs.m_s = opts.threshold ? *opts.threshold : class_threshold(g, s);
        cs.a = cs.m_s / rep.r_min;
        extend_eigenvalue_table(table, g, required_prime_bound(cs.a, 1, opts.cutoff), opts.threads);
        cs.sets = candidate_sets(table, cs.a, 1, opts.cutoff);
        search_class(table, cs);
        rep.classes.push_back(std::move(cs));
    }

    std::map<u64, SearchNode> merged;
    for (const auto& cs : rep.classes)
        for (const auto& node : cs.members) merged.emplace(node.c, node);
    for (auto& [c, node] : merged) {
        // report the worst case over all sign patterns for every conductor
        const WorstCase w = r_c_worst(table, c);
        if (w.value.infinite) throw InvariantError("dfs_search: member with infinite r_c");
        node.r = w.value.value;
        node.pattern = w.pattern;
        rep.conductors.push_back(node);
        rep.by_v[node.v].push_back(c);
    }

    rep.assumptions.sign_patterns =
        "worst case: r_c minimized over independent signs +1/-1 at every prime of c (multiplicative patterns)";
    rep.assumptions.threshold =
        opts.threshold ? "override: every class uses threshold " + opts.threshold->str()
                       : "m_s = max(1, w_s'/w_s) with unit weights w = |Aut(Q_s)|/" + std::to_string(g.calibration) +
                             "; one search per class, union reported";
    rep.assumptions.root = "c = 1 is the root of the search and is not counted";
    rep.assumptions.eigenvalues = "a_G(p) = a_g(|D0| p^2)/a_g(|D0|) + (D0/p) from theta coefficients";
    rep.assumptions.recursion =
        "child (p, m) of c' admitted when r_{p^m} <= m_s / (r_{c'} * prod_{q > maxprime(c')} min_m r_{q^m})";
    rep.assumptions.prime_cutoff =
        opts.cutoff == PrimeCutoff::Pa ? "primes p <= P_a = (2a + sqrt(4a^2+1))^2, exponents m <= M_{p,a} via r~"
                                       : "primes p <= (2a+1)^2 (Hasse), exponents m <= M_{p,a} via r~";
    return rep;
}

SearchReport dfs_search(u64 ell, u64 N) {
    const GenusRecord g = genus::gross_genus(ell, N);
    EigenvalueTable table(ell);
    return dfs_search(g, table);
}

std::string pattern_string(const std::map<u64, int>& pattern) {
    std::string s;
    for (const auto& [p, e] : pattern) {
        if (!s.empty()) s += ",";
        s += std::to_string(p) + (e > 0 ? "+" : "-");
    }
    return s;
}

BoundReport theorem_bound(const GenusRecord& g, i64 D, u64 c) {
    if (g.size() != 2) throw std::invalid_argument("theorem_bound: the lemma form needs a 2-class genus");
    const binary_qf::OrderParams base(D, 1);
    if (arith::kronecker(D, static_cast<i64>(g.ell)) != -1)
        throw std::invalid_argument("theorem_bound: ell must be inert in Q(sqrt(D))");
    if (c == 0 || c % g.ell == 0) throw std::invalid_argument("theorem_bound: c must be positive and coprime to ell");

    BoundReport rep;
    rep.c = c;
    rep.D = D;
    const int v = arith::omega(c);
    const u64 s0 = arith::sigma0(c);
    const u64 phi = arith::euler_phi(c);
    for (std::size_t s = 0; s < g.size(); ++s) {
        const Rational m = class_threshold(g, s);
        // phi^2 den^2 > num^2 16^v sigma0^2 c
        const bool ok = cpp_int(phi) * phi * big(m.den()) * big(m.den()) >
                        big(m.num()) * big(m.num()) * big_pow(16, v) * cpp_int(s0) * s0 * c;
        rep.lemma.push_back({s, m, ok});
    }

    if (c <= 2) {
        rep.applicable = false;
        rep.note = "c <= 2: no conclusion from the theorem form";
        return rep;
    }
    const long double logc = std::log(static_cast<long double>(c));
    const long double lhs = std::sqrt(static_cast<long double>(c)) /
                            (std::pow(2.0L, 2 * v + 1) * static_cast<long double>(s0) * logc);
    const long double uh = static_cast<long double>(binary_qf::unit_count(base)) /
                           static_cast<long double>(binary_qf::class_number_order(base));
    for (std::size_t s = 0; s < g.size(); ++s) {
        const long double coeff = cusp_coefficient(g, s, -D).abs().to_long_double();
        const long double common = uh * coeff / std::log(2.0L);
        TheoremVerdict t{};
        t.cls = s;
        t.lhs = lhs;
        t.rhs_unit_weights = common * g.mass().to_long_double();
        t.rhs_automorph_weights = common * g.automorph_mass().to_long_double();
        t.guaranteed_unit_weights = lhs > t.rhs_unit_weights;
        t.guaranteed_automorph_weights = lhs > t.rhs_automorph_weights;
        t.calibration_sensitive = t.guaranteed_unit_weights != t.guaranteed_automorph_weights;
        rep.theorem.push_back(t);
    }
    return rep;
}

}  // namespace heegner::surjectivity
