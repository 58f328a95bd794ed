#include <doctest.h>

#include <set>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"
#include "heegner/genus.hpp"
#include "heegner/surjectivity.hpp"
#include "oracles.hpp"

using namespace heegner;
using namespace heegner::surjectivity;

namespace {

const GenusRecord& genus_of(u64 ell) {
    static std::map<u64, GenusRecord> cache;
    auto it = cache.find(ell);
    if (it == cache.end()) it = cache.emplace(ell, genus::gross_genus(ell)).first;
    return it->second;
}

const SearchReport& report_of(u64 ell, EigenvalueTable** table_out = nullptr) {
    static std::map<u64, std::pair<EigenvalueTable, SearchReport>> cache;
    auto it = cache.find(ell);
    if (it == cache.end()) {
        EigenvalueTable t(ell);
        auto rep = dfs_search(genus_of(ell), t);
        it = cache.emplace(ell, std::make_pair(std::move(t), std::move(rep))).first;
    }
    if (table_out) *table_out = &it->second.first;
    return it->second.second;
}

bool primes_within(u64 c, u64 bound) {
    for (const auto& pp : arith::factorize(c).factors())
        if (pp.p > bound) return false;
    return true;
}

}  // namespace

TEST_SUITE("surjectivity") {

TEST_CASE("point-count oracles agree") {
    const auto curve = *oracle_curve(11);
    for (u64 p : arith::primes_up_to(60)) {
        const i64 brute = static_cast<i64>(p) + 1 - oracle::curve_points_brute(curve, static_cast<i64>(p));
        CHECK(elliptic_curve_ap(curve, p) == brute);
        if (p > 2) CHECK(oracle::curve_points(curve, static_cast<i64>(p)) == oracle::curve_points_brute(curve, static_cast<i64>(p)));
    }
    CHECK(elliptic_curve_ap(curve, 2) == -2);
    CHECK_FALSE(oracle_curve(17).has_value());
}

TEST_CASE("theta-derived eigenvalues match the point count at level 11") {
    const auto table = build_eigenvalue_table(genus_of(11), 50);
    const auto curve = *oracle_curve(11);
    for (u64 p : arith::primes_up_to(50)) {
        if (p == 11) {
            CHECK_FALSE(table.has_prime(p));
            continue;
        }
        CHECK(table.at_prime(p) == static_cast<i64>(p) + 1 - oracle::curve_points_brute(curve, static_cast<i64>(p)));
        CHECK(table.entry(p).provenance == Provenance::Theta);
    }
    CHECK(table.at_prime(2) == -2);
    CHECK(table.at(1) == 1);
}

TEST_CASE("eigenvalues do not depend on the auxiliary discriminant or the class") {
    for (u64 ell : {11ull, 17ull, 19ull}) {
        const auto& g = genus_of(ell);
        for (u64 p : arith::primes_up_to(20)) {
            if (p == ell) continue;
            CAPTURE(ell);
            CAPTURE(p);
            const auto aux = auxiliary_discriminants(g, p, 0);
            REQUIRE(aux.size() >= 2);
            const i64 v = derive_eigenvalue(g, p, 0, aux[0]).value;
            CHECK(derive_eigenvalue(g, p, 0, aux[1]).value == v);
            CHECK(derive_eigenvalue(g, p, 1).value == v);
        }
    }
}

TEST_CASE("Hasse bound and Hecke relations") {
    for (u64 ell : {11ull, 17ull, 19ull}) {
        const auto table = build_eigenvalue_table(genus_of(ell), 100);
        for (const auto& [p, e] : table.entries()) CHECK(e.value * e.value <= 4 * static_cast<i64>(p));
        for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
            if (p == ell) continue;
            CHECK(table.at_prime_power(p, 0) == 1);
            CHECK(table.at_prime_power(p, 1) == table.at_prime(p));
            for (int m = 1; m <= 6; ++m)
                CHECK(table.at_prime_power(p, m + 1) == table.at_prime(p) * table.at_prime_power(p, m) -
                                                          static_cast<i64>(p) * table.at_prime_power(p, m - 1));
        }
        for (u64 m = 1; m <= 100; ++m)
            for (u64 n = 1; n <= 100; ++n)
                if (arith::gcd(static_cast<i64>(m), static_cast<i64>(n)) == 1 && m % ell && n % ell)
                    CHECK(table.at(m * n) == table.at(m) * table.at(n));
    }
    EigenvalueTable t(11);
    CHECK_THROWS_AS(t.set_prime(2, {3, Provenance::Theta, -3}), InvariantError);
}

TEST_CASE("Deligne bound on composite indices") {
    EigenvalueTable* table = nullptr;
    report_of(11, &table);
    for (u64 n = 4; n <= 10000; ++n) {
        if (arith::is_prime(n) || n % 11 == 0 || !primes_within(n, table->prime_bound())) continue;
        const i64 a = table->at(n);
        const u64 s = arith::sigma0(n);
        CHECK(static_cast<u64>(a * a) <= s * s * n);
    }
}

TEST_CASE("cusp coefficients") {
    const auto& g = genus_of(11);
    const Rational ratio = Rational(g.classes[1].unit_weight, g.classes[0].unit_weight);
    for (i64 n = 1; n <= 400; ++n) {
        const Rational a0 = cusp_coefficient(g, 0, n);
        const Rational a1 = cusp_coefficient(g, 1, n);
        CHECK(a1 == -ratio * a0);
        const Rational avg = genus::genus_avg(g, n, false);
        if (Rational(static_cast<i64>(ternary::rep_count(g.classes[0].form, n))) == avg) CHECK(a0 == Rational(0));
    }
    CHECK(cusp_coefficient(g, 0, 3) ==
          Rational(static_cast<i64>(ternary::rep_count(g.classes[0].form, 3))) - genus::genus_avg(g, 3, false));
}

TEST_CASE("r_c basics") {
    EigenvalueTable* table = nullptr;
    report_of(11, &table);
    const auto one = r_c(*table, 1, {});
    CHECK_FALSE(one.infinite);
    CHECK(one.value == Rational(1));
    // r_c from the divisor sum equals the product of prime-power values
    for (u64 c = 2; c <= 3000; ++c) {
        if (c % 11 == 0 || !primes_within(c, table->prime_bound())) continue;
        const auto f = arith::factorize(c).factors();
        std::map<u64, int> eps;
        for (std::size_t i = 0; i < f.size(); ++i) eps[f[i].p] = (c >> i) & 1 ? -1 : 1;
        const auto direct = r_c(*table, c, eps);
        ExtRational prod{false, Rational(1)};
        for (const auto& pp : f) prod = prod * r_prime_power(*table, pp.p, pp.e, eps[pp.p]);
        CHECK(direct == prod);
    }
    // multiplicativity for coprime pairs with fixed signs
    for (u64 m : {2ull, 3ull, 4ull, 5ull, 9ull, 13ull}) {
        for (u64 n : {7ull, 25ull, 17ull, 49ull}) {
            if (arith::gcd(static_cast<i64>(m), static_cast<i64>(n)) != 1) continue;
            std::map<u64, int> em, en, emn;
            for (const auto& pp : arith::factorize(m).factors()) em[pp.p] = emn[pp.p] = -1;
            for (const auto& pp : arith::factorize(n).factors()) en[pp.p] = emn[pp.p] = 1;
            CHECK(r_c(*table, m * n, emn) == r_c(*table, m, em) * r_c(*table, n, en));
        }
    }
}

TEST_CASE("r_c dominates its Deligne surrogate") {
    EigenvalueTable* table = nullptr;
    report_of(11, &table);
    for (u64 c = 1; c <= 10000; ++c) {
        if (c % 11 == 0 || !primes_within(c, table->prime_bound())) continue;
        // the worst sign pattern is the smallest r_c, so it bounds every pattern
        if (!at_least_tilde_r(r_c_worst(*table, c).value, c)) FAIL("r_c < r~_c at c = " << c);
    }
}

TEST_CASE("tilde r") {
    CHECK(tilde_r_squared(4) == Rational(1, 144));
    CHECK(tilde_r_squared(1) == Rational(1));
    CHECK(tilde_r_squared(35) == tilde_r_squared(5) * tilde_r_squared(7));
    CHECK(tilde_r_squared(4 * 27) == tilde_r_squared(4) * tilde_r_squared(27));
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        u64 pm = p;
        for (int m = 1; m < 8; ++m, pm *= p) CHECK(tilde_r_squared(pm) < tilde_r_squared(pm * p));
    }
    CHECK(tilde_r_exceeds(101, Rational(1)));
    CHECK_FALSE(tilde_r_exceeds(4, Rational(1, 12)));
    CHECK(tilde_r_exceeds(4, Rational(1, 13)));
}

TEST_CASE("prime cutoff P_1") {
    // P_1 = (2 + sqrt 5)^2 = 17.94...
    CHECK_FALSE(beyond_prime_cutoff(17, Rational(1)));
    CHECK(beyond_prime_cutoff(19, Rational(1)));
    CHECK(prime_cutoff(Rational(1)) > 17.9L);
    CHECK(prime_cutoff(Rational(1)) < 18.0L);
    // Hasse cutoff (2a + 1)^2 = 9
    CHECK_FALSE(beyond_prime_cutoff(7, Rational(1), PrimeCutoff::Hasse));
    CHECK(beyond_prime_cutoff(11, Rational(1), PrimeCutoff::Hasse));
    CHECK(exponent_cutoff(2, Rational(1)) >= 3);
}

TEST_CASE("candidate sets are complete") {
    EigenvalueTable* table = nullptr;
    report_of(11, &table);
    // the doubled window at a = 6 or 9 would need theta data beyond the guard
    for (const Rational a : {Rational(1, 2), Rational(1), Rational(2), Rational(3)}) {
        extend_eigenvalue_table(*table, genus_of(11), required_prime_bound(a, 2));
        const auto one = candidate_sets(*table, a, 1);
        const auto two = candidate_sets(*table, a, 2);
        REQUIRE(one.entries.size() == two.entries.size());
        for (std::size_t i = 0; i < one.entries.size(); ++i) {
            CHECK(one.entries[i].p == two.entries[i].p);
            CHECK(one.entries[i].m == two.entries[i].m);
            CHECK(one.entries[i].r <= a);
        }
    }
    const auto tiny = candidate_sets(*table, Rational(1, 1000));
    CHECK(tiny.entries.empty());
}

TEST_CASE("search soundness") {
    for (u64 ell : {11ull, 17ull, 19ull}) {
        CAPTURE(ell);
        EigenvalueTable* table = nullptr;
        const auto& rep = report_of(ell, &table);
        Rational top(0);
        for (const auto& cls : rep.classes) top = std::max(top, cls.m_s);
        std::set<u64> reported;
        for (const auto& n : rep.conductors) {
            CHECK(reported.insert(n.c).second);
            CHECK(n.c % ell != 0);
            const auto r = r_c(*table, n.c, n.pattern);
            CHECK_FALSE(r.infinite);
            CHECK(r.value == n.r);
            CHECK(n.r <= top);
            CHECK(n.v == arith::omega(n.c));
        }
        for (const auto& cls : rep.classes)
            for (const auto& n : cls.members) CHECK(n.r <= cls.m_s);
        for (u64 c = 2; c <= 200; ++c) {
            if (c % ell == 0 || reported.count(c)) continue;
            const auto w = r_c_worst(*table, c);
            CHECK((w.value.infinite || w.value.value > top));
        }
        CHECK(rep.count() == reported.size());
    }
    CHECK(report_of(11).count() == 116);
    CHECK(report_of(11).max() == 5124);
    CHECK(report_of(11).r_min == Rational(1, 6));
}

TEST_CASE("theorem bound") {
    const auto& g = genus_of(11);
    const auto trivial = theorem_bound(g, -3, 1);
    CHECK_FALSE(trivial.applicable);
    const auto prime = theorem_bound(g, -3, 101);
    REQUIRE(prime.applicable);
    bool some_guaranteed = false;
    for (const auto& l : prime.lemma)
        if (l.m_s == Rational(1)) some_guaranteed = some_guaranteed || l.guaranteed;
    CHECK(some_guaranteed);
    for (const auto& cls : report_of(11).classes) {
        for (const auto& n : cls.members) {
            const auto b = theorem_bound(g, -3, n.c);
            for (const auto& l : b.lemma)
                if (l.cls == cls.cls) CHECK_FALSE(l.guaranteed);
        }
    }
}

}  // TEST_SUITE
