#include <doctest.h>

#include <random>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"
#include "heegner/rational.hpp"
#include "heegner/ternary_qf.hpp"
#include "oracles.hpp"

using namespace heegner;
using namespace heegner::ternary;

namespace {

TernaryForm diag(i64 a, i64 b, i64 c) { return TernaryForm::from_coefficients(a, b, c, 0, 0, 0); }

// a^2 + (a+2b)^2 + (a+2c)^2
TernaryForm local_form_at_2() { return TernaryForm::from_coefficients(3, 4, 4, 0, 2, 2); }

std::vector<TernaryForm> gross_like_forms() {
    return {TernaryForm::from_coefficients(3, 15, 15, -7, -1, -1), TernaryForm::from_coefficients(4, 11, 12, 0, -2, 0),
            TernaryForm::from_coefficients(3, 23, 23, -11, -1, -1), TernaryForm::from_coefficients(7, 11, 20, -4, -2, -3),
            TernaryForm::from_coefficients(4, 19, 20, 0, -2, 0), TernaryForm::from_coefficients(7, 11, 23, -5, -3, -1)};
}

Mat3 random_unimodular(std::mt19937_64& rng) {
    Mat3 u = identity3();
    std::uniform_int_distribution<int> idx(0, 2), coef(-2, 2);
    for (int step = 0; step < 6; ++step) {
        const int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const int k = coef(rng);
        for (int r = 0; r < 3; ++r) u[r][j] += k * u[r][i];
    }
    return u;
}

// Brute-force automorphs: columns drawn from vectors of the right norms.
u64 automorphs_brute(const TernaryForm& q) {
    const Mat3 A = q.gram();
    std::vector<std::vector<Vec3>> cand(3);
    const i64 lim = 6;
    for (i64 x = -lim; x <= lim; ++x)
        for (i64 y = -lim; y <= lim; ++y)
            for (i64 z = -lim; z <= lim; ++z)
                for (int i = 0; i < 3; ++i)
                    if (q({x, y, z}) == A[i][i]) cand[i].push_back({x, y, z});
    u64 n = 0;
    for (const auto& c0 : cand[0])
        for (const auto& c1 : cand[1]) {
            if (q.bilinear(c0, c1) != A[0][1]) continue;
            for (const auto& c2 : cand[2]) {
                if (q.bilinear(c0, c2) != A[0][2] || q.bilinear(c1, c2) != A[1][2]) continue;
                Mat3 u;
                for (int r = 0; r < 3; ++r) u[r] = {c0[r], c1[r], c2[r]};
                const i64 d = determinant(u);
                if (d == 1 || d == -1) ++n;
            }
        }
    return n;
}

// Minimal M with 4 M A^-1 an even integer matrix, by direct search.
i64 level_brute(const TernaryForm& q) {
    const Mat3 adj = adjugate(q.gram());
    const i64 det = q.disc();
    for (i64 M = 1;; ++M) {
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = 0; j < 3 && ok; ++j) {
                const Rational e = Rational(4 * M) * Rational(adj[i][j], det);
                ok = e.is_integer() && e.num() % 2 == 0;
            }
        if (ok) return M;
    }
}

}  // namespace

TEST_SUITE("ternary_qf") {

TEST_CASE("form validation") {
    CHECK_THROWS_AS(TernaryForm::from_coefficients(1, 1, -1, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(TernaryForm::from_coefficients(1, 1, 1, 0, 0, 1), std::invalid_argument);
    const auto q = TernaryForm::from_coefficients(3, 15, 15, -7, -1, -1);
    CHECK(q.disc() == 484);
    CHECK(q({1, 0, 0}) == 3);
    CHECK(q.coefficients() == std::array<i64, 6>{3, 15, 15, -7, -1, -1});
}

TEST_CASE("rep_count examples") {
    for (const auto& q : gross_like_forms()) CHECK(rep_count(q, 0) == 1);
    CHECK(rep_count(diag(1, 1, 1), 1) == 6);
    CHECK(rep_count(local_form_at_2(), 3) == 8);
    CHECK(rep_count(local_form_at_2(), 3) ==
          static_cast<u64>(oracle::theta_box(local_form_at_2().gram(), 3)[3]));
    CHECK_THROWS_AS(rep_count(diag(1, 1, 1), 10'000'001), GuardError);
    CHECK_THROWS_AS(rep_count(diag(1, 1, 1), -1), std::invalid_argument);
}

TEST_CASE("primitive_rep_count examples") {
    CHECK(primitive_rep_count(diag(1, 1, 1), 4) == 0);
    CHECK(primitive_rep_count(local_form_at_2(), 3) == 8);
    for (i64 n : {1, 2, 3, 5, 6, 7, 10, 11, 15, 30, 33})
        for (const auto& q : gross_like_forms()) CHECK(primitive_rep_count(q, n) == rep_count(q, n));
}

TEST_CASE("theta_coeffs examples") {
    const auto t = theta_coeffs(local_form_at_2(), 4);
    const auto o = oracle::theta_box(local_form_at_2().gram(), 4);
    REQUIRE(t.size() == 5);
    for (int n = 0; n <= 4; ++n) CHECK(t[n] == static_cast<u64>(o[n]));
    CHECK(nonzero_terms(t) == std::vector<std::pair<i64, u64>>{{0, 1}, {3, 8}, {4, 6}});
    CHECK(nonzero_terms(theta_coeffs(diag(1, 1, 1), 1)) == std::vector<std::pair<i64, u64>>{{0, 1}, {1, 6}});
}

TEST_CASE("ellipsoid enumeration matches box enumeration") {
    const i64 B = 2000;
    for (const auto& q : gross_like_forms()) {
        const auto t = theta_coeffs(q, B);
        const auto o = oracle::theta_box(q.gram(), B);
        u64 total = 0;
        for (i64 n = 0; n <= B; ++n) {
            CHECK(t[n] == static_cast<u64>(o[n]));
            if (n > 0) CHECK(t[n] % 2 == 0);
            total += t[n];
        }
        u64 points = 0;
        EllipsoidWalker(q).for_each(B, [&](i64, i64, i64) { ++points; });
        CHECK(points == total);
        for (i64 n = 0; n <= 300; ++n) CHECK(rep_count(q, n) == t[n]);
    }
}

TEST_CASE("threaded theta sweep is bit-identical") {
    const auto q = TernaryForm::from_coefficients(7, 11, 23, -5, -3, -1);
    CHECK(theta_coeffs(q, 20000, 1) == theta_coeffs(q, 20000, 4));
    CHECK(theta_coeffs(q, 20000, 1) == theta_coeffs(q, 20000, 0));
}

TEST_CASE("Moebius round trip for primitive counts") {
    for (const auto& q : {gross_like_forms()[0], gross_like_forms()[3], diag(1, 1, 1)}) {
        const auto t = theta_coeffs(q, 2000);
        for (i64 n = 1; n <= 2000; ++n) {
            u64 sum = 0;
            for (u64 e : arith::square_divisors(static_cast<u64>(n))) sum += primitive_rep_count(q, n / static_cast<i64>(e * e));
            CHECK(sum == t[n]);
        }
    }
}

TEST_CASE("automorph_count") {
    CHECK(automorph_count(diag(1, 2, 3)) == 8);
    CHECK(automorph_count(diag(1, 1, 1)) == 48);
    for (const auto& q : gross_like_forms()) {
        const u64 n = automorph_count(q);
        CHECK(n % 2 == 0);
        CHECK(n == automorphs_brute(q));
    }
    for (const auto& q : {diag(1, 1, 2), diag(1, 2, 2), diag(2, 3, 3), local_form_at_2()})
        CHECK(automorph_count(q) == automorphs_brute(q));
}

TEST_CASE("level follows the 4 M A^-1 even rule") {
    CHECK(level(diag(1, 1, 1)) == 1);
    CHECK(level(local_form_at_2()) == level_brute(local_form_at_2()));
    for (const auto& q : gross_like_forms()) CHECK(level(q) == level_brute(q));
    CHECK(level(gross_like_forms()[0]) == 11);
    CHECK(level(gross_like_forms()[2]) == 17);
    CHECK(level(gross_like_forms()[4]) == 19);
}

TEST_CASE("minkowski reduction preserves the class") {
    std::mt19937_64 rng(7);
    for (const auto& q : gross_like_forms()) {
        const auto t = q.transformed(random_unimodular(rng));
        const auto red = minkowski_reduce(t);
        CHECK(t.transformed(red.transform).gram() == red.form.gram());
        const auto g = red.form.gram();
        CHECK(g[0][0] <= g[1][1]);
        CHECK(g[1][1] <= g[2][2]);
    }
}

TEST_CASE("equivalent") {
    std::mt19937_64 rng(11);
    for (const auto& q : gross_like_forms()) {
        const auto self = equivalent(q, q);
        CHECK(self.equivalent);
        REQUIRE(self.witness);
        CHECK(q.transformed(*self.witness).gram() == q.gram());
        for (int trial = 0; trial < 5; ++trial) {
            const Mat3 u = random_unimodular(rng);
            REQUIRE(std::abs(determinant(u)) == 1);
            const auto q2 = q.transformed(u);
            const auto e = equivalent(q, q2);
            CHECK(e.equivalent);
            REQUIRE(e.witness);
            CHECK(q.transformed(*e.witness).gram() == q2.gram());
            CHECK(automorph_count(q) == automorph_count(q2));
            for (i64 n = 0; n <= 100; ++n) CHECK(rep_count(q, n) == rep_count(q2, n));
        }
    }
    CHECK_FALSE(equivalent(diag(1, 1, 2), diag(1, 2, 2)).equivalent);
    CHECK(rep_count(diag(1, 1, 2), 1) == 4);
    CHECK(rep_count(diag(1, 2, 2), 1) == 2);
    CHECK_FALSE(equivalent(gross_like_forms()[0], gross_like_forms()[1]).equivalent);
}

TEST_CASE("canonical form is a class invariant") {
    std::mt19937_64 rng(3);
    for (const auto& q : gross_like_forms()) {
        const auto c = canonical_form(q);
        CHECK(q.transformed(c.transform).gram() == c.form.gram());
        for (int trial = 0; trial < 5; ++trial)
            CHECK(canonical_form(q.transformed(random_unimodular(rng))).form.gram() == c.form.gram());
    }
}

}  // TEST_SUITE
