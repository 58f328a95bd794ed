#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/binary_qf.hpp"
#include "heegner/errors.hpp"
#include "heegner/genus.hpp"

using namespace heegner;
using namespace heegner::genus;

namespace {

int valuation(i64 n, u64 p) {
    int v = 0;
    while (n % static_cast<i64>(p) == 0) {
        n /= static_cast<i64>(p);
        ++v;
    }
    return v;
}

TernaryForm diag(i64 a, i64 b, i64 c) { return TernaryForm::from_coefficients(a, b, c, 0, 0, 0); }

}  // namespace

TEST_SUITE("genus") {

TEST_CASE("local symbols reconstruct the determinant") {
    for (i64 disc : {4, 12, 36, 121, 484}) {
        for (const auto& q : enumerate_classes(disc)) {
            const auto sym = genus_symbol(q);
            for (u64 p : {2ull, 3ull, 11ull}) {
                const auto local = local_symbol(q.gram(), p);
                int ranks = 0, v = 0;
                for (const auto& c : local.components) {
                    CHECK(c.scale >= 0);
                    CHECK(c.rank > 0);
                    ranks += c.rank;
                    v += c.scale * c.rank;
                }
                CHECK(ranks == 3);
                CHECK(v == valuation(disc, p));
            }
            REQUIRE(sym.at(2) != nullptr);
        }
    }
}

TEST_CASE("local symbols distinguish known genera") {
    // unit determinants 1 and 3 differ mod 8 at 2; scales differ at 3 and 5
    CHECK(local_symbol(diag(1, 1, 1).gram(), 2) != local_symbol(diag(1, 1, 3).gram(), 2));
    CHECK(local_symbol(diag(1, 1, 3).gram(), 3) != local_symbol(diag(1, 1, 3).gram(), 2));
    CHECK(local_symbol(diag(1, 1, 5).gram(), 5) != local_symbol(diag(1, 2, 10).gram(), 5));
}

TEST_CASE("enumerate_classes is complete and duplicate-free") {
    for (i64 disc : {1, 2, 4, 12, 36, 484}) {
        const auto classes = enumerate_classes(disc);
        const auto relaxed = enumerate_classes(disc, true);
        CHECK(classes == relaxed);
        for (std::size_t i = 0; i < classes.size(); ++i) {
            CHECK(classes[i].disc() == disc);
            for (std::size_t j = i + 1; j < classes.size(); ++j)
                CHECK_FALSE(ternary::equivalent(classes[i], classes[j]).equivalent);
        }
    }
    CHECK(enumerate_classes(1).size() == 1);
    CHECK(enumerate_classes(484).size() == 72);
    const auto four = enumerate_classes(4);
    std::set<std::array<i64, 6>> canon;
    for (const auto& q : four) canon.insert(ternary::canonical_form(q).form.coefficients());
    CHECK(canon.count(ternary::canonical_form(diag(1, 1, 4)).form.coefficients()) == 1);
    CHECK(canon.count(ternary::canonical_form(diag(1, 2, 2)).form.coefficients()) == 1);
    CHECK_THROWS_AS(enumerate_classes(kMaxDisc + 1), GuardError);
    CHECK_THROWS_AS(enumerate_classes(0), std::invalid_argument);
}

TEST_CASE("same_genus") {
    const auto q = TernaryForm::from_coefficients(3, 15, 15, -7, -1, -1);
    CHECK(same_genus(q, q));
    ternary::Mat3 u{{{1, 2, 0}, {0, 1, -1}, {0, 0, 1}}};
    CHECK(same_genus(q, q.transformed(u)));
    const auto classes = enumerate_classes(484);
    bool found = false;
    for (const auto& r : classes) {
        if (*genus_symbol(r).at(11) != *genus_symbol(q).at(11)) {
            CHECK_FALSE(same_genus(q, r));
            found = true;
            break;
        }
    }
    CHECK(found);
    CHECK_THROWS_AS(same_genus(q, diag(1, 1, 1)), std::invalid_argument);
}

TEST_CASE("Gross genus structure") {
    struct Expect {
        u64 ell;
        std::size_t classes;
        Rational mass;
    };
    for (const auto& e : {Expect{2, 1, Rational(1, 24)}, Expect{3, 1, Rational(1, 12)}, Expect{5, 1, Rational(1, 6)},
                          Expect{7, 1, Rational(1, 4)}, Expect{11, 2, Rational(5, 12)}, Expect{13, 1, Rational(1, 2)},
                          Expect{17, 2, Rational(2, 3)}, Expect{19, 2, Rational(3, 4)}, Expect{23, 3, Rational(11, 12)}}) {
        CAPTURE(e.ell);
        const auto g = gross_genus(e.ell);
        CHECK(g.size() == e.classes);
        CHECK(g.mass() == e.mass);
        CHECK(g.disc == static_cast<i64>(4 * e.ell * e.ell));
        for (const auto& c : g.classes) {
            CHECK(c.form.disc() == g.disc);
            CHECK(ternary::level(c.form) == g.level);
            CHECK(genus_symbol(c.form) == g.symbol);
            CHECK(static_cast<i64>(c.automorphs) == g.calibration * c.unit_weight);
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                CHECK_FALSE(ternary::equivalent(g.classes[i].form, g.classes[j].form).equivalent);
    }
    const auto g11 = gross_genus(11);
    CHECK(g11.classes[0].form.coefficients() == std::array<i64, 6>{3, 15, 15, -7, -1, -1});
    CHECK(g11.classes[0].unit_weight == 6);
    CHECK(g11.classes[1].unit_weight == 4);
    CHECK_THROWS_AS(gross_genus(12), std::invalid_argument);
    CHECK_THROWS_AS(gross_genus(11, 2), std::invalid_argument);
    CHECK_THROWS_AS(gross_genus(163), GuardError);
}

TEST_CASE("genus averages") {
    const auto g3 = gross_genus(3);
    for (i64 n = 1; n <= 200; ++n) CHECK(genus_avg(g3, n, false) == Rational(static_cast<i64>(ternary::rep_count(g3.classes[0].form, n))));

    const auto g = gross_genus(11);
    CHECK(automorph_weighted_sum(g, 3, true) == Rational(1, 6));
    const binary_qf::OrderParams p(-3, 5);
    CHECK(automorph_weighted_sum(g, p.d_c(), true) ==
          Rational(binary_qf::class_number_order(p), binary_qf::unit_count(p)));
    CHECK(genus_avg(g, 3, true) * g.automorph_mass() == Rational(1, 6));
}

TEST_CASE("genus averages do not depend on the representatives") {
    std::mt19937_64 rng(5);
    for (u64 ell : {11ull, 17ull, 19ull}) {
        const auto g = gross_genus(ell);
        GenusRecord moved = g;
        for (auto& c : moved.classes) {
            ternary::Mat3 u{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
            u[0][1] = static_cast<i64>(rng() % 5) - 2;
            u[1][2] = static_cast<i64>(rng() % 5) - 2;
            u[0][2] = static_cast<i64>(rng() % 3) - 1;
            c.form = c.form.transformed(u);
        }
        for (i64 n = 1; n <= 300; ++n) {
            CHECK(genus_avg(g, n, false) == genus_avg(moved, n, false));
            CHECK(genus_avg(g, n, true) == genus_avg(moved, n, true));
        }
    }
}

TEST_CASE("Jones identity for small conductors") {
    for (u64 ell : {11ull, 17ull, 19ull}) {
        const auto g = gross_genus(ell);
        for (i64 D = -3; D >= -40; --D) {
            if (!arith::is_fundamental_discriminant(D) || arith::kronecker(D, static_cast<i64>(ell)) != -1) continue;
            for (i64 c = 1; c <= 6; ++c) {
                if (c % static_cast<i64>(ell) == 0) continue;
                const binary_qf::OrderParams p(D, c);
                CHECK(automorph_weighted_sum(g, p.d_c(), true) ==
                      Rational(binary_qf::class_number_order(p), binary_qf::unit_count(p)));
                CHECK(jones_constant(g, p) == g.automorph_mass().inverse());
            }
        }
    }
}

}  // TEST_SUITE
