#include "heegner/measures.hpp"

#include <stdexcept>
#include <string>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"

namespace heegner::measures {

Measure::Measure(const GenusRecord& g, std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.size() != g.size()) throw std::invalid_argument("Measure: one value per class required");
    Rational total(0);
    for (const auto& v : values_) {
        if (v.sign() < 0) throw InvariantError("Measure: negative value " + v.str());
        total += v;
    }
    if (total != Rational(1)) throw InvariantError("Measure: values sum to " + total.str() + ", not 1");
    for (const auto& c : g.classes) forms_.push_back(c.form.coefficients());
}

Measure mu_canonical(const GenusRecord& g) {
    std::vector<Rational> v;
    const Rational mass = g.mass();
    for (const auto& c : g.classes) v.push_back(Rational(1, c.unit_weight) / mass);
    return Measure(g, std::move(v));
}

void validate_heegner(const GenusRecord& g, const binary_qf::OrderParams& params, std::uint64_t N) {
    if (N != 1) throw std::invalid_argument("mu_heegner: only N = 1 is supported");
    if (N != g.N) throw std::invalid_argument("mu_heegner: N does not match the genus");
    const auto ell = static_cast<i64>(g.ell);
    if (arith::kronecker(params.D(), ell) != -1)
        throw std::invalid_argument("mu_heegner: kronecker(D, ell) = -1 violated (ell not inert in Q(sqrt(D)))");
    if (arith::gcd(params.c(), static_cast<i64>(N) * ell) != 1)
        throw std::invalid_argument("mu_heegner: gcd(c, N ell) = 1 violated");
}

Measure mu_heegner(const GenusRecord& g, const binary_qf::OrderParams& params, std::uint64_t N) {
    validate_heegner(g, params, N);
    const i64 u = binary_qf::unit_count(params);
    const i64 h = binary_qf::class_number_order(params);
    const i64 two_nu = i64{1} << arith::omega(N == 1 ? 1 : N);
    std::vector<Rational> v;
    for (const auto& c : g.classes) {
        const auto r = static_cast<i64>(ternary::primitive_rep_count(c.form, params.d_c()));
        v.push_back(Rational(u) * Rational(r) /
                    (Rational(static_cast<i64>(c.automorphs)) * Rational(two_nu) * Rational(h)));
    }
    return Measure(g, std::move(v));
}

Rational tv_distance(const Measure& m1, const Measure& m2) {
    if (!m1.same_support(m2)) throw std::invalid_argument("tv_distance: measures live on different genera");
    Rational s(0);
    for (std::size_t i = 0; i < m1.size(); ++i) s += (m1[i] - m2[i]).abs();
    return s / Rational(2);
}

RecursionCheck recursion_check(const GenusRecord& g, i64 D, i64 c, i64 r, i64 a_r) {
    if (g.size() != 2) throw std::invalid_argument("recursion_check: the genus must have exactly 2 classes");
    if (r < 2 || !arith::is_prime(static_cast<std::uint64_t>(r)))
        throw std::invalid_argument("recursion_check: r must be prime");
    if (arith::kronecker(D, r) != -1) throw std::invalid_argument("recursion_check: r must be inert in Q(sqrt(D))");
    if (arith::gcd(r, c * static_cast<i64>(g.N * g.ell)) != 1)
        throw std::invalid_argument("recursion_check: gcd(r, c N ell) = 1 violated");

    const Measure can = mu_canonical(g);
    const Measure mc = mu_heegner(g, binary_qf::OrderParams(D, c), g.N);
    const Measure mcr = mu_heegner(g, binary_qf::OrderParams(D, arith::checked_mul(c, r)), g.N);
    RecursionCheck out;
    out.a_r = a_r;
    out.ramanujan = a_r * a_r <= 4 * r;
    out.holds = true;
    const Rational factor(a_r, r + 1);
    for (std::size_t s = 0; s < g.size(); ++s) {
        out.lhs.push_back(mcr[s] - can[s]);
        out.rhs.push_back(factor * (mc[s] - can[s]));
        if (out.lhs.back() != out.rhs.back()) out.holds = false;
    }
    return out;
}

}  // namespace heegner::measures
