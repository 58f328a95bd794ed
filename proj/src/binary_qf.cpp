#include "heegner/binary_qf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"

namespace heegner::binary_qf {

OrderParams::OrderParams(std::int64_t D, std::int64_t c) : D_(D), c_(c) {
    if (D >= 0) throw std::invalid_argument("OrderParams: D must be negative (got " + std::to_string(D) + ")");
    if (!arith::is_fundamental_discriminant(D))
        throw std::invalid_argument("OrderParams: D = " + std::to_string(D) + " is not a fundamental discriminant");
    if (c < 1) throw std::invalid_argument("OrderParams: conductor c must be positive");
    d_c_ = arith::checked_mul(-D, arith::checked_mul(c, c));
}

bool BinaryForm::is_reduced() const {
    if (a <= 0) return false;
    if (!(std::abs(b) <= a && a <= c)) return false;
    if ((std::abs(b) == a || a == c) && b < 0) return false;
    return true;
}

bool BinaryForm::is_primitive() const { return arith::gcd(arith::gcd(a, b), c) == 1; }

std::vector<BinaryForm> reduced_forms(std::int64_t delta) {
    if (delta >= 0) throw std::invalid_argument("reduced_forms: discriminant must be negative");
    std::int64_t m = ((delta % 4) + 4) % 4;
    if (m != 0 && m != 1) throw std::invalid_argument("reduced_forms: discriminant must be 0 or 1 mod 4");

    std::vector<BinaryForm> out;
    const std::int64_t amax = static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(-delta) / 3));
    for (std::int64_t a = 1; a <= amax; ++a) {
        for (std::int64_t b = -a; b <= a; ++b) {
            std::int64_t num = b * b - delta;
            if (num % (4 * a) != 0) continue;
            BinaryForm f{a, b, num / (4 * a)};
            if (f.is_reduced() && f.is_primitive()) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int unit_count(const OrderParams& params) {
    if (params.discriminant() == -3) return 6;
    if (params.discriminant() == -4) return 4;
    return 2;
}

std::int64_t class_number_order(const OrderParams& params) {
    const std::int64_t hD = static_cast<std::int64_t>(reduced_forms(params.D()).size());
    const int u1 = unit_count(OrderParams(params.D(), 1));
    const int uc = unit_count(params);
    Rational h = Rational(params.c()) * Rational(hD) / Rational(u1, uc);
    for (const auto& pe : arith::factorize(static_cast<std::uint64_t>(params.c())).factors()) {
        const auto p = static_cast<std::int64_t>(pe.p);
        h *= Rational(1) - Rational(arith::kronecker(params.D(), p), p);
    }
    if (!h.is_integer() || h.num() <= 0)
        throw InvariantError("class_number_order: non-integral class number " + h.str());
    return h.num();
}

std::int64_t gamma_size(const OrderParams& params) { return class_number_order(params); }

Rational gamma_over_units(const OrderParams& params) {
    return Rational(gamma_size(params), unit_count(params));
}

}  // namespace heegner::binary_qf
