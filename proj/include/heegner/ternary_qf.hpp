#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"

namespace heegner::ternary {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using Vec3 = std::array<i64, 3>;
using Mat3 = std::array<std::array<i64, 3>, 3>;

constexpr i64 kMaxTarget = 10'000'000;  // desk-scale guard for n and theta bounds

Mat3 identity3();
Mat3 transpose(const Mat3& m);
Mat3 multiply(const Mat3& a, const Mat3& b);
i64 determinant(const Mat3& m);
Mat3 adjugate(const Mat3& m);
Mat3 inverse_unimodular(const Mat3& u);  // throws if det(u) != ±1

// Positive-definite ternary form Q(x) = x^T A x with integral Gram matrix A.
class TernaryForm {
public:
    explicit TernaryForm(const Mat3& gram);  // validates symmetry and definiteness

    // Gram [[a,h,g],[h,b,f],[g,f,c]]
    static TernaryForm from_coefficients(i64 a, i64 b, i64 c, i64 f, i64 g, i64 h);

    const Mat3& gram() const { return gram_; }
    i64 disc() const { return disc_; }
    i64 operator()(const Vec3& v) const;
    i64 bilinear(const Vec3& u, const Vec3& v) const;
    TernaryForm transformed(const Mat3& u) const;  // U^T A U

    // (a, b, c, f, g, h) in the layout above
    std::array<i64, 6> coefficients() const;
    std::string str() const;

    friend bool operator==(const TernaryForm& x, const TernaryForm& y) { return x.gram_ == y.gram_; }
    friend bool operator<(const TernaryForm& x, const TernaryForm& y) {
        return x.coefficients() < y.coefficients();
    }

private:
    Mat3 gram_;
    i64 disc_;
};

// Nested exact bounds for the ellipsoid Q(x) <= B, derived from
//   a m Q = m (a x + h y + g z)^2 + (m y + k z)^2 + a d z^2
// with m = ab - h^2, k = af - gh, d = det A.
class EllipsoidWalker {
public:
    explicit EllipsoidWalker(const TernaryForm& q);

    template <typename F>
    void for_each(i64 bound, F&& visit) const {
        if (bound < 0) return;
        const i64 zmax = z_limit(bound);
        for (i64 z = -zmax; z <= zmax; ++z) walk_z(bound, z, visit);
    }

    template <typename F>
    void walk_z(i64 bound, i64 z, F&& visit) const {
        if (fits64(bound))
            walk_z_impl<i64>(bound, z, visit);
        else
            walk_z_impl<__int128>(bound, z, visit);
    }

    // Number of vectors with Q(v) = n, solving for x exactly on each (y, z) line.
    u64 count_exact(i64 n) const;
    i64 z_limit(i64 bound) const;

private:
    // a m B fits comfortably in 63 bits
    bool fits64(i64 bound) const;

    template <typename T>
    static T isqrt_t(T n) {
        if constexpr (sizeof(T) == 8)
            return static_cast<T>(arith::isqrt(static_cast<u64>(n)));
        else
            return static_cast<T>(arith::isqrt128(static_cast<unsigned __int128>(n)));
    }

    template <typename T>
    static T floor_div_t(T a, T b) {
        T q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

    template <typename T, typename F>
    void walk_z_impl(i64 bound, i64 z, F&& visit) const {
        const T base = static_cast<T>(a_) * m_ * bound - static_cast<T>(a_) * d_ * z * z;
        if (base < 0) return;
        const T s1 = isqrt_t<T>(base);
        const T kz = static_cast<T>(k_) * z;
        const i64 ylo = static_cast<i64>(-floor_div_t<T>(s1 + kz, m_));
        const i64 yhi = static_cast<i64>(floor_div_t<T>(s1 - kz, m_));
        for (i64 y = ylo; y <= yhi; ++y) {
            const T lin = static_cast<T>(m_) * y + kz;
            const T t2 = base - lin * lin;
            if (t2 < 0) continue;
            const T s2 = isqrt_t<T>(t2 / m_);
            const T t = static_cast<T>(h_) * y + static_cast<T>(g_) * z;
            const i64 xlo = static_cast<i64>(-floor_div_t<T>(s2 + t, a_));
            const i64 xhi = static_cast<i64>(floor_div_t<T>(s2 - t, a_));
            for (i64 x = xlo; x <= xhi; ++x) visit(x, y, z);
        }
    }

    template <typename T>
    u64 count_exact_impl(i64 n) const;

    i64 a_, b_, c_, f_, g_, h_;
    i64 m_, k_, d_;
};

u64 rep_count(const TernaryForm& q, i64 n);
u64 primitive_rep_count(const TernaryForm& q, i64 n);

// Dense table r(Q, n) for 0 <= n <= bound from one enumeration pass.
std::vector<u64> theta_coeffs(const TernaryForm& q, i64 bound, unsigned threads = 1);
std::vector<std::pair<i64, u64>> nonzero_terms(const std::vector<u64>& theta);

struct Reduction {
    TernaryForm form;
    Mat3 transform;  // form = transform^T A transform
};

// Minkowski-reduced basis: sorted norms, |2 B(b_i,b_j)| <= Q(b_j) for j < i,
// and Q(b3 ± b1 ± b2) >= Q(b3).
Reduction minkowski_reduce(const TernaryForm& q);

struct Canonical {
    TernaryForm form;
    Mat3 transform;
    u64 automorphs;
};

// Lexicographically least Gram among bases realizing the successive minima;
// equal for equivalent forms. Also counts the automorph group.
Canonical canonical_form(const TernaryForm& q);

u64 automorph_count(const TernaryForm& q);
i64 level(const TernaryForm& q);

struct Equivalence {
    bool equivalent = false;
    std::optional<Mat3> witness;  // U with U^T A1 U = A2
};

Equivalence equivalent(const TernaryForm& q1, const TernaryForm& q2);

}  // namespace heegner::ternary
