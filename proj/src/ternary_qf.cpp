#include "heegner/ternary_qf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace heegner::ternary {

using i128 = __int128;

Mat3 identity3() { return Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 transpose(const Mat3& m) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            i64 s = 0;
            for (int k = 0; k < 3; ++k) s += arith::checked_mul(a[i][k], b[k][j]);
            r[i][j] = s;
        }
    return r;
}

i64 determinant(const Mat3& m) {
    const i128 d = static_cast<i128>(m[0][0]) * (static_cast<i128>(m[1][1]) * m[2][2] - static_cast<i128>(m[1][2]) * m[2][1]) -
                   static_cast<i128>(m[0][1]) * (static_cast<i128>(m[1][0]) * m[2][2] - static_cast<i128>(m[1][2]) * m[2][0]) +
                   static_cast<i128>(m[0][2]) * (static_cast<i128>(m[1][0]) * m[2][1] - static_cast<i128>(m[1][1]) * m[2][0]);
    if (d > INT64_MAX || d < INT64_MIN) throw std::overflow_error("determinant overflow");
    return static_cast<i64>(d);
}

Mat3 adjugate(const Mat3& m) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            r[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    return r;
}

Mat3 inverse_unimodular(const Mat3& u) {
    const i64 d = determinant(u);
    if (d != 1 && d != -1) throw std::invalid_argument("inverse_unimodular: determinant is not ±1");
    Mat3 adj = adjugate(u);
    for (auto& row : adj)
        for (auto& e : row) e *= d;
    return adj;
}

TernaryForm::TernaryForm(const Mat3& gram) : gram_(gram) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (gram[i][j] != gram[j][i]) throw std::invalid_argument("TernaryForm: Gram matrix is not symmetric");
    const i64 m1 = gram[0][0];
    const i128 m2 = static_cast<i128>(gram[0][0]) * gram[1][1] - static_cast<i128>(gram[0][1]) * gram[0][1];
    disc_ = determinant(gram);
    if (m1 <= 0 || m2 <= 0 || disc_ <= 0)
        throw std::invalid_argument("TernaryForm: Gram matrix is not positive definite");
}

TernaryForm TernaryForm::from_coefficients(i64 a, i64 b, i64 c, i64 f, i64 g, i64 h) {
    return TernaryForm(Mat3{{{a, h, g}, {h, b, f}, {g, f, c}}});
}

i64 TernaryForm::operator()(const Vec3& v) const { return bilinear(v, v); }

i64 TernaryForm::bilinear(const Vec3& u, const Vec3& v) const {
    i128 s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += static_cast<i128>(u[i]) * gram_[i][j] * v[j];
    if (s > INT64_MAX || s < INT64_MIN) throw std::overflow_error("bilinear form overflow");
    return static_cast<i64>(s);
}

TernaryForm TernaryForm::transformed(const Mat3& u) const {
    return TernaryForm(multiply(transpose(u), multiply(gram_, u)));
}

std::array<i64, 6> TernaryForm::coefficients() const {
    return {gram_[0][0], gram_[1][1], gram_[2][2], gram_[1][2], gram_[0][2], gram_[0][1]};
}

std::string TernaryForm::str() const {
    std::ostringstream os;
    os << "[[" << gram_[0][0] << "," << gram_[0][1] << "," << gram_[0][2] << "],[" << gram_[1][0] << ","
       << gram_[1][1] << "," << gram_[1][2] << "],[" << gram_[2][0] << "," << gram_[2][1] << "," << gram_[2][2]
       << "]]";
    return os.str();
}

EllipsoidWalker::EllipsoidWalker(const TernaryForm& q) {
    const auto& A = q.gram();
    a_ = A[0][0];
    b_ = A[1][1];
    c_ = A[2][2];
    f_ = A[1][2];
    g_ = A[0][2];
    h_ = A[0][1];
    m_ = arith::checked_mul(a_, b_) - arith::checked_mul(h_, h_);
    k_ = arith::checked_mul(a_, f_) - arith::checked_mul(g_, h_);
    d_ = q.disc();
}

i64 EllipsoidWalker::z_limit(i64 bound) const {
    const i128 zz = static_cast<i128>(m_) * bound / d_;
    return static_cast<i64>(arith::isqrt128(static_cast<unsigned __int128>(zz)));
}

bool EllipsoidWalker::fits64(i64 bound) const {
    const i128 amb = static_cast<i128>(a_) * m_ * (bound + 1);
    return amb < (static_cast<i128>(1) << 61);
}

template <typename T>
u64 EllipsoidWalker::count_exact_impl(i64 n) const {
    u64 count = 0;
    const i64 zmax = z_limit(n);
    for (i64 z = -zmax; z <= zmax; ++z) {
        const T base = static_cast<T>(a_) * m_ * n - static_cast<T>(a_) * d_ * z * z;
        if (base < 0) continue;
        const T s1 = isqrt_t<T>(base);
        const T kz = static_cast<T>(k_) * z;
        const i64 ylo = static_cast<i64>(-floor_div_t<T>(s1 + kz, m_));
        const i64 yhi = static_cast<i64>(floor_div_t<T>(s1 - kz, m_));
        for (i64 y = ylo; y <= yhi; ++y) {
            const T lin = static_cast<T>(m_) * y + kz;
            const T t2 = base - lin * lin;
            if (t2 < 0 || t2 % m_ != 0) continue;
            const T sq = t2 / m_;
            const T s = isqrt_t<T>(sq);
            if (s * s != sq) continue;
            const T t = static_cast<T>(h_) * y + static_cast<T>(g_) * z;
            // a x + t = +-s
            if ((s - t) % a_ == 0) ++count;
            if (s != 0 && (-s - t) % a_ == 0) ++count;
        }
    }
    return count;
}

u64 EllipsoidWalker::count_exact(i64 n) const {
    if (n < 0) return 0;
    return fits64(n) ? count_exact_impl<i64>(n) : count_exact_impl<i128>(n);
}

namespace {

void check_target(i64 n, const char* what) {
    if (n > kMaxTarget)
        throw GuardError(std::string(what) + ": argument " + std::to_string(n) + " exceeds guard " +
                         std::to_string(kMaxTarget));
}

}  // namespace

u64 rep_count(const TernaryForm& q, i64 n) {
    if (n < 0) throw std::invalid_argument("rep_count: n must be non-negative");
    check_target(n, "rep_count");
    if (n == 0) return 1;
    return EllipsoidWalker(q).count_exact(n);
}

u64 primitive_rep_count(const TernaryForm& q, i64 n) {
    if (n <= 0) throw std::invalid_argument("primitive_rep_count: n must be positive");
    check_target(n, "primitive_rep_count");
    const EllipsoidWalker walker(q);
    i64 total = 0;
    for (u64 e : arith::square_divisors(static_cast<u64>(n))) {
        const int mu = arith::moebius(e);
        if (mu == 0) continue;
        total += mu * static_cast<i64>(walker.count_exact(n / static_cast<i64>(e * e)));
    }
    if (total < 0) throw InvariantError("primitive_rep_count: negative Möbius sum");
    return static_cast<u64>(total);
}

std::vector<u64> theta_coeffs(const TernaryForm& q, i64 bound, unsigned threads) {
    if (bound < 0) throw std::invalid_argument("theta_coeffs: bound must be non-negative");
    check_target(bound, "theta_coeffs");
    const EllipsoidWalker walker(q);
    const auto& A = q.gram();
    const auto size = static_cast<std::size_t>(bound) + 1;

    auto fill = [&](std::vector<u64>& out, i64 z0, i64 step) {
        const i64 zmax = walker.z_limit(bound);
        for (i64 z = -zmax + z0; z <= zmax; z += step) {
            walker.walk_z(bound, z, [&](i64 x, i64 y, i64 zz) {
                const i64 v = A[0][0] * x * x + A[1][1] * y * y + A[2][2] * zz * zz + 2 * A[0][1] * x * y +
                              2 * A[0][2] * x * zz + 2 * A[1][2] * y * zz;
                ++out[static_cast<std::size_t>(v)];
            });
        }
    };

    // Per-thread tables are bounded to roughly 256 MiB in total.
    const std::size_t cap = std::max<std::size_t>(1, (std::size_t{256} << 20) / (8 * size));
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), cap));
    std::vector<u64> theta(size, 0);
    if (n_threads == 1) {
        fill(theta, 0, 1);
        return theta;
    }
    std::vector<std::vector<u64>> parts(n_threads, std::vector<u64>(size, 0));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
        pool.emplace_back([&, t] { fill(parts[t], static_cast<i64>(t), static_cast<i64>(n_threads)); });
    for (auto& th : pool) th.join();
    for (const auto& part : parts)
        for (std::size_t i = 0; i < size; ++i) theta[i] += part[i];
    return theta;
}

std::vector<std::pair<i64, u64>> nonzero_terms(const std::vector<u64>& theta) {
    std::vector<std::pair<i64, u64>> out;
    for (std::size_t n = 0; n < theta.size(); ++n)
        if (theta[n] != 0) out.emplace_back(static_cast<i64>(n), theta[n]);
    return out;
}

Reduction minkowski_reduce(const TernaryForm& q) {
    std::array<Vec3, 3> basis{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    auto norm = [&](const Vec3& v) { return q(v); };
    auto axpy = [](const Vec3& v, i64 s, const Vec3& w) {
        return Vec3{v[0] + s * w[0], v[1] + s * w[1], v[2] + s * w[2]};
    };

    for (;;) {
        std::stable_sort(basis.begin(), basis.end(),
                         [&](const Vec3& u, const Vec3& v) { return norm(u) < norm(v); });
        bool changed = false;
        for (int i = 1; i < 3 && !changed; ++i)
            for (int j = 0; j < i && !changed; ++j) {
                const i64 nj = norm(basis[j]);
                const i64 bij = q.bilinear(basis[i], basis[j]);
                if (2 * std::abs(bij) > nj) {
                    const i64 mult = arith::floor_div(2 * bij + nj, 2 * nj);
                    basis[i] = axpy(basis[i], -mult, basis[j]);
                    changed = true;
                }
            }
        if (changed) continue;
        const i64 n2 = norm(basis[2]);
        for (i64 s1 : {1, -1}) {
            for (i64 s2 : {1, -1}) {
                Vec3 v = axpy(axpy(basis[2], s1, basis[0]), s2, basis[1]);
                if (norm(v) < n2) {
                    basis[2] = v;
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
        if (!changed) break;
    }

    Mat3 u{};
    for (int col = 0; col < 3; ++col)
        for (int row = 0; row < 3; ++row) u[row][col] = basis[col][row];
    return Reduction{q.transformed(u), u};
}

namespace {

Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

i64 dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

// Rank of the span of vs (at most 3).
int span_rank(const std::vector<Vec3>& vs) {
    const Vec3* first = nullptr;
    for (const auto& v : vs)
        if (v != Vec3{0, 0, 0}) {
            first = &v;
            break;
        }
    if (!first) return 0;
    const Vec3* second = nullptr;
    Vec3 cr{};
    for (const auto& v : vs) {
        Vec3 c = cross(*first, v);
        if (c != Vec3{0, 0, 0}) {
            second = &v;
            cr = c;
            break;
        }
    }
    if (!second) return 1;
    for (const auto& v : vs)
        if (dot(cr, v) != 0) return 3;
    return 2;
}

}  // namespace

Canonical canonical_form(const TernaryForm& q) {
    const Reduction red = minkowski_reduce(q);
    const TernaryForm& r = red.form;
    const i64 bound = r.gram()[2][2];

    std::vector<std::pair<i64, Vec3>> vectors;
    EllipsoidWalker(r).for_each(bound, [&](i64 x, i64 y, i64 z) {
        if (x == 0 && y == 0 && z == 0) return;
        Vec3 v{x, y, z};
        vectors.emplace_back(r(v), v);
    });
    std::sort(vectors.begin(), vectors.end());

    // successive minima
    std::array<i64, 3> lambda{};
    {
        std::vector<Vec3> seen;
        int found = 0;
        std::size_t i = 0;
        while (i < vectors.size() && found < 3) {
            const i64 nv = vectors[i].first;
            while (i < vectors.size() && vectors[i].first == nv) seen.push_back(vectors[i++].second);
            const int rk = span_rank(seen);
            while (found < rk) lambda[found++] = nv;
        }
        if (found < 3) throw InvariantError("canonical_form: successive minima not reached within bound");
    }

    auto shell = [&](i64 nv) {
        std::vector<Vec3> out;
        for (const auto& [n, v] : vectors)
            if (n == nv) out.push_back(v);
        return out;
    };
    const auto s1 = shell(lambda[0]), s2 = shell(lambda[1]), s3 = shell(lambda[2]);

    // key: (h, g, f) = (B(v1,v2), B(v1,v3), B(v2,v3)), minimized lexicographically
    std::optional<std::array<i64, 3>> best;
    Mat3 best_u{};
    u64 hits = 0;
    for (const auto& v1 : s1)
        for (const auto& v2 : s2) {
            const Vec3 c12 = cross(v1, v2);
            if (c12 == Vec3{0, 0, 0}) continue;
            const i64 hh = r.bilinear(v1, v2);
            if (best && hh > (*best)[0]) continue;
            for (const auto& v3 : s3) {
                const i64 det = dot(c12, v3);
                if (det != 1 && det != -1) continue;
                std::array<i64, 3> key{hh, r.bilinear(v1, v3), r.bilinear(v2, v3)};
                if (!best || key < *best) {
                    best = key;
                    hits = 1;
                    for (int row = 0; row < 3; ++row) {
                        best_u[row][0] = v1[row];
                        best_u[row][1] = v2[row];
                        best_u[row][2] = v3[row];
                    }
                } else if (key == *best) {
                    ++hits;
                }
            }
        }
    if (!best) throw InvariantError("canonical_form: no basis realizes the successive minima");

    const Mat3 total = multiply(red.transform, best_u);
    TernaryForm canon = q.transformed(total);
    return Canonical{canon, total, hits};
}

u64 automorph_count(const TernaryForm& q) { return canonical_form(q).automorphs; }

i64 level(const TernaryForm& q) {
    // 4M A^{-1} = 4M adj(A)/det has even integral entries  <=>  det | 2M adj_ij for all i, j
    const Mat3 adj = adjugate(q.gram());
    const i64 d = q.disc();
    i64 m = 1;
    for (const auto& row : adj)
        for (i64 e : row) {
            const i64 need = d / arith::gcd(d, 2 * e);
            m = std::lcm(m, need);
        }
    return m;
}

Equivalence equivalent(const TernaryForm& q1, const TernaryForm& q2) {
    if (q1.disc() != q2.disc()) return {};
    const Canonical c1 = canonical_form(q1);
    const Canonical c2 = canonical_form(q2);
    if (!(c1.form == c2.form)) return {};
    const Mat3 u = multiply(c1.transform, inverse_unimodular(c2.transform));
    if (!(q1.transformed(u) == q2)) throw InvariantError("equivalent: witness does not transform Q1 into Q2");
    return Equivalence{true, u};
}

}  // namespace heegner::ternary
