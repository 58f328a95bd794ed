#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/genus.hpp"

namespace heegner::genus {

namespace {

constexpr int kInfinite = 1 << 20;

int valuation(std::int64_t x, u64 p) {
    if (x == 0) return kInfinite;
    int v = 0;
    auto ux = static_cast<u64>(x < 0 ? -x : x);
    while (ux % p == 0) {
        ux /= p;
        ++v;
    }
    return v;
}

int valuation(const Rational& r, u64 p) {
    if (r.is_zero()) return kInfinite;
    return valuation(r.num(), p) - valuation(r.den(), p);
}

Rational power(u64 p, int k) {
    Rational r(1);
    for (int i = 0; i < std::abs(k); ++i) r *= Rational(static_cast<std::int64_t>(p));
    return k >= 0 ? r : r.inverse();
}

// Unit part u of a p-adic unit given as a rational (num, den both prime to p).
int unit_mod8(const Rational& u) {
    const std::int64_t n = ((u.num() % 8) + 8) % 8;
    const std::int64_t d = ((u.den() % 8) + 8) % 8;
    return static_cast<int>((n * d) % 8);  // d^{-1} = d mod 8
}

int unit_legendre(const Rational& u, u64 p) {
    const auto pp = static_cast<std::int64_t>(p);
    return arith::kronecker(u.num() % pp, pp) * arith::kronecker(u.den() % pp, pp);
}

struct Block {
    int scale;
    int size;       // 1 or 2
    Rational unit;  // unit part of the block determinant
};

std::vector<Block> jordan_blocks(const Mat3& gram, u64 p) {
    std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = Rational(gram[i][j]);
    std::vector<int> active{0, 1, 2};
    std::vector<Block> blocks;

    while (!active.empty()) {
        int v = kInfinite;
        for (int i : active)
            for (int j : active) v = std::min(v, valuation(m[i][j], p));
        if (v == kInfinite) throw std::invalid_argument("local_symbol: degenerate Gram matrix");

        int pivot = -1;
        for (int i : active)
            if (valuation(m[i][i], p) == v) {
                pivot = i;
                break;
            }
        int pi = -1, pj = -1;
        if (pivot < 0) {
            for (int i : active)
                for (int j : active)
                    if (pi < 0 && i != j && valuation(m[i][j], p) == v) {
                        pi = i;
                        pj = j;
                    }
            if (p != 2) {
                // e_i <- e_i + e_j makes the diagonal entry attain valuation v
                const Rational diag = m[pi][pi] + Rational(2) * m[pi][pj] + m[pj][pj];
                for (int k : active) {
                    if (k == pi) continue;
                    m[pi][k] += m[pj][k];
                    m[k][pi] = m[pi][k];
                }
                m[pi][pi] = diag;
                pivot = pi;
            }
        }

        if (pivot >= 0) {
            const Rational piv = m[pivot][pivot];
            std::vector<int> rest;
            for (int i : active)
                if (i != pivot) rest.push_back(i);
            for (int r : rest) {
                const Rational f = m[r][pivot] / piv;
                for (int s : rest) m[r][s] -= f * m[pivot][s];
            }
            blocks.push_back({v, 1, piv / power(p, v)});
            active = rest;
            continue;
        }

        // p = 2, even block on (pi, pj)
        const Rational a = m[pi][pi], b = m[pi][pj], c = m[pj][pj];
        const Rational det = a * c - b * b;
        std::vector<int> rest;
        for (int i : active)
            if (i != pi && i != pj) rest.push_back(i);
        for (int r : rest)
            for (int s : rest) {
                // [m_r,pi m_r,pj] B^{-1} [m_pi,s m_pj,s]^T
                const Rational x = m[r][pi], y = m[r][pj], xs = m[pi][s], ys = m[pj][s];
                const Rational corr = (x * (c * xs - b * ys) + y * (a * ys - b * xs)) / det;
                m[r][s] -= corr;
            }
        blocks.push_back({v, 2, det / power(p, 2 * v)});
        active = rest;
    }
    return blocks;
}

}  // namespace

std::vector<JordanComponent> jordan_constituents(const Mat3& gram, u64 p) {
    if (p < 2 || !arith::is_prime(p)) throw std::invalid_argument("local_symbol: p = " + std::to_string(p) + " is not prime");
    const auto blocks = jordan_blocks(gram, p);
    std::map<int, JordanComponent> by_scale;
    std::map<int, Rational> det_unit;
    for (const auto& b : blocks) {
        auto& comp = by_scale[b.scale];
        comp.scale = b.scale;
        comp.rank += b.size;
        auto it = det_unit.find(b.scale);
        det_unit[b.scale] = (it == det_unit.end() ? Rational(1) : it->second) * b.unit;
        if (p == 2 && b.size == 1) {
            comp.odd_type = true;
            comp.oddity = (comp.oddity + unit_mod8(b.unit)) % 8;
        }
    }
    std::vector<JordanComponent> out;
    for (auto& [scale, comp] : by_scale) {
        comp.det_sign = (p == 2) ? unit_mod8(det_unit[scale]) : unit_legendre(det_unit[scale], p);
        out.push_back(comp);
    }
    return out;
}

LocalSymbol local_symbol(const Mat3& gram, u64 p) {
    LocalSymbol sym{p, jordan_constituents(gram, p)};
    if (p != 2) return sym;

    auto& comps = sym.components;
    const std::size_t n = comps.size();
    for (auto& c : comps) c.det_sign = (c.det_sign == 1 || c.det_sign == 7) ? 1 : -1;

    // compartments: maximal runs of odd constituents at consecutive scales
    std::vector<std::vector<std::size_t>> compartments;
    for (std::size_t i = 0; i < n; ++i) {
        if (!comps[i].odd_type) continue;
        if (!compartments.empty() && i > 0 && compartments.back().back() == i - 1 &&
            comps[i].scale == comps[i - 1].scale + 1)
            compartments.back().push_back(i);
        else
            compartments.push_back({i});
    }
    for (const auto& comp : compartments) {
        int total = 0;
        for (std::size_t i : comp) {
            total += comps[i].oddity;
            comps[i].oddity = 0;
        }
        comps[comp.front()].oddity = total % 8;
    }

    // trains: consecutive constituents are linked when every unit step of
    // scale between them touches an odd constituent
    std::vector<std::vector<std::size_t>> trains;
    for (std::size_t i = 0; i < n; ++i) {
        bool linked = false;
        if (i > 0) {
            const int gap = comps[i].scale - comps[i - 1].scale;
            if (gap == 1) linked = comps[i].odd_type || comps[i - 1].odd_type;
            if (gap == 2) linked = comps[i].odd_type && comps[i - 1].odd_type;
        }
        if (linked)
            trains.back().push_back(i);
        else
            trains.push_back({i});
    }

    // sign walking: push every -1 to the first constituent of its train
    for (const auto& train : trains) {
        for (std::size_t k = train.size(); k-- > 1;) {
            const std::size_t t1 = train[k], t0 = train[k - 1];
            if (comps[t1].det_sign != -1) continue;
            comps[t1].det_sign = 1;
            comps[t0].det_sign = -comps[t0].det_sign;
            for (const auto& comp : compartments) {
                const bool touches = std::find(comp.begin(), comp.end(), t0) != comp.end() ||
                                     std::find(comp.begin(), comp.end(), t1) != comp.end();
                if (touches) comps[comp.front()].oddity = (comps[comp.front()].oddity + 4) % 8;
            }
        }
    }
    return sym;
}

std::string LocalSymbol::str() const {
    std::ostringstream os;
    os << p << ":";
    for (const auto& c : components) {
        os << " [" << c.scale << "," << c.rank << "," << (c.det_sign > 0 ? "+" : "-");
        if (p == 2) os << "," << (c.odd_type ? "I" : "II") << "," << c.oddity;
        os << "]";
    }
    return os.str();
}

const LocalSymbol* GenusSymbol::at(u64 p) const {
    for (const auto& l : locals)
        if (l.p == p) return &l;
    return nullptr;
}

std::string GenusSymbol::str() const {
    std::string s;
    for (const auto& l : locals) {
        if (!s.empty()) s += "; ";
        s += l.str();
    }
    return s;
}

GenusSymbol genus_symbol(const TernaryForm& q) {
    GenusSymbol g;
    std::vector<u64> primes{2};
    for (const auto& pe : arith::factorize(static_cast<u64>(q.disc())).factors())
        if (pe.p != 2) primes.push_back(pe.p);
    for (u64 p : primes) g.locals.push_back(local_symbol(q.gram(), p));
    return g;
}

bool same_genus(const TernaryForm& q1, const TernaryForm& q2) {
    if (q1.disc() != q2.disc()) throw std::invalid_argument("same_genus: forms have different determinants");
    return genus_symbol(q1) == genus_symbol(q2);
}

}  // namespace heegner::genus
