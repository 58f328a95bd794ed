#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "heegner/arith.hpp"
#include "heegner/errors.hpp"
#include "heegner/genus.hpp"

namespace heegner::genus {

std::vector<TernaryForm> enumerate_classes(i64 disc, bool relaxed) {
    if (disc <= 0) throw std::invalid_argument("enumerate_classes: determinant must be positive");
    if (disc > kMaxDisc)
        throw GuardError("enumerate_classes: determinant " + std::to_string(disc) + " exceeds " +
                         std::to_string(kMaxDisc));
    // A Minkowski-reduced ternary form satisfies abc <= 2 det.
    const i64 product_bound = (relaxed ? 4 : 2) * disc;
    std::map<std::array<i64, 6>, TernaryForm> found;

    for (i64 a = 1; a * a * a <= product_bound; ++a)
        for (i64 b = a; a * b * b <= product_bound; ++b)
            for (i64 h = -a / 2; h <= a / 2; ++h)
                for (i64 g = -a / 2; g <= a / 2; ++g)
                    for (i64 f = -b / 2; f <= b / 2; ++f) {
                        const bool all_pos = f > 0 && g > 0 && h > 0;
                        const bool all_nonpos = f <= 0 && g <= 0 && h <= 0;
                        if (!relaxed && !all_pos && !all_nonpos) continue;
                        const i64 m = a * b - h * h;
                        const i64 num = disc + a * f * f - 2 * f * g * h + b * g * g;
                        if (num % m != 0) continue;
                        const i64 c = num / m;
                        if (c < b || a * b * c > product_bound) continue;
                        if (!relaxed && all_nonpos && a + b + 2 * (f + g + h) < 0) continue;
                        const TernaryForm q = TernaryForm::from_coefficients(a, b, c, f, g, h);
                        const TernaryForm canon = ternary::canonical_form(q).form;
                        found.emplace(canon.coefficients(), canon);
                    }

    std::vector<TernaryForm> out;
    for (const auto& [key, form] : found) out.push_back(form);
    return out;
}

Rational GenusRecord::mass() const {
    Rational s(0);
    for (const auto& c : classes) s += Rational(1, c.unit_weight);
    return s;
}

Rational GenusRecord::automorph_mass() const {
    Rational s(0);
    for (const auto& c : classes) s += Rational(1, static_cast<i64>(c.automorphs));
    return s;
}

Mat3 reference_form_at_2(u64 ell) {
    if (ell == 2) return Mat3{{{3, 2, 2}, {2, 4, 0}, {2, 0, 4}}};
    return Mat3{{{-1, 0, 0}, {0, 0, -2}, {0, -2, 0}}};
}

Mat3 reference_form_at_ell(u64 ell) {
    if (ell == 2) return reference_form_at_2(ell);
    // trace-zero norm form of the maximal order of the ramified local
    // quaternion algebra: i^2 = u (non-residue), j^2 = ell
    i64 u = 2;
    while (arith::kronecker(u, static_cast<i64>(ell)) != -1) ++u;
    const auto l = static_cast<i64>(ell);
    return Mat3{{{-u, 0, 0}, {0, -l, 0}, {0, 0, u * l}}};
}

GenusRecord gross_genus(u64 ell, u64 N) {
    if (!arith::is_prime(ell)) throw std::invalid_argument("gross_genus: ell must be prime");
    if (N != 1) throw std::invalid_argument("gross_genus: only N = 1 is supported");
    const i64 disc = 4 * static_cast<i64>(N * N * ell * ell);
    if (disc > kMaxDisc) throw GuardError("gross_genus: determinant 4 N^2 ell^2 exceeds guard");

    const auto classes = enumerate_classes(disc);
    std::vector<std::pair<GenusSymbol, std::vector<TernaryForm>>> genera;
    for (const auto& q : classes) {
        GenusSymbol sym = genus_symbol(q);
        auto it = std::find_if(genera.begin(), genera.end(), [&](const auto& g) { return g.first == sym; });
        if (it == genera.end())
            genera.emplace_back(sym, std::vector<TernaryForm>{q});
        else
            it->second.push_back(q);
    }

    const LocalSymbol ref2 = local_symbol(reference_form_at_2(ell), 2);
    const LocalSymbol refl = local_symbol(reference_form_at_ell(ell), ell);
    const i64 target_level = static_cast<i64>(N * ell);

    std::vector<std::size_t> qualifying;
    for (std::size_t i = 0; i < genera.size(); ++i) {
        const auto& [sym, forms] = genera[i];
        const bool local_ok = sym.at(2) && *sym.at(2) == ref2 && sym.at(ell) && *sym.at(ell) == refl;
        const bool level_ok = std::all_of(forms.begin(), forms.end(),
                                          [&](const TernaryForm& q) { return ternary::level(q) == target_level; });
        if (local_ok && level_ok) qualifying.push_back(i);
    }

    if (qualifying.size() != 1) {
        std::ostringstream os;
        os << (qualifying.empty() ? "no qualifying genus" : "ambiguous genus") << " for ell=" << ell
           << ", N=" << N << "; genera found:";
        for (const auto& [sym, forms] : genera) {
            os << "\n  {" << sym.str() << "} level " << ternary::level(forms.front()) << ", classes:";
            for (const auto& q : forms) os << " " << q.str();
        }
        throw InvariantError(os.str());
    }

    const auto& [sym, forms] = genera[qualifying.front()];
    GenusRecord rec;
    rec.ell = ell;
    rec.N = N;
    rec.disc = disc;
    rec.level = target_level;
    rec.symbol = sym;

    Rational aut_mass(0);
    std::vector<u64> auts;
    for (const auto& q : forms) {
        auts.push_back(ternary::automorph_count(q));
        aut_mass += Rational(1, static_cast<i64>(auts.back()));
    }
    // Eichler mass: sum 1/#R_s^x = (ell - 1)/24
    const Rational factor = Rational(static_cast<i64>(ell) - 1, 24) / aut_mass;
    if (!factor.is_integer() || factor.num() <= 0)
        throw InvariantError("gross_genus: automorph/unit calibration factor " + factor.str() + " is not integral");
    rec.calibration = factor.num();
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (auts[i] % static_cast<u64>(rec.calibration) != 0)
            throw InvariantError("gross_genus: automorph count not divisible by calibration factor");
        rec.classes.push_back({forms[i], auts[i], static_cast<i64>(auts[i]) / rec.calibration});
    }
    return rec;
}

Rational automorph_weighted_sum(const GenusRecord& g, i64 n, bool primitive) {
    Rational s(0);
    for (const auto& c : g.classes) {
        const u64 r = primitive ? ternary::primitive_rep_count(c.form, n) : ternary::rep_count(c.form, n);
        s += Rational(static_cast<i64>(r), static_cast<i64>(c.automorphs));
    }
    return s;
}

Rational genus_avg(const GenusRecord& g, i64 n, bool primitive) {
    return automorph_weighted_sum(g, n, primitive) / g.automorph_mass();
}

Rational jones_constant(const GenusRecord& g, const binary_qf::OrderParams& params) {
    const Rational avg = genus_avg(g, params.d_c(), true);
    return avg * Rational(binary_qf::unit_count(params)) / Rational(binary_qf::class_number_order(params));
}

}  // namespace heegner::genus
