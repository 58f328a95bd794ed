#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heegner/binary_qf.hpp"
#include "heegner/rational.hpp"
#include "heegner/ternary_qf.hpp"

namespace heegner::genus {

using ternary::i64;
using ternary::Mat3;
using ternary::TernaryForm;
using ternary::u64;

// One Jordan constituent p^scale * (unimodular form of the given rank).
// Odd p: det_sign is the Legendre symbol of the unit determinant.
// p = 2: det_sign is +1 iff the unit determinant is ±1 mod 8; odd_type marks
// type I; oddity is the compartment total on the first constituent of each
// compartment and 0 elsewhere (canonical form).
struct JordanComponent {
    int scale = 0;
    int rank = 0;
    int det_sign = 1;
    bool odd_type = false;
    int oddity = 0;
    friend bool operator==(const JordanComponent&, const JordanComponent&) = default;
};

struct LocalSymbol {
    u64 p = 0;
    std::vector<JordanComponent> components;
    friend bool operator==(const LocalSymbol&, const LocalSymbol&) = default;
    std::string str() const;
};

// Canonical local symbol of a nondegenerate integral symmetric matrix at p.
LocalSymbol local_symbol(const Mat3& gram, u64 p);

// Jordan constituents before canonicalization (p = 2: det_sign holds the
// unit determinant mod 8 and oddity the raw constituent oddity).
std::vector<JordanComponent> jordan_constituents(const Mat3& gram, u64 p);

struct GenusSymbol {
    std::vector<LocalSymbol> locals;  // one per p | 2 disc, ascending
    friend bool operator==(const GenusSymbol&, const GenusSymbol&) = default;
    const LocalSymbol* at(u64 p) const;
    std::string str() const;
};

GenusSymbol genus_symbol(const TernaryForm& q);
bool same_genus(const TernaryForm& q1, const TernaryForm& q2);

constexpr i64 kMaxDisc = 100'000;

// One canonical representative per class of positive forms of determinant disc.
// relaxed = true scans with doubled product bound and no sign normalization
// (completeness certificate).
std::vector<TernaryForm> enumerate_classes(i64 disc, bool relaxed = false);

struct ClassInfo {
    TernaryForm form;
    u64 automorphs;
    i64 unit_weight;  // automorphs / calibration factor
};

struct GenusRecord {
    u64 ell = 0;
    u64 N = 1;
    i64 disc = 0;
    i64 level = 0;
    GenusSymbol symbol;
    std::vector<ClassInfo> classes;
    i64 calibration = 0;  // automorphs = calibration * unit_weight

    Rational mass() const;            // sum 1/unit_weight
    Rational automorph_mass() const;  // sum 1/automorphs
    std::size_t size() const { return classes.size(); }
};

// Local reference Gram matrices used to single out the Gross genus.
Mat3 reference_form_at_2(u64 ell);
Mat3 reference_form_at_ell(u64 ell);

GenusRecord gross_genus(u64 ell, u64 N = 1);

// Automorph-weighted average of r (or r*) over the genus.
Rational genus_avg(const GenusRecord& g, i64 n, bool primitive);
// sum_s r(Q_s, n)/|Aut(Q_s)| (or r*)
Rational automorph_weighted_sum(const GenusRecord& g, i64 n, bool primitive);
// r*(gen, d_c) * u_{D,c} / h(O_{D,c})
Rational jones_constant(const GenusRecord& g, const binary_qf::OrderParams& params);

}  // namespace heegner::genus
