#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heegner/genus.hpp"
#include "heegner/rational.hpp"

namespace heegner::surjectivity {

using genus::GenusRecord;
using ternary::i64;
using ternary::u64;

enum class Provenance { Theta, Oracle };
std::string to_string(Provenance p);

struct EigenvalueEntry {
    i64 value = 0;
    Provenance provenance = Provenance::Theta;
    i64 aux_discriminant = 0;  // D0 used for a theta-derived entry
};

// Hecke eigenvalues a_G(n) of the weight-2 newform of level ell.
class EigenvalueTable {
public:
    explicit EigenvalueTable(u64 ell);

    u64 ell() const { return ell_; }
    void set_prime(u64 p, const EigenvalueEntry& entry);  // checks Hasse
    bool has_prime(u64 p) const { return entries_.count(p) != 0; }
    const EigenvalueEntry& entry(u64 p) const;
    i64 at_prime(u64 p) const { return entry(p).value; }
    i64 at_prime_power(u64 p, int m) const;  // a_G(p^m), m >= 0; a_G(p^-1) := 0
    i64 at(u64 n) const;                     // multiplicative, gcd(n, ell) = 1
    const std::map<u64, EigenvalueEntry>& entries() const { return entries_; }
    u64 prime_bound() const { return bound_; }
    void set_prime_bound(u64 b) { bound_ = b; }

private:
    u64 ell_;
    u64 bound_ = 0;  // all primes <= bound_ (except ell) are present
    std::map<u64, EigenvalueEntry> entries_;
    mutable std::map<std::pair<u64, int>, i64> powers_;
};

// a_g(n) = r(Q_s, n) - r(gen, n)
Rational cusp_coefficient(const GenusRecord& g, std::size_t s, i64 n);

struct EigenvalueDerivation {
    i64 value = 0;
    i64 D0 = 0;
    Rational base;    // a_g(|D0|)
    Rational lifted;  // a_g(|D0| p^2)
};

// Candidate auxiliary discriminants: fundamental D0 in [-100, 0) with
// (D0/ell) = -1, p not dividing D0, a_g(|D0|) != 0 for class s.
std::vector<i64> auxiliary_discriminants(const GenusRecord& g, u64 p, std::size_t s = 0);

// a_G(p) = a_g(|D0| p^2) / a_g(|D0|) + (D0/p)
EigenvalueDerivation derive_eigenvalue(const GenusRecord& g, u64 p, std::size_t s = 0,
                                       std::optional<i64> D0 = std::nullopt);

// Theta-derived a_G(p) for all primes p <= pmax, p != ell.
EigenvalueTable build_eigenvalue_table(const GenusRecord& g, u64 pmax, unsigned threads = 0);
void extend_eigenvalue_table(EigenvalueTable& table, const GenusRecord& g, u64 pmax, unsigned threads = 0);

// Point-count oracle: a_p = p + 1 - #E(F_p) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
i64 elliptic_curve_ap(const std::array<i64, 5>& ainvs, u64 p);
// Model of the optimal curve of conductor 11 (a-invariants [0,-1,1,-10,-20]).
std::optional<std::array<i64, 5>> oracle_curve(u64 ell);

// r_c for a sign assignment eps(p) in {+1,-1} per prime of c, via the
// divisor-sum definition. Infinite when the denominator vanishes.
ExtRational r_c(const EigenvalueTable& table, u64 c, const std::map<u64, int>& eps);
ExtRational r_prime_power(const EigenvalueTable& table, u64 p, int m, int eps);

struct WorstCase {
    ExtRational value;
    std::map<u64, int> pattern;
};
// Minimum of r_c over all multiplicative sign assignments.
WorstCase r_c_worst(const EigenvalueTable& table, u64 c);

// r~_c^2 = phi(c)^2 / (16^v(c) sigma0(c)^2 c), exact
Rational tilde_r_squared(u64 c);
bool tilde_r_exceeds(u64 c, const Rational& a);                      // r~_c > a
bool at_least_tilde_r(const ExtRational& r, u64 c);                  // r >= r~_c
// Prime cutoffs beyond which r_{p^m} > a for every m >= 1:
//   Pa:    P_a = (2a + sqrt(4a^2 + 1))^2
//   Hasse: (2a + 1)^2, from r_p >= (sqrt(p) - 1)/2
enum class PrimeCutoff { Pa, Hasse };
std::string to_string(PrimeCutoff c);
bool beyond_prime_cutoff(u64 p, const Rational& a, PrimeCutoff kind = PrimeCutoff::Pa);
long double prime_cutoff(const Rational& a);                         // P_a (display only)
int exponent_cutoff(u64 p, const Rational& a);                       // M_{p,a}

struct CandidateEntry {
    u64 p;
    int m;
    Rational r;  // worst case over the sign at p
    int eps;     // sign attaining it
};

struct CandidateSets {
    Rational a;
    u64 largest_prime_checked = 0;  // largest prime p <= P_a
    std::vector<CandidateEntry> entries;  // sorted by (p, m)
    std::map<u64, Rational> min_r;        // min(1, min_m r_{p^m}) for primes with entries
};

// C_a = {(p, m) : r_{p^m} <= a}. window scales the prime and exponent
// cutoffs (window = 2 is the completeness certificate).
CandidateSets candidate_sets(const EigenvalueTable& table, const Rational& a, u64 window = 1,
                             PrimeCutoff kind = PrimeCutoff::Pa);
u64 required_prime_bound(const Rational& a, u64 window = 1, PrimeCutoff kind = PrimeCutoff::Pa);

struct SearchNode {
    u64 c = 1;
    Rational r;
    std::map<u64, int> pattern;
    int v = 0;
};

struct ClassSearch {
    std::size_t cls = 0;
    i64 weight = 0;
    Rational m_s;
    Rational a;
    CandidateSets sets;
    std::vector<SearchNode> members;  // c >= 2, ascending
};

struct Assumptions {
    std::string sign_patterns;
    std::string threshold;
    std::string root;
    std::string eigenvalues;
    std::string recursion;
    std::string prime_cutoff;
};

struct SearchReport {
    u64 ell = 0;
    u64 N = 1;
    Rational r_min;
    CandidateSets c1;
    std::vector<ClassSearch> classes;
    std::vector<SearchNode> conductors;  // union, c >= 2, ascending
    std::size_t count() const { return conductors.size(); }
    u64 max() const { return conductors.empty() ? 1 : conductors.back().c; }
    Assumptions assumptions;
    std::map<int, std::vector<u64>> by_v;
};

struct SearchOptions {
    std::optional<Rational> threshold;  // replaces every m_s (diagnostics)
    PrimeCutoff cutoff = PrimeCutoff::Pa;
    unsigned threads = 0;
};

Rational class_threshold(const GenusRecord& g, std::size_t s);  // m_s = max(1, w_s'/w_s)
Rational r_min(const EigenvalueTable& table);
SearchReport dfs_search(const GenusRecord& g, EigenvalueTable& table, const SearchOptions& opts = {});
SearchReport dfs_search(u64 ell, u64 N = 1);

struct LemmaVerdict {
    std::size_t cls;
    Rational m_s;
    bool guaranteed;  // phi(c) > m_s 2^{2v} sigma0(c) sqrt(c)
};

struct TheoremVerdict {
    std::size_t cls;
    long double lhs;
    long double rhs_unit_weights;
    long double rhs_automorph_weights;
    bool guaranteed_unit_weights;
    bool guaranteed_automorph_weights;
    bool calibration_sensitive;
};

struct BoundReport {
    u64 c = 1;
    i64 D = 0;
    bool applicable = true;
    std::string note;
    std::vector<LemmaVerdict> lemma;
    std::vector<TheoremVerdict> theorem;
};

BoundReport theorem_bound(const GenusRecord& g, i64 D, u64 c);

std::string pattern_string(const std::map<u64, int>& pattern);

}  // namespace heegner::surjectivity
