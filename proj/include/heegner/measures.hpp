#pragma once

#include <cstdint>
#include <vector>

#include "heegner/binary_qf.hpp"
#include "heegner/genus.hpp"
#include "heegner/rational.hpp"

namespace heegner::measures {

using genus::GenusRecord;
using ternary::i64;

// Probability measure on the classes of a genus. Construction checks that
// the values are non-negative and sum to exactly 1.
class Measure {
public:
    Measure(const GenusRecord& g, std::vector<Rational> values);

    const std::vector<Rational>& values() const { return values_; }
    const Rational& operator[](std::size_t s) const { return values_.at(s); }
    std::size_t size() const { return values_.size(); }
    bool same_support(const Measure& other) const { return forms_ == other.forms_; }

private:
    std::vector<std::array<i64, 6>> forms_;
    std::vector<Rational> values_;
};

Measure mu_canonical(const GenusRecord& g);

// Throws std::invalid_argument naming the violated predicate.
void validate_heegner(const GenusRecord& g, const binary_qf::OrderParams& params, std::uint64_t N);

// mu_{D,c}(s) = u_{D,c} r*(Q_s, -D c^2) / (|Aut(Q_s)| 2^nu(N) h(O_{D,c}))
Measure mu_heegner(const GenusRecord& g, const binary_qf::OrderParams& params, std::uint64_t N = 1);

Rational tv_distance(const Measure& m1, const Measure& m2);

struct RecursionCheck {
    bool holds = false;
    std::vector<Rational> lhs;  // mu_{D,cr} - mu_can
    std::vector<Rational> rhs;  // a_G(r)/(r+1) (mu_{D,c} - mu_can)
    i64 a_r = 0;
    bool ramanujan = false;  // |a_G(r)| <= 2 sqrt(r)
};

RecursionCheck recursion_check(const GenusRecord& g, i64 D, i64 c, i64 r, i64 a_r);

}  // namespace heegner::measures
