#pragma once

#include <cstdint>
#include <vector>

#include "heegner/rational.hpp"

namespace heegner::binary_qf {

// Order O_{D,c} of conductor c in the imaginary quadratic field of
// fundamental discriminant D < 0.
class OrderParams {
public:
    OrderParams(std::int64_t D, std::int64_t c);  // throws std::invalid_argument

    std::int64_t D() const { return D_; }
    std::int64_t c() const { return c_; }
    std::int64_t d_c() const { return d_c_; }        // -D c^2
    std::int64_t discriminant() const { return -d_c_; }  // D c^2

private:
    std::int64_t D_;
    std::int64_t c_;
    std::int64_t d_c_;
};

struct BinaryForm {
    std::int64_t a, b, c;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    bool is_primitive() const;
    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
    friend auto operator<=>(const BinaryForm&, const BinaryForm&) = default;
};

// Primitive reduced forms of discriminant delta, one per proper class,
// sorted lexicographically by (a, b, c).
std::vector<BinaryForm> reduced_forms(std::int64_t delta);

std::int64_t class_number_order(const OrderParams& params);
int unit_count(const OrderParams& params);
std::int64_t gamma_size(const OrderParams& params);

// #Gamma_{D,c} / u_{D,c}, exact.
Rational gamma_over_units(const OrderParams& params);

}  // namespace heegner::binary_qf
