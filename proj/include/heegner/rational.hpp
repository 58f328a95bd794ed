#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace heegner {

using i128 = __int128;

// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
// Intermediate products use 128 bits; results that do not fit raise
// std::overflow_error instead of wrapping.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    static Rational from_wide(i128 n, i128 d) {
        Rational r;
        r.assign_wide(n, d);
        return r;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    Rational operator-() const { return from_wide(-static_cast<i128>(num_), den_); }
    Rational abs() const { return num_ < 0 ? -*this : *this; }
    Rational inverse() const {
        if (num_ == 0) throw std::domain_error("Rational: inverse of zero");
        return from_wide(den_, num_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                         static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    // "p/q" always, including integers ("3/1") and zero ("0/1").
    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }
    static Rational parse(const std::string& s);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void assign(std::int64_t n, std::int64_t d) { assign_wide(n, d); }
    void assign_wide(i128 n, i128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Nonnegative rational or +infinity (used where a denominator may vanish).
struct ExtRational {
    bool infinite = false;
    Rational value;

    static ExtRational inf() { return ExtRational{true, Rational(0)}; }
    static ExtRational of(const Rational& r) { return ExtRational{false, r}; }

    friend bool operator<(const ExtRational& a, const ExtRational& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
    friend ExtRational operator*(const ExtRational& a, const ExtRational& b) {
        if (a.infinite || b.infinite) return inf();
        return of(a.value * b.value);
    }
    std::string str() const { return infinite ? std::string("inf") : value.str(); }
};

}  // namespace heegner
