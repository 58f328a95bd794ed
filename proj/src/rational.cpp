#include "heegner/rational.hpp"

#include <limits>

namespace heegner {

namespace {

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

void Rational::assign_wide(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n == 0) d = 1;
    if (!fits64(n) || !fits64(d)) throw std::overflow_error("Rational: value exceeds 64-bit range");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    }
}

}  // namespace heegner
