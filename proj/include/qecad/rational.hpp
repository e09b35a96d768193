#ifndef QECAD_RATIONAL_HPP
#define QECAD_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qecad {

// Exact arbitrary-precision rational. GMP keeps values canonical:
// gcd(|num|, den) = 1, den > 0, zero is 0/1.
using Rational = mpq_class;
using Integer = mpz_class;

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct timeout_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw usage_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline int sign_of(const Rational& r) { return sgn(r); }

inline Rational rat_abs(const Rational& r) { return abs(r); }

inline Rational rat_pow(const Rational& base, unsigned exp) {
    Rational acc(1), b = base;
    while (exp) {
        if (exp & 1u) acc *= b;
        exp >>= 1u;
        if (exp) b *= b;
    }
    return acc;
}

// "p/q" or "p"; optional leading minus.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        return make_rational(Integer(text.substr(0, slash)),
                             Integer(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw usage_error("malformed rational literal: " + text);
    }
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Decimal approximation with the given number of fractional digits,
// rounded toward zero. Exactness is never needed from this.
inline std::string decimal_string(const Rational& r, unsigned digits) {
    Integer scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Integer scaled = (r.get_num() * scale) / r.get_den();
    bool neg = scaled < 0;
    Integer mag = abs(scaled);
    std::string s = mag.get_str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out = s.substr(0, s.size() - digits);
    if (digits > 0) out += "." + s.substr(s.size() - digits);
    if (neg && (scaled != 0)) out.insert(0, "-");
    return out;
}

}  // namespace qecad

#endif  // QECAD_RATIONAL_HPP
