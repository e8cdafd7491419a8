#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace semitree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline BigInt ipow(BigInt base, unsigned e) {
    BigInt r = 1;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// base^e for integer e of either sign (base != 0 when e < 0).
inline Rational rat_pow(const BigInt& base, int e) {
    if (e >= 0) return Rational(ipow(base, unsigned(e)));
    return Rational(BigInt(1), ipow(base, unsigned(-e)));
}

inline double to_double(const Rational& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

inline std::string to_string(const Rational& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) s += "/" + r.denominator().str();
    return s;
}

} // namespace semitree
