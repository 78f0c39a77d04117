#pragma once

/**
 * @file rational.hpp
 * @brief Exact arbitrary-precision rational arithmetic plus the small
 *        combinatorial helpers used throughout the library.
 *
 * Every probability in this library is an exact Rational; floating point
 * never enters a computation. Decimal strings are a rendering of the exact
 * value and are display-only.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "regen/errors.hpp"

namespace regen {

using Int = boost::multiprecision::cpp_int;

/// Canonical rational: reduced to lowest terms, denominator > 0, zero is 0/1.
/// The backing type maintains canonical form after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline Int factorial(int n) {
    if (n < 0) throw std::domain_error("factorial: negative argument");
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline Int binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1; // always divides exactly
    }
    return r;
}

inline Rational pow_rational(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("pow_rational: zero to negative power");
        return 1 / pow_rational(base, -exponent);
    }
    Rational acc = 1;
    Rational b = base;
    int e = exponent;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

/// Parses "num", "num/den" with optional leading '-' on either component.
/// The result is canonicalized; a zero denominator is rejected.
inline Rational parse_rational(std::string_view text) {
    auto is_int = [](std::string_view s) {
        if (!s.empty() && s.front() == '-') s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!is_int(num) || !is_int(den))
        throw validation_error("not a rational: '" + std::string(text) + "'");
    Int n{std::string(num)};
    Int d{std::string(den)};
    if (d == 0) throw validation_error("zero denominator: '" + std::string(text) + "'");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(n, d);
}

/// Canonical string form: "num/den", or just "num" for integers.
inline std::string to_string(const Rational& r) {
    return r.str();
}

/// Fixed-point decimal rendering of the exact value, rounded half away from
/// zero at the last digit. Display-only; never feeds back into computation.
inline std::string to_decimal_string(const Rational& r, int digits = 12) {
    if (digits < 0) throw std::domain_error("to_decimal_string: negative digit count");
    const bool negative = r < 0;
    const Rational a = negative ? Rational(-r) : r;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    // round(a * scale) = floor((2*num*scale + den) / (2*den))
    Int scaled = (2 * numerator(a) * scale + denominator(a)) / (2 * denominator(a));
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::string out = negative && scaled != 0 ? "-" : "";
    out += whole.str();
    if (digits > 0) {
        std::string f = frac.str();
        out += '.';
        out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
        out += f;
    }
    return out;
}

} // namespace regen
