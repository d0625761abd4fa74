#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace psadf {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Largest integer <= num/den. Works for negative values, unlike plain
// integer division.
inline Integer floor_div(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("floor_div: zero denominator");
    Integer q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

inline Integer ceil_div(const Integer& num, const Integer& den) {
    return -floor_div(-num, den);
}

inline Integer floor_rat(const Rational& r) {
    return floor_div(numerator(r), denominator(r));
}

inline Integer ceil_rat(const Rational& r) {
    return ceil_div(numerator(r), denominator(r));
}

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

// Canonical text form used everywhere (reports, CLI): "num/den", always with
// an explicit denominator.
inline std::string rational_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Compact human form: denominator omitted when 1.
inline std::string pretty_rational(const Rational& r) {
    if (is_integral(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "n", "n/d" and decimal literals like "3.25" (converted exactly).
std::optional<Rational> parse_rational(const std::string& text);

// Decimal rendering with the given number of significant digits, for
// human-facing summaries only.
std::string approx_decimal(const Rational& r, int significant = 6);

}  // namespace psadf
