#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace addmart {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact binomial coefficient C(n, k); zero when k > n.
Int binomial(unsigned n, unsigned k);

/// Exact n!.
Int factorial(unsigned n);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Canonical string form: plain integer when the denominator is one,
/// otherwise "p/q" in lowest terms.
std::string rational_to_string(const Rational& r);

/// Parses "p/q", integers, and plain decimal strings ("-0.125") exactly.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

/// Fixed 17-significant-digit rendering used by the text reports so that
/// emitted values round-trip through parsing.
std::string format_double(double v);

}  // namespace addmart
