#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace mcs {

// Exact time and utilization. Every scheduling decision (EDF ordering, budget
// exhaustion, schedulability predicates) is made on this type.
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q", an integer, or a plain decimal such as "0.45" into an exact
/// value. Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

Rational floor_to_multiple(const Rational& value, const Rational& step);

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace mcs
