#pragma once

#include <gmpxx.h>

#include <string>

namespace cplogic {

// All probabilities in the system are exact rationals.  Decimal literals are
// read as fractions over powers of ten, never as floating point.
using Rational = mpq_class;

Rational make_rational(long num, long den);

// Accepts "0.25", "1/4", "25/100", "1".  Throws CpError(syntax_error) on
// malformed input.
Rational parse_rational(const std::string& text);

// Canonical form: "n/d", or "n" when the denominator is 1.
std::string rational_string(const Rational& q);

// Fixed-point decimal with `digits` fractional digits, round half to even.
std::string decimal_string(const Rational& q, int digits = 6);

}  // namespace cplogic
