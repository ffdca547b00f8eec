#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace heunlab::ratpoly {

/// Exact rational number. GMP keeps it canonical: gcd(num, den) = 1, den > 0.
using Rational = mpq_class;

/// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed input or q = 0.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is one, otherwise "p/q".
std::string to_string(const Rational &q);

/// Correctly rounded (round-to-nearest-even) conversion. mpq_get_d truncates,
/// which would bias residuals, so this goes through MPFR.
double to_double(const Rational &q);

} // namespace heunlab::ratpoly
