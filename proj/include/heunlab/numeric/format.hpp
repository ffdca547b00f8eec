#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace heunlab::numeric {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
/// "RE+IMi" / "RE-IMi" with both parts in shortest round-trip form.
std::string format_complex(std::complex<double> z);

/// Accepts "RE", "IMi", "RE+IMi", "RE-IMi", "i", "-i". Throws std::invalid_argument.
std::complex<double> parse_complex(std::string_view text);
/// Strict decimal double. Throws std::invalid_argument.
double parse_double(std::string_view text);

/// "lo:hi:step" expanded into lo, lo+step, ... up to hi (inclusive within
/// half a step). Throws std::invalid_argument for step <= 0 or hi < lo.
std::vector<double> parse_range(std::string_view text);

} // namespace heunlab::numeric
