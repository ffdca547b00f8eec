#pragma once

#include <complex>
#include <span>
#include <vector>

namespace heunlab::numeric {

using cplx = std::complex<double>;

/// p(x) and p'(x) by Horner; coefficients from degree 0 up.
std::pair<cplx, cplx> horner_with_derivative(std::span<const cplx> coeffs, cplx x);

/// All roots of the polynomial with coefficients c[0] + c[1] x + ... .
/// Leading coefficients below `lead_cut` times the largest magnitude are
/// treated as zero, so a vanishing leading term lowers the root count.
/// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
/// Throws std::domain_error for the zero polynomial.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs, double lead_cut = 1e-14, int max_iter = 500);

} // namespace heunlab::numeric
