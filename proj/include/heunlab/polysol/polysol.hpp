#pragma once

#include "heunlab/spectral/spectral.hpp"

#include <Eigen/Core>

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace heunlab::polysol {

using cplx = std::complex<double>;
using spectral::Sign;
using spectral::SurfaceSpec;

class NotOnSurface : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class AmbiguousKernel : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateSlice : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SurfacePoint {
    cplx chi;
    cplx a;
    cplx s;
    SurfaceSpec spec;
};

/// Coefficients of Y' = (K/z^2 + R/z + N) Y.
struct LinearCoefficients {
    Eigen::Matrix2cd K;
    Eigen::Matrix2cd R;
    Eigen::Matrix2cd N;

    Eigen::Matrix2cd at(cplx z) const { return K / (z * z) + R / z + N; }
};

/// The extended system in (chi, a, s) for a possibly non-integer ell.
LinearCoefficients extended_system(cplx ell, cplx chi, cplx a, cplx s);

struct PolySolution {
    std::vector<cplx> coeffs; // Y2 = sum coeffs[j] z^j
    Sign sign;
    /// Smallest and second-smallest pivot magnitude relative to the largest.
    double pivot_ratio;
    double second_pivot_ratio;

    /// Y1(z) = +- z^ell Y2(1/z), as coefficients.
    std::vector<cplx> y1() const;
    /// Degree of the vector polynomial (Y1, Y2).
    int degree() const;
};

/// |P| divided by the sum of absolute monomial values at the point. For
/// ell = 0 this is the distance to the plane chi = -+1/2.
double membership_residual(const SurfacePoint &p);
constexpr double kMembershipTol = 1e-8;
constexpr double kPivotThreshold = 1e-8;

/// Numeric G1 +- G2 at the point.
Eigen::MatrixXcd assemble_G(const SurfacePoint &p);

/// Kernel vector of assemble_G by full-pivot elimination, normalized so the
/// largest coefficient is 1. Throws NotOnSurface or AmbiguousKernel.
PolySolution solve_polynomial_solution(const SurfacePoint &p, double tol = kMembershipTol);

/// Max over samples and components of |Y' - A Y| divided by the larger of
/// the term scale |Y'| + sum |A_ij Y_j| and the solution size |Y1| + |Y2|.
double verify_solution(const SurfacePoint &p, const PolySolution &sol, std::span<const cplx> z_samples);

/// Points of the surface with the given chi and s: every root a of the slice.
/// Throws DegenerateSlice when the slice vanishes identically.
std::vector<SurfacePoint> sample_surface(const SurfaceSpec &spec, cplx chi, cplx s, double tol = kMembershipTol);

/// Residual of the double confluent Heun equation, normalized by the larger of
/// the summed term magnitudes and |E| + |z E'| + |z^2 E''|.
double heun_residual(int ell, cplx lambda, cplx mu, std::span<const cplx> e_coeffs, std::span<const cplx> z_samples);

struct HeunSystemSolution {
    std::vector<cplx> y1;
    std::vector<cplx> y2;
    /// Residual of the chi = 0 system at the samples.
    double residual;
};

/// Y2 = E, Y1 = (2z/a)(E' - mu E), checked against the chi = 0 system with
/// s = 2 mu. Throws std::invalid_argument for a = 0 or E = 0.
HeunSystemSolution system_from_heun(int ell, std::span<const cplx> e_coeffs, cplx a, cplx mu,
                                    std::span<const cplx> z_samples);

/// Equispaced points on the unit circle, offset to avoid the real axis.
std::vector<cplx> unit_circle_samples(std::size_t n);

} // namespace heunlab::polysol
