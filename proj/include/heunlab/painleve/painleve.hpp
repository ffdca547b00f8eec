#pragma once

#include "heunlab/numeric/dopri5.hpp"
#include "heunlab/spectral/spectral.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace heunlab::painleve {

using cplx = std::complex<double>;
using spectral::MPoly;
using spectral::Rational;
using spectral::SurfaceSpec;

/// (v_chi, v_a, v_s) of the isomonodromic field at a point.
std::array<cplx, 3> v_field(cplx ell, cplx chi, cplx a, cplx s);

/// v_chi dP/dchi + v_a dP/da + v_s dP/ds with exact coefficients.
MPoly lie_derivative(const MPoly &p, const Rational &ell);

/// h with L_v P = h P for P = P_{ell,sign}. Throws InternalInconsistency if
/// P does not divide its Lie derivative.
MPoly multiplier(const SurfaceSpec &spec);

/// `primed` is the field above divided by v_s; `unprimed` is the same system
/// with ell replaced by -ell.
enum class FlowSystem { primed, unprimed };

/// Path in the s-plane parametrized by t in [0, t_end()].
class Path {
public:
    /// s0 * (s1/s0)^t, t in [0, 1]: the ray when s1/s0 is positive.
    static Path radial(cplx s0, cplx s1);
    /// Piecewise linear, t in [0, n-1]. Throws std::invalid_argument if a
    /// segment passes through s = 0.
    static Path polyline(std::vector<cplx> vertices);

    cplx s(double t) const;
    cplx ds(double t) const;
    double t_end() const;
    /// Parameter of a point on the path (nearest point for polylines).
    double param_of(cplx s) const;
    /// Break points of the parametrization (segment ends), including 0 and t_end.
    std::vector<double> breaks() const;
    Path reversed() const;

private:
    bool radial_ = true;
    cplx s0_;
    cplx log_ratio_;
    std::vector<cplx> vertices_;
};

struct FlowState {
    cplx chi;
    cplx a;
    cplx s;
    cplx ell; // constant of motion, carried rather than integrated
};

struct Trajectory {
    cplx ell;
    FlowSystem system;
    Path path;
    numeric::Dopri5Result<Eigen::Vector2cd> solution; // (chi, a) against t

    FlowState at(double t) const;
    /// (dchi/ds, da/ds) from the dense output.
    std::array<cplx, 2> d_ds(double t) const;
    /// Accepted step boundaries, from 0 to t_end.
    std::vector<double> nodes() const;
    FlowState end() const;
};

/// Integrates the flow from `start` along `path` (which must begin at start.s)
/// at relative tolerance tol. Throws IntegrationFailure on step underflow
/// below 1e-12 |s|; last_param() is the last reliable path parameter.
Trajectory flow(const FlowState &start, const Path &path, double tol,
                FlowSystem system = FlowSystem::primed);

/// Relative |P_{ell,sign}| at every node of the trajectory.
std::vector<double> membership_along(const Trajectory &traj, const SurfaceSpec &spec);

struct P3Check {
    double residual;
    std::size_t samples;
};

/// Painleve III residual of w = a / (2 s chi) from centered 5-point stencils
/// of step delta on the path segment [s_lo, s_hi] (a straight piece of the
/// path). Throws std::domain_error if w or 1/w exceeds 1e6 in the window.
P3Check p3_residual(const Trajectory &traj, cplx s_lo, cplx s_hi, double delta);
/// Same residual for arbitrary samples w(s_k), s_k = s_lo + k delta u.
/// `ell` enters as in the primed system; pass -ell for the unprimed one.
double p3_residual_samples(std::span<const cplx> w, cplx s_lo, cplx direction, double delta, cplx ell);

struct HamiltonianConvention {
    int pairing;  // +1: chi' = dH/da, a' = -dH/dchi; -1: the opposite
    int ell_sign; // H evaluated with ell_sign * ell
    double deviation;
    std::array<double, 4> all; // (pairing, ell_sign) = (+,+), (+,-), (-,+), (-,-)
    std::string describe() const;
};

/// Tests the four Hamiltonian conventions against the trajectory's dense
/// derivatives at step midpoints and returns the best.
HamiltonianConvention hamiltonian_convention(const Trajectory &traj);
/// The Hamiltonian and its gradient (dH/dchi, dH/da).
cplx hamiltonian(cplx chi, cplx a, cplx s, cplx ell);
std::array<cplx, 2> hamiltonian_gradient(cplx chi, cplx a, cplx s, cplx ell);

struct RiccatiTrajectory {
    Path path;
    numeric::Dopri5Result<Eigen::Matrix<cplx, 1, 1>> solution;

    cplx chi(double t) const { return solution.at(t)(0); }
    std::vector<double> nodes() const;
};

/// chi' = (1 - 4 chi^2)/2 - chi/s along the radial path. Throws
/// IntegrationFailure at a pole of chi.
RiccatiTrajectory riccati_l1(cplx chi0, cplx s0, cplx s_end, double tol);
/// a on the ell = 1, minus surface above (chi, s).
cplx lift_l1(cplx chi, cplx s);
/// Max |chi - chi_full| + |a - a_full| between the lifted Riccati solution and
/// the full primed flow at ell = 1, over the nodes of the Riccati solution.
double riccati_l1_cross_check(cplx chi0, cplx s0, cplx s_end, double tol);

/// a' = sigma (a^2 - s^2)/s on the plane chi = sigma/2, compared with the
/// full primed flow at ell = 0 started on that plane. Returns the max deviation.
double riccati_l0_cross_check(int sigma, cplx a0, cplx s0, cplx s_end, double tol);

} // namespace heunlab::painleve
