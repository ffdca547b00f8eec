#pragma once

#include "heunlab/numeric/format.hpp"

#include <complex>
#include <ostream>
#include <vector>

namespace heunlab::josephson {

/// dtheta/dtau = a cos(theta) + ell + s cos(tau) with
/// (ell, a, s) = (B / omega, 1 / omega, A / omega).
struct TorusParams {
    double B;
    double A;
    double omega;

    double ell() const { return B / omega; }
    double a() const { return 1.0 / omega; }
    double s() const { return A / omega; }
    /// Throws std::invalid_argument unless omega > 0 and all fields are finite.
    void validate() const;
};

/// Lift of theta after one period in tau, starting from theta0 at tau = 0.
double poincare_map(const TorusParams &p, double theta0, double tol = 1e-10);

/// Lifts after n_periods from each starting angle, integrated jointly.
std::vector<double> lifts(const TorusParams &p, const std::vector<double> &theta0, int n_periods, double tol,
                          std::size_t *steps = nullptr);

struct RotationEstimate {
    double rho;
    double bound; // bracket width plus the integrator contribution
    int n_periods;
    double lo; // bracket from the extreme lifts
    double hi;

    bool locked() const;
};

/// Poincare-map iteration from 8 equispaced starting angles.
RotationEstimate rotation_number(const TorusParams &p, int n_periods = 200, double tol = 1e-10);

struct ScanRow {
    double B;
    double A;
    RotationEstimate estimate;
};

/// Rows ordered with A outermost and B innermost, independent of the thread count.
std::vector<ScanRow> scan(const std::vector<double> &B, const std::vector<double> &A, double omega, int n_periods,
                          double tol, unsigned threads);

/// CSV with header B,A,rho,bound,locked.
void write_scan_csv(std::ostream &out, const std::vector<ScanRow> &rows);

/// Bisection in B at A = 0 for the point where the rotation number crosses the
/// integer r. Throws std::runtime_error if the initial bracket does not straddle r.
double growth_point(int r, double omega, double tol = 1e-4, int n_periods = 200);
/// sign(r) sqrt(r^2 omega^2 + 1).
double growth_point_closed_form(int r, double omega);

struct ConstrictionCandidate {
    double A;
    double width; // width in B of the r-plateau through B = r omega
};

/// Best-effort search along the line B = r omega: the plateau width {rho = r} is
/// sampled at A = A_lo + k (A_hi - A_lo) / (samples - 1) with B-resolution db.
/// Returns the interior local minima of the width, in increasing A, among samples
/// whose neighbours are also locked at r. Not certified: a minimum only marks where
/// a constriction may sit between adjacent samples.
std::vector<ConstrictionCandidate> constriction_probe(int r, double omega, double A_lo, double A_hi, int samples,
                                                      double db = 1e-3, int n_periods = 100, double tol = 1e-8,
                                                      unsigned threads = 1);

/// Integrates the torus equation and the Riccati equation for Phi = exp(i theta)
/// over one period and returns max |Phi - exp(i theta)|. Throws
/// std::runtime_error if |Phi| exceeds 1e6.
double riccati_consistency(const TorusParams &p, double theta0 = 0.3, double tol = 1e-11);

} // namespace heunlab::josephson
