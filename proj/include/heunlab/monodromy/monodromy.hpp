#pragma once

#include "heunlab/polysol/polysol.hpp"

#include <Eigen/Core>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace heunlab::monodromy {

using cplx = std::complex<double>;
using polysol::LinearCoefficients;

enum class SystemKind { extended, tty, psisys, model0, modelinf, custom };

std::string to_string(SystemKind kind);

/// Y' = (K/z^2 + R/z + N) Y together with the family it came from.
struct LinearSystemSpec {
    SystemKind kind = SystemKind::custom;
    LinearCoefficients coeffs;

    Eigen::Matrix2cd at(cplx z) const { return coeffs.at(z); }

    static LinearSystemSpec extended(cplx ell, cplx chi, cplx a, cplx s);
    /// diag(-s/2, 0)/z^2 + [[-ell, -a/2], [a/2, 0]]/z + diag(0, s/2).
    static LinearSystemSpec tty(cplx ell, cplx a, cplx s);
    /// Residue diag(0, -1), constant term [[0, 2], [1/2, 0]].
    static LinearSystemSpec psisys();
    /// The model systems near 0 and infinity, with d_ell(s) folded into the
    /// off-diagonal residue entry. Require integer ell >= 1.
    static LinearSystemSpec model0(int ell, cplx s, cplx u);
    static LinearSystemSpec modelinf(int ell, cplx s, cplx u);
    static LinearSystemSpec custom(const Eigen::Matrix2cd &k, const Eigen::Matrix2cd &r, const Eigen::Matrix2cd &n);
};

/// ell! (2/s)^ell e^{s/2} / (2 pi i).
cplx d_ell(int ell, cplx s);

/// A piece of an integration path in the z-plane.
struct PathPiece {
    enum class Shape { segment, arc };
    Shape shape;
    cplx from;     // segment start
    cplx to;       // segment end
    double radius; // arc: z = radius * exp(i theta), theta from theta0 to theta1
    double theta0;
    double theta1;

    static PathPiece segment(cplx from, cplx to);
    static PathPiece arc(double radius, double theta0, double theta1);

    cplx z(double t) const;  // t in [0, 1]
    cplx dz(double t) const; // dz/dt
    double length() const;
};

/// Counterclockwise circle |z| = radius split into n arcs, starting at z = radius.
std::vector<PathPiece> circle(double radius, int arcs = 64);

/// Transports a fundamental matrix (or, column-wise, any set of solutions)
/// along the pieces. Throws IntegrationFailure on step underflow.
Eigen::Matrix2cd integrate_linear(const LinearSystemSpec &spec, std::span<const PathPiece> path,
                                  const Eigen::Matrix2cd &y0, double tol);
/// Single-solution form of integrate_linear.
Eigen::Vector2cd integrate_solution(const LinearSystemSpec &spec, std::span<const PathPiece> path,
                                    const Eigen::Vector2cd &y0, double tol);

struct MonodromyResult {
    Eigen::Matrix2cd M;
    cplx trace;
    cplx det;   // product of the 64 arc transfer determinants
    double gap; // spectral norm of M - I
};

/// Continuation of the identity basis once around |z| = radius.
MonodromyResult monodromy_matrix(const LinearSystemSpec &spec, double radius = 1.0, double tol = 1e-12);

struct StokesProductCheck {
    MonodromyResult monodromy;
    cplx c0c1; // -(tr M + 2)
};

StokesProductCheck stokes_product_check(double tol = 1e-12);

/// Trapezoidal rule for the contour integral of z^{ell-1} e^{(s/2)(1/z - 1)} over |z| = 1.
cplx residue_quadrature(int ell, cplx s, int nodes);
/// 2 pi i e^{-s/2} (s/2)^ell / ell!.
cplx residue_closed_form(int ell, cplx s);

struct ModelResidual {
    double residual;       // the nontrivial canonical solution, derivative by finite differences
    double trivial;        // f20 = (0, 1) or f1inf = (z^ell, 0), analytic derivative
    std::vector<Eigen::Vector2cd> values;
};

/// Evaluates the explicit canonical solutions of the model systems at the
/// samples (integral term by adaptive Gauss-Kronrod along the prescribed ray,
/// unit-circle arc and straight segment from 1) and measures how well they
/// solve their system. model0 needs |z| < 2, modelinf |z| > 1/2. Throws
/// std::runtime_error if the quadrature does not converge.
ModelResidual model_solution_residual(SystemKind kind, int ell, cplx s, cplx u, std::span<const cplx> z_samples);

/// The explicit nontrivial canonical solution itself (f10 or f2inf).
Eigen::Vector2cd model_solution(SystemKind kind, int ell, cplx s, cplx u, cplx z);

} // namespace heunlab::monodromy
