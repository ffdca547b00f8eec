#include "heunlab/monodromy/monodromy.hpp"

#include "heunlab/errors.hpp"
#include "heunlab/numeric/dopri5.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heunlab::monodromy {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
constexpr double kFlat = 1e-18;

using Flat = Eigen::Matrix<cplx, 4, 1>;

struct Transported {
    Eigen::Matrix2cd y;
    cplx det_transfer; // product of the per-piece transfer determinants
};

Transported transport(const LinearSystemSpec &spec, std::span<const PathPiece> path, Eigen::Matrix2cd y,
                      double tol) {
    numeric::Dopri5Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    cplx det = 1.0;
    for (const auto &piece : path) {
        const auto f = [&](double t, const Flat &v) -> Flat {
            const Eigen::Map<const Eigen::Matrix2cd> m(v.data());
            const Eigen::Matrix2cd d = spec.at(piece.z(t)) * m * piece.dz(t);
            return Eigen::Map<const Flat>(d.data());
        };
        const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
        const auto res = numeric::dopri5(f, 0.0, Flat(Eigen::Map<const Flat>(id.data())), 1.0, opt);
        const Eigen::Matrix2cd transfer = Eigen::Map<const Eigen::Matrix2cd>(res.y_end.data());
        y = transfer * y;
        det *= transfer.determinant();
    }
    return {y, det};
}

void require_avoids_origin(std::span<const PathPiece> path) {
    for (const auto &piece : path)
        if (piece.shape == PathPiece::Shape::segment) {
            const cplx d = piece.to - piece.from;
            const double t =
                std::norm(d) == 0 ? 0.0 : std::clamp(-(std::conj(d) * piece.from).real() / std::norm(d), 0.0, 1.0);
            if (std::abs(piece.from + t * d) == 0)
                throw std::invalid_argument("integration path passes through z = 0");
        }
}

double factorial(int n) {
    double out = 1;
    for (int k = 2; k <= n; ++k)
        out *= k;
    return out;
}

void require_positive_ell(int ell) {
    if (ell < 1)
        throw std::invalid_argument("model systems need ell >= 1");
}

template <class G>
cplx gk(G &&g, double lo, double hi) {
    double err = 0;
    const cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 25, 1e-14, &err);
    if (!(err <= 1e-11 * std::max(1.0, std::abs(v))))
        throw std::runtime_error("model quadrature did not converge (error estimate " + std::to_string(err) + ")");
    return v;
}

// Integral of g from the flat end of the ray through exp(i phi) (toward 0 when
// inward, toward infinity otherwise) to the unit circle, then along the arc to
// 1, then straight to z.
template <class G>
cplx contour_integral(G &&g, double phi, bool inward, cplx z) {
    const cplx dir = std::polar(1.0, phi);
    const auto on_ray = [&](double rho) { return g(rho * dir) * dir; };
    cplx total = 0;
    if (inward) {
        double lo = 1;
        while (std::abs(g(lo * dir)) >= kFlat && lo > 1e-300)
            lo *= 0.5;
        total += gk(on_ray, lo, 1.0);
    } else {
        double hi = 1;
        while (std::abs(g(hi * dir)) >= kFlat && hi < 1e300)
            hi *= 2.0;
        total -= gk(on_ray, 1.0, hi);
    }
    total += gk([&](double th) { const cplx w = std::polar(1.0, th); return g(w) * I * w; }, phi, 0.0);
    if (z != cplx(1))
        total += gk([&](double t) { return g(1.0 + t * (z - 1.0)) * (z - 1.0); }, 0.0, 1.0);
    return total;
}

} // namespace

std::string to_string(SystemKind kind) {
    switch (kind) {
    case SystemKind::extended: return "extended";
    case SystemKind::tty: return "tty";
    case SystemKind::psisys: return "psisys";
    case SystemKind::model0: return "model0";
    case SystemKind::modelinf: return "modelinf";
    case SystemKind::custom: return "custom";
    }
    return "custom";
}

LinearSystemSpec LinearSystemSpec::extended(cplx ell, cplx chi, cplx a, cplx s) {
    return {SystemKind::extended, polysol::extended_system(ell, chi, a, s)};
}

LinearSystemSpec LinearSystemSpec::tty(cplx ell, cplx a, cplx s) {
    LinearCoefficients c;
    c.K << -s / 2.0, 0.0, 0.0, 0.0;
    c.R << -ell, -a / 2.0, a / 2.0, 0.0;
    c.N << 0.0, 0.0, 0.0, s / 2.0;
    return {SystemKind::tty, c};
}

LinearSystemSpec LinearSystemSpec::psisys() {
    LinearCoefficients c;
    c.K.setZero();
    c.R << 0.0, 0.0, 0.0, -1.0;
    c.N << 0.0, 2.0, 0.5, 0.0;
    return {SystemKind::psisys, c};
}

LinearSystemSpec LinearSystemSpec::model0(int ell, cplx s, cplx u) {
    require_positive_ell(ell);
    LinearCoefficients c;
    c.K << -s / 2.0, 0.0, 0.0, 0.0;
    c.R << static_cast<double>(ell), 0.0, u * d_ell(ell, s), 0.0;
    c.N.setZero();
    return {SystemKind::model0, c};
}

LinearSystemSpec LinearSystemSpec::modelinf(int ell, cplx s, cplx u) {
    require_positive_ell(ell);
    LinearCoefficients c;
    c.K.setZero();
    c.R << static_cast<double>(ell), u * d_ell(ell, s), 0.0, 0.0;
    c.N << 0.0, 0.0, 0.0, s / 2.0;
    return {SystemKind::modelinf, c};
}

LinearSystemSpec LinearSystemSpec::custom(const Eigen::Matrix2cd &k, const Eigen::Matrix2cd &r,
                                          const Eigen::Matrix2cd &n) {
    return {SystemKind::custom, LinearCoefficients{k, r, n}};
}

cplx d_ell(int ell, cplx s) {
    if (s == cplx(0))
        throw std::invalid_argument("d_ell needs s != 0");
    return factorial(ell) * std::pow(2.0 / s, ell) * std::exp(s / 2.0) / (2.0 * pi * I);
}

PathPiece PathPiece::segment(cplx from, cplx to) { return {Shape::segment, from, to, 0.0, 0.0, 0.0}; }

PathPiece PathPiece::arc(double radius, double theta0, double theta1) {
    if (!(radius > 0))
        throw std::invalid_argument("arc radius must be positive");
    return {Shape::arc, std::polar(radius, theta0), std::polar(radius, theta1), radius, theta0, theta1};
}

cplx PathPiece::z(double t) const {
    if (shape == Shape::segment)
        return from + t * (to - from);
    return std::polar(radius, theta0 + t * (theta1 - theta0));
}

cplx PathPiece::dz(double t) const {
    if (shape == Shape::segment)
        return to - from;
    return I * z(t) * (theta1 - theta0);
}

double PathPiece::length() const {
    return shape == Shape::segment ? std::abs(to - from) : radius * std::abs(theta1 - theta0);
}

std::vector<PathPiece> circle(double radius, int arcs) {
    if (arcs < 1)
        throw std::invalid_argument("circle needs at least one arc");
    std::vector<PathPiece> out;
    const double step = 2 * pi / arcs;
    for (int k = 0; k < arcs; ++k)
        out.push_back(PathPiece::arc(radius, k * step, (k + 1) * step));
    return out;
}

Eigen::Matrix2cd integrate_linear(const LinearSystemSpec &spec, std::span<const PathPiece> path,
                                  const Eigen::Matrix2cd &y0, double tol) {
    require_avoids_origin(path);
    return transport(spec, path, y0, tol).y;
}

Eigen::Vector2cd integrate_solution(const LinearSystemSpec &spec, std::span<const PathPiece> path,
                                    const Eigen::Vector2cd &y0, double tol) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m.col(0) = y0;
    return integrate_linear(spec, path, m, tol).col(0);
}

MonodromyResult monodromy_matrix(const LinearSystemSpec &spec, double radius, double tol) {
    const auto loop = circle(radius, 64);
    const auto [m, det] = transport(spec, loop, Eigen::Matrix2cd::Identity(), tol);
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m - Eigen::Matrix2cd::Identity());
    return {m, m.trace(), det, svd.singularValues()(0)};
}

StokesProductCheck stokes_product_check(double tol) {
    const auto mono = monodromy_matrix(LinearSystemSpec::psisys(), 1.0, tol);
    return {mono, -(mono.trace + 2.0)};
}

cplx residue_quadrature(int ell, cplx s, int nodes) {
    if (ell < 1 || nodes < 1)
        throw std::invalid_argument("residue_quadrature needs ell >= 1 and nodes >= 1");
    if (s == cplx(0))
        throw std::invalid_argument("residue_quadrature needs s != 0");
    cplx sum = 0;
    for (int k = 0; k < nodes; ++k) {
        const cplx z = std::polar(1.0, 2 * pi * k / nodes);
        sum += I * std::pow(z, ell) * std::exp(s / 2.0 * (1.0 / z - 1.0));
    }
    return sum * (2 * pi / nodes);
}

cplx residue_closed_form(int ell, cplx s) {
    return 2.0 * pi * I * std::exp(-s / 2.0) * std::pow(s / 2.0, ell) / factorial(ell);
}

Eigen::Vector2cd model_solution(SystemKind kind, int ell, cplx s, cplx u, cplx z) {
    require_positive_ell(ell);
    if (s == cplx(0) || z == cplx(0))
        throw std::invalid_argument("model_solution needs s, z != 0");
    const double phi = std::arg(s) - pi;
    const cplx d = d_ell(ell, s);
    const double l = ell;
    if (kind == SystemKind::model0) {
        if (!(std::abs(z) < 2))
            throw std::invalid_argument("model0 solution lives on |z| < 2");
        const auto g = [&](cplx w) { return std::pow(w, l - 1) * std::exp(s / 2.0 * (1.0 / w - 1.0)); };
        return {std::exp(s / 2.0 * (1.0 / z - 1.0)) * std::pow(z, l), d * u * contour_integral(g, phi, true, z)};
    }
    if (kind == SystemKind::modelinf) {
        if (!(std::abs(z) > 0.5))
            throw std::invalid_argument("modelinf solution lives on |z| > 1/2");
        const auto g = [&](cplx w) { return std::pow(w, -(l + 1)) * std::exp(s / 2.0 * (w - 1.0)); };
        return {d * u * std::pow(z, l) * contour_integral(g, -phi, false, z), std::exp(s / 2.0 * (z - 1.0))};
    }
    throw std::invalid_argument("model_solution: kind must be model0 or modelinf");
}

ModelResidual model_solution_residual(SystemKind kind, int ell, cplx s, cplx u, std::span<const cplx> z_samples) {
    const auto spec = kind == SystemKind::model0 ? LinearSystemSpec::model0(ell, s, u)
                      : kind == SystemKind::modelinf ? LinearSystemSpec::modelinf(ell, s, u)
                                                     : throw std::invalid_argument("kind must be model0 or modelinf");
    ModelResidual out{0.0, 0.0, {}};
    const double l = ell;
    for (const cplx z : z_samples) {
        const auto f = [&](cplx w) { return model_solution(kind, ell, s, u, w); };
        const cplx h = 1e-3 * std::abs(z);
        const Eigen::Vector2cd v = f(z);
        const Eigen::Vector2cd df = (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
        const Eigen::Vector2cd av = spec.at(z) * v;
        const double scale = std::max({df.norm(), av.norm(), v.norm()});
        out.residual = std::max(out.residual, (df - av).norm() / scale);
        out.values.push_back(v);

        Eigen::Vector2cd t, dt;
        if (kind == SystemKind::model0) {
            t << 0.0, 1.0;
            dt << 0.0, 0.0;
        } else {
            t << std::pow(z, l), 0.0;
            dt << l * std::pow(z, l - 1), 0.0;
        }
        out.trivial = std::max(out.trivial, (dt - spec.at(z) * t).norm() / std::max(1.0, t.norm()));
    }
    return out;
}

} // namespace heunlab::monodromy
