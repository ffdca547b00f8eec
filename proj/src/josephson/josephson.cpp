#include "heunlab/josephson/josephson.hpp"

#include "heunlab/numeric/dopri5.hpp"
#include "heunlab/numeric/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heunlab::josephson {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;
constexpr int kStarts = 8;

using cplx = std::complex<double>;

} // namespace

void TorusParams::validate() const {
    if (!std::isfinite(B) || !std::isfinite(A) || !std::isfinite(omega) || !(omega > 0))
        throw std::invalid_argument("torus parameters need finite B, A and omega > 0");
}

std::vector<double> lifts(const TorusParams &p, const std::vector<double> &theta0, int n_periods, double tol,
                          std::size_t *steps) {
    p.validate();
    if (n_periods < 1)
        throw std::invalid_argument("n_periods must be >= 1");
    const double ell = p.ell(), a = p.a(), s = p.s();
    const auto f = [&](double tau, const Eigen::VectorXd &th) -> Eigen::VectorXd {
        const double drive = ell + s * std::cos(tau);
        return (a * th.array().cos() + drive).matrix();
    };
    numeric::Dopri5Options opt;
    // The lift grows without bound, so only an absolute tolerance is meaningful.
    opt.rtol = 0;
    opt.atol = tol;
    const Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(theta0.data(), static_cast<Eigen::Index>(theta0.size()));
    const auto res = numeric::dopri5(f, 0.0, y0, two_pi * n_periods, opt);
    if (steps)
        *steps = res.accepted;
    return {res.y_end.data(), res.y_end.data() + res.y_end.size()};
}

double poincare_map(const TorusParams &p, double theta0, double tol) { return lifts(p, {theta0}, 1, tol).front(); }

bool RotationEstimate::locked() const { return std::abs(rho - std::round(rho)) < bound; }

RotationEstimate rotation_number(const TorusParams &p, int n_periods, double tol) {
    std::vector<double> starts;
    for (int k = 0; k < kStarts; ++k)
        starts.push_back(two_pi * k / kStarts);
    std::size_t steps = 0;
    const auto end = lifts(p, starts, n_periods, tol, &steps);
    const double span = two_pi * n_periods;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const double r = (end[k] - starts[k]) / span;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double integrator = static_cast<double>(steps) * tol / span;
    return {0.5 * (lo + hi), hi - lo + integrator, n_periods, lo, hi};
}

std::vector<ScanRow> scan(const std::vector<double> &B, const std::vector<double> &A, double omega, int n_periods,
                          double tol, unsigned threads) {
    std::vector<ScanRow> rows(B.size() * A.size());
    numeric::parallel_for(
        rows.size(),
        [&](std::size_t i) {
            const double b = B[i % B.size()];
            const double a = A[i / B.size()];
            rows[i] = {b, a, rotation_number({b, a, omega}, n_periods, tol)};
        },
        threads);
    return rows;
}

void write_scan_csv(std::ostream &out, const std::vector<ScanRow> &rows) {
    out << "B,A,rho,bound,locked\n";
    for (const auto &r : rows)
        out << numeric::format_double(r.B) << ',' << numeric::format_double(r.A) << ','
            << numeric::format_double(r.estimate.rho) << ',' << numeric::format_double(r.estimate.bound) << ','
            << (r.estimate.locked() ? 1 : 0) << '\n';
}

double growth_point(int r, double omega, double tol, int n_periods) {
    if (r == 0)
        throw std::invalid_argument("growth_point needs r != 0");
    if (!(omega > 0))
        throw std::invalid_argument("growth_point needs omega > 0");
    // a - ell <= theta' - s cos(tau) <= a + ell bounds rho by (B -+ 1)/omega at A = 0.
    const int sg = r > 0 ? 1 : -1;
    const double target = std::abs(r);
    double lo = std::max(0.0, target * omega - 1.5);
    double hi = target * omega + 1.5;
    const auto rho_at = [&](double b) { return sg * rotation_number({sg * b, 0.0, omega}, n_periods).rho; };
    if (!(rho_at(lo) < target && rho_at(hi) > target))
        throw std::runtime_error("growth_point: initial bracket does not straddle the target rotation number");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (rho_at(mid) < target ? lo : hi) = mid;
    }
    return sg * 0.5 * (lo + hi);
}

double growth_point_closed_form(int r, double omega) {
    return (r > 0 ? 1.0 : -1.0) * std::sqrt(r * r * omega * omega + 1.0);
}

std::vector<ConstrictionCandidate> constriction_probe(int r, double omega, double A_lo, double A_hi, int samples,
                                                      double db, int n_periods, double tol, unsigned threads) {
    if (!(omega > 0) || samples < 3 || !(A_hi > A_lo) || !(db > 0))
        throw std::invalid_argument("constriction_probe: need omega > 0, samples >= 3, A_hi > A_lo, db > 0");
    const double center = r * omega;
    constexpr double span = 2.0;
    const auto at_r = [&](double b, double A) {
        const auto e = rotation_number({b, A, omega}, n_periods, tol);
        return e.locked() && std::lround(e.rho) == r;
    };
    const auto edge = [&](double A, double dir) {
        double in = 0, out = span;
        if (at_r(center + dir * out, A))
            return out;
        while (out - in > db) {
            const double mid = 0.5 * (in + out);
            (at_r(center + dir * mid, A) ? in : out) = mid;
        }
        return in;
    };
    std::vector<double> width(static_cast<std::size_t>(samples));
    numeric::parallel_for(
        width.size(),
        [&](std::size_t k) {
            const double A = A_lo + static_cast<double>(k) * (A_hi - A_lo) / (samples - 1);
            width[k] = at_r(center, A) ? edge(A, -1) + edge(A, 1) : -1.0;
        },
        threads);
    std::vector<ConstrictionCandidate> out;
    for (std::size_t k = 1; k + 1 < width.size(); ++k)
        if (width[k] >= 0 && width[k - 1] >= 0 && width[k + 1] >= 0 && width[k] <= width[k - 1] &&
            width[k] <= width[k + 1] && (width[k] < width[k - 1] || width[k] < width[k + 1]))
            out.push_back({A_lo + static_cast<double>(k) * (A_hi - A_lo) / (samples - 1), width[k]});
    return out;
}

double riccati_consistency(const TorusParams &p, double theta0, double tol) {
    p.validate();
    const double ell = p.ell(), a = p.a(), s = p.s();
    const cplx i(0, 1);
    // y = (theta, Phi) with theta carried as a complex number.
    const auto f = [&](double tau, const Eigen::Vector2cd &y) -> Eigen::Vector2cd {
        const cplx z = std::exp(i * tau);
        const cplx phi = y(1);
        if (!(std::abs(phi) < 1e6))
            throw std::runtime_error("Riccati solution has a pole in the window");
        const cplx dphi_dz = ((ell * z + s / 2.0 * (z * z + 1.0)) * phi + a / 2.0 * z * (phi * phi + 1.0)) / (z * z);
        return {a * std::cos(y(0)) + ell + s * std::cos(tau), dphi_dz * i * z};
    };
    numeric::Dopri5Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    opt.dense = true;
    const auto res = numeric::dopri5(f, 0.0, Eigen::Vector2cd(theta0, std::exp(i * theta0)), two_pi, opt);
    double worst = 0;
    for (const auto &st : res.steps) {
        for (const double t : {st.t0, st.t0 + 0.5 * st.h}) {
            const Eigen::Vector2cd y = st(t);
            worst = std::max(worst, std::abs(y(1) - std::exp(i * y(0))));
        }
    }
    return std::max(worst, std::abs(res.y_end(1) - std::exp(i * res.y_end(0))));
}

} // namespace heunlab::josephson
