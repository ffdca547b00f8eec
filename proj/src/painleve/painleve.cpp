#include "heunlab/painleve/painleve.hpp"

#include "heunlab/errors.hpp"
#include "heunlab/numeric/format.hpp"
#include "heunlab/polysol/polysol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heunlab::painleve {

namespace {

using Vec2 = Eigen::Vector2cd;

const MPoly &var(std::string_view name) {
    static const MPoly chi = MPoly::variable(spectral::surface_vars(), "chi");
    static const MPoly a = MPoly::variable(spectral::surface_vars(), "a");
    static const MPoly s = MPoly::variable(spectral::surface_vars(), "s");
    return name == "chi" ? chi : name == "a" ? a : s;
}

MPoly constant(const Rational &q) { return MPoly::constant(spectral::surface_vars(), q); }

// Integrates dy/dt = rhs(s(t), y) s'(t) segment by segment so that dense
// output never straddles a polyline vertex.
template <class V, class Rhs>
numeric::Dopri5Result<V> integrate_on_path(Rhs &&rhs, V y0, const Path &path, double tol) {
    const auto breaks = path.breaks();
    numeric::Dopri5Result<V> out{0.0, y0};
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        numeric::Dopri5Options opt;
        opt.rtol = tol;
        opt.atol = tol * 1e-2;
        opt.dense = true;
        opt.min_step = [&path](double t) { return 1e-12 * std::abs(path.s(t)) / std::abs(path.ds(t)); };
        const auto f = [&](double t, const V &y) -> V { return rhs(path.s(t), y) * path.ds(t); };
        try {
            auto piece = numeric::dopri5(f, breaks[k], out.y_end, breaks[k + 1], opt);
            out.accepted += piece.accepted;
            out.rejected += piece.rejected;
            out.steps.insert(out.steps.end(), piece.steps.begin(), piece.steps.end());
            out.t_end = piece.t_end;
            out.y_end = piece.y_end;
        } catch (const IntegrationFailure &e) {
            throw IntegrationFailure(std::string(e.what()) + " (s = " + numeric::format_complex(path.s(e.last_param())) +
                                         ")",
                                     e.last_param());
        }
    }
    return out;
}

cplx field_ell(cplx ell, FlowSystem system) { return system == FlowSystem::primed ? ell : -ell; }

// (chi', a') of the primed system.
Vec2 primed_rhs(cplx ell, cplx s, const Vec2 &y) {
    const auto v = v_field(ell, y(0), y(1), s);
    return Vec2(v[0] / v[2], v[1] / v[2]);
}

} // namespace

std::array<cplx, 3> v_field(cplx ell, cplx chi, cplx a, cplx s) {
    return {0.5 * (a * (1.0 - 4.0 * chi * chi) + 2.0 * ell * chi), 2.0 * chi * (a * a - s * s) - ell * a, s};
}

MPoly lie_derivative(const MPoly &p, const Rational &ell) {
    const MPoly q = p.reindexed(spectral::surface_vars());
    const MPoly &chi = var("chi");
    const MPoly &a = var("a");
    const MPoly &s = var("s");
    const MPoly one = constant(1);
    const MPoly v_chi = (a * (one - chi * chi * constant(4))).scaled(Rational(1, 2)) + chi.scaled(ell);
    const MPoly v_a = chi.scaled(2) * (a * a - s * s) - a.scaled(ell);
    return v_chi * q.diff("chi") + v_a * q.diff("a") + s * q.diff("s");
}

MPoly multiplier(const SurfaceSpec &spec) {
    if (spec.ell < 1)
        throw std::invalid_argument("multiplier: ell must be >= 1");
    const MPoly p = spectral::build_P(spec.ell, spec.sign);
    const MPoly lp = lie_derivative(p, Rational(spec.ell));
    const auto h = lp.div_exact(p);
    if (!h)
        throw InternalInconsistency("surface polynomial does not divide its Lie derivative at ell = " +
                                    std::to_string(spec.ell));
    if (!(*h * p == lp))
        throw InternalInconsistency("multiplier times P differs from the Lie derivative");
    return *h;
}

Path Path::radial(cplx s0, cplx s1) {
    if (s0 == cplx(0) || s1 == cplx(0))
        throw std::invalid_argument("radial path endpoints must be nonzero");
    Path p;
    p.radial_ = true;
    p.s0_ = s0;
    p.log_ratio_ = std::log(s1 / s0);
    return p;
}

Path Path::polyline(std::vector<cplx> vertices) {
    if (vertices.size() < 2)
        throw std::invalid_argument("polyline needs at least two vertices");
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
        const cplx u = vertices[k];
        const cplx d = vertices[k + 1] - u;
        const double len2 = std::norm(d);
        const double t = len2 == 0 ? 0.0 : std::clamp(-(std::conj(d) * u).real() / len2, 0.0, 1.0);
        if (std::abs(u + t * d) <= 1e-12 * std::max(1.0, std::abs(u)))
            throw std::invalid_argument("polyline segment passes through s = 0");
        if (len2 == 0)
            throw std::invalid_argument("polyline has repeated vertices");
    }
    Path p;
    p.radial_ = false;
    p.vertices_ = std::move(vertices);
    return p;
}

cplx Path::s(double t) const {
    if (radial_)
        return s0_ * std::exp(t * log_ratio_);
    const auto k = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))), vertices_.size() - 2);
    const double u = t - static_cast<double>(k);
    return vertices_[k] + u * (vertices_[k + 1] - vertices_[k]);
}

cplx Path::ds(double t) const {
    if (radial_)
        return s(t) * log_ratio_;
    const auto k = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(t))), vertices_.size() - 2);
    return vertices_[k + 1] - vertices_[k];
}

double Path::t_end() const { return radial_ ? 1.0 : static_cast<double>(vertices_.size() - 1); }

double Path::param_of(cplx point) const {
    if (radial_)
        return log_ratio_ == cplx(0) ? 0.0 : (std::log(point / s0_) / log_ratio_).real();
    double best_t = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
        const cplx d = vertices_[k + 1] - vertices_[k];
        const double u = std::clamp((std::conj(d) * (point - vertices_[k])).real() / std::norm(d), 0.0, 1.0);
        const double dist = std::abs(vertices_[k] + u * d - point);
        if (dist < best_d) {
            best_d = dist;
            best_t = static_cast<double>(k) + u;
        }
    }
    return best_t;
}

std::vector<double> Path::breaks() const {
    std::vector<double> out;
    const auto n = static_cast<int>(t_end());
    for (int k = 0; k <= n; ++k)
        out.push_back(k);
    return out;
}

Path Path::reversed() const {
    if (radial_) {
        Path p = *this;
        p.s0_ = s(1.0);
        p.log_ratio_ = -log_ratio_;
        return p;
    }
    return polyline({vertices_.rbegin(), vertices_.rend()});
}

FlowState Trajectory::at(double t) const {
    const Vec2 y = solution.at(t);
    return {y(0), y(1), path.s(t), ell};
}

std::array<cplx, 2> Trajectory::d_ds(double t) const {
    const Vec2 dy = solution.derivative_at(t) / path.ds(t);
    return {dy(0), dy(1)};
}

std::vector<double> Trajectory::nodes() const {
    std::vector<double> out;
    for (const auto &st : solution.steps)
        out.push_back(st.t0);
    out.push_back(solution.t_end);
    return out;
}

FlowState Trajectory::end() const { return {solution.y_end(0), solution.y_end(1), path.s(solution.t_end), ell}; }

Trajectory flow(const FlowState &start, const Path &path, double tol, FlowSystem system) {
    if (std::abs(path.s(0) - start.s) > 1e-12 * std::abs(start.s))
        throw std::invalid_argument("flow: path does not start at the initial s");
    const cplx ell = field_ell(start.ell, system);
    auto sol = integrate_on_path([ell](cplx s, const Vec2 &y) { return primed_rhs(ell, s, y); },
                                 Vec2(start.chi, start.a), path, tol);
    return Trajectory{start.ell, system, path, std::move(sol)};
}

std::vector<double> membership_along(const Trajectory &traj, const SurfaceSpec &spec) {
    std::vector<double> out;
    for (const double t : traj.nodes()) {
        const auto st = traj.at(t);
        out.push_back(polysol::membership_residual({st.chi, st.a, st.s, spec}));
    }
    return out;
}

double p3_residual_samples(std::span<const cplx> w, cplx s_lo, cplx direction, double delta, cplx ell) {
    if (w.size() < 5)
        throw std::invalid_argument("p3 residual needs at least five samples");
    double worst = 0;
    for (std::size_t k = 2; k + 2 < w.size(); ++k) {
        const cplx s = s_lo + static_cast<double>(k) * delta * direction;
        const cplx d1 = (-w[k + 2] + 8.0 * w[k + 1] - 8.0 * w[k - 1] + w[k - 2]) / (12.0 * delta) / direction;
        const cplx d2 = (-w[k + 2] + 16.0 * w[k + 1] - 30.0 * w[k] + 16.0 * w[k - 1] - w[k - 2]) /
                        (12.0 * delta * delta) / (direction * direction);
        const cplx x = w[k];
        const cplx rhs = d1 * d1 / x - d1 / s + 2.0 * ell * x * x / s - (2.0 * ell + 2.0) / s + x * x * x - 1.0 / x;
        worst = std::max(worst, std::abs(d2 - rhs) / std::max(1.0, std::pow(std::abs(x), 3)));
    }
    return worst;
}

P3Check p3_residual(const Trajectory &traj, cplx s_lo, cplx s_hi, double delta) {
    const double len = std::abs(s_hi - s_lo);
    const auto m = static_cast<std::size_t>(std::llround(len / delta));
    if (m < 4)
        throw std::invalid_argument("p3 window shorter than the stencil");
    const cplx dir = (s_hi - s_lo) / len;
    const double step = len / static_cast<double>(m);
    std::vector<cplx> w;
    for (std::size_t k = 0; k <= m; ++k) {
        const cplx s = s_lo + static_cast<double>(k) * step * dir;
        const auto st = traj.at(traj.path.param_of(s));
        const cplx value = st.a / (2.0 * s * st.chi);
        if (!std::isfinite(std::abs(value)) || std::abs(value) > 1e6 || std::abs(value) < 1e-6)
            throw std::domain_error("p3 window contains a pole or zero of w near s = " + numeric::format_complex(s));
        w.push_back(value);
    }
    const cplx ell = field_ell(traj.ell, traj.system);
    return {p3_residual_samples(w, s_lo, dir, step, ell), w.size() - 4};
}

cplx hamiltonian(cplx chi, cplx a, cplx s, cplx ell) {
    return -chi * chi * a * a / s + a * a / (4.0 * s) + s * chi * chi - ell * chi * a / s;
}

std::array<cplx, 2> hamiltonian_gradient(cplx chi, cplx a, cplx s, cplx ell) {
    return {-2.0 * chi * a * a / s + 2.0 * s * chi - ell * a / s, -2.0 * chi * chi * a / s + a / (2.0 * s) - ell * chi / s};
}

std::string HamiltonianConvention::describe() const {
    std::string out = pairing > 0 ? "chi' = dH/da, a' = -dH/dchi" : "chi' = -dH/da, a' = dH/dchi";
    out += ell_sign > 0 ? ", H at +ell" : ", H at -ell";
    return out;
}

HamiltonianConvention hamiltonian_convention(const Trajectory &traj) {
    std::array<double, 4> dev{};
    const auto &steps = traj.solution.steps;
    for (const auto &st : steps) {
        const double t = st.t0 + 0.5 * st.h;
        const auto p = traj.at(t);
        const auto d = traj.d_ds(t);
        const double scale = std::max({1.0, std::abs(d[0]), std::abs(d[1])});
        for (int k = 0; k < 4; ++k) {
            const double pairing = k < 2 ? 1.0 : -1.0;
            const double ell_sign = k % 2 == 0 ? 1.0 : -1.0;
            const auto g = hamiltonian_gradient(p.chi, p.a, p.s, ell_sign * traj.ell);
            const double e = std::max(std::abs(d[0] - pairing * g[1]), std::abs(d[1] + pairing * g[0])) / scale;
            dev[static_cast<std::size_t>(k)] = std::max(dev[static_cast<std::size_t>(k)], e);
        }
    }
    const auto best = static_cast<int>(std::min_element(dev.begin(), dev.end()) - dev.begin());
    return {best < 2 ? 1 : -1, best % 2 == 0 ? 1 : -1, dev[static_cast<std::size_t>(best)], dev};
}

std::vector<double> RiccatiTrajectory::nodes() const {
    std::vector<double> out;
    for (const auto &st : solution.steps)
        out.push_back(st.t0);
    out.push_back(solution.t_end);
    return out;
}

RiccatiTrajectory riccati_l1(cplx chi0, cplx s0, cplx s_end, double tol) {
    using V = Eigen::Matrix<cplx, 1, 1>;
    const Path path = Path::radial(s0, s_end);
    auto sol = integrate_on_path(
        [](cplx s, const V &y) {
            const cplx c = y(0);
            return V((1.0 - 4.0 * c * c) / 2.0 - c / s);
        },
        V(chi0), path, tol);
    return {path, std::move(sol)};
}

cplx lift_l1(cplx chi, cplx s) { return s - 4.0 * chi / (1.0 - 4.0 * chi * chi); }

double riccati_l1_cross_check(cplx chi0, cplx s0, cplx s_end, double tol) {
    const auto ric = riccati_l1(chi0, s0, s_end, tol);
    const auto full = flow({chi0, lift_l1(chi0, s0), s0, 1.0}, ric.path, tol);
    double worst = 0;
    for (const double t : ric.nodes()) {
        const auto st = full.at(t);
        const cplx c = ric.chi(t);
        worst = std::max(worst, std::abs(st.chi - c) + std::abs(st.a - lift_l1(c, st.s)));
    }
    return worst;
}

double riccati_l0_cross_check(int sigma, cplx a0, cplx s0, cplx s_end, double tol) {
    using V = Eigen::Matrix<cplx, 1, 1>;
    const double sg = sigma >= 0 ? 1.0 : -1.0;
    const Path path = Path::radial(s0, s_end);
    const auto ric = integrate_on_path([sg](cplx s, const V &y) { return V(sg * (y(0) * y(0) - s * s) / s); }, V(a0),
                                       path, tol);
    const auto full = flow({sg / 2.0, a0, s0, 0.0}, path, tol);
    double worst = 0;
    for (const auto &st : ric.steps) {
        const auto p = full.at(st.t0);
        worst = std::max(worst, std::abs(p.chi - sg / 2.0) + std::abs(p.a - ric.at(st.t0)(0)));
    }
    return worst;
}

} // namespace heunlab::painleve
