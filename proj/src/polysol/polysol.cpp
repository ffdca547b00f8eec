#include "heunlab/polysol/polysol.hpp"

#include "heunlab/numeric/roots.hpp"
#include "heunlab/ratpoly/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace heunlab::polysol {

namespace {

struct CompiledSurface {
    ratpoly::CompiledPoly p;
    std::vector<ratpoly::CompiledPoly> in_a; // coefficient of a^k
};

const CompiledSurface &compiled(const SurfaceSpec &spec) {
    static std::mutex mutex;
    static std::map<std::pair<int, Sign>, std::unique_ptr<CompiledSurface>> cache;
    const auto key = std::pair{spec.ell, spec.sign};
    {
        std::lock_guard lock(mutex);
        if (const auto it = cache.find(key); it != cache.end())
            return *it->second;
    }
    const auto poly = spectral::build_P(spec.ell, spec.sign);
    auto entry = std::make_unique<CompiledSurface>(CompiledSurface{ratpoly::CompiledPoly(poly), {}});
    for (const auto &c : poly.coefficients_in("a"))
        entry->in_a.emplace_back(c);
    std::lock_guard lock(mutex);
    return *cache.try_emplace(key, std::move(entry)).first->second;
}

std::pair<cplx, cplx> eval_with_derivative(std::span<const cplx> c, cplx z) {
    return numeric::horner_with_derivative(c, z);
}

double system_residual(const LinearCoefficients &sys, std::span<const cplx> y1, std::span<const cplx> y2,
                       std::span<const cplx> z_samples) {
    double worst = 0;
    for (const cplx z : z_samples) {
        const auto [v1, d1] = eval_with_derivative(y1, z);
        const auto [v2, d2] = eval_with_derivative(y2, z);
        const Eigen::Matrix2cd a = sys.at(z);
        const cplx r1 = d1 - a(0, 0) * v1 - a(0, 1) * v2;
        const cplx r2 = d2 - a(1, 0) * v1 - a(1, 1) * v2;
        const double s1 = std::abs(d1) + std::abs(a(0, 0) * v1) + std::abs(a(0, 1) * v2);
        const double s2 = std::abs(d2) + std::abs(a(1, 0) * v1) + std::abs(a(1, 1) * v2);
        const double scale = std::max({s1, s2, std::abs(v1) + std::abs(v2), std::numeric_limits<double>::min()});
        worst = std::max({worst, std::abs(r1) / scale, std::abs(r2) / scale});
    }
    return worst;
}

void require_nonzero_s(cplx s) {
    if (s == cplx(0))
        throw std::invalid_argument("surface point needs s != 0");
}

} // namespace

LinearCoefficients extended_system(cplx ell, cplx chi, cplx a, cplx s) {
    LinearCoefficients c;
    c.K << -s / 2.0, -s * chi, 0.0, 0.0;
    c.R << ell - chi * a, -a / 2.0, a / 2.0, chi * a;
    c.N << 0.0, 0.0, s * chi, s / 2.0;
    return c;
}

std::vector<cplx> PolySolution::y1() const {
    std::vector<cplx> out(coeffs.rbegin(), coeffs.rend());
    if (sign == Sign::minus)
        for (auto &x : out)
            x = -x;
    return out;
}

int PolySolution::degree() const {
    // Y1 reverses Y2, so the vector degree is ell minus the lowest nonzero index
    // of Y2, or the top index of Y2, whichever is larger.
    const double big = std::abs(*std::max_element(coeffs.begin(), coeffs.end(),
                                                  [](cplx x, cplx y) { return std::abs(x) < std::abs(y); }));
    const double cut = 1e-12 * big;
    int lo = 0;
    int hi = static_cast<int>(coeffs.size()) - 1;
    while (lo < hi && std::abs(coeffs[static_cast<std::size_t>(lo)]) <= cut)
        ++lo;
    while (hi > 0 && std::abs(coeffs[static_cast<std::size_t>(hi)]) <= cut)
        --hi;
    return std::max(hi, static_cast<int>(coeffs.size()) - 1 - lo);
}

double membership_residual(const SurfacePoint &p) {
    if (p.spec.ell == 0)
        return std::abs(p.chi + 0.5 * spectral::sign_value(p.spec.sign));
    const cplx pt[] = {p.chi, p.a, p.s};
    const auto [v, scale] = compiled(p.spec).p.eval_with_scale(pt);
    return scale == 0 ? 0.0 : std::abs(v) / scale;
}

Eigen::MatrixXcd assemble_G(const SurfacePoint &p) {
    const int ell = p.spec.ell;
    const auto n = static_cast<Eigen::Index>(ell + 1);
    const double sg = spectral::sign_value(p.spec.sign);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        g(i, i) = p.s / 2.0;
        g(i, i + 1) = p.chi * p.a - static_cast<double>(i + 1);
    }
    g(n - 1, n - 1) += 0.5;
    for (Eigen::Index i = 1; i + 1 <= n; ++i) {
        g(i - 1, n - 1 - i) += sg * p.a / 2.0;
        g(i - 1, n - i) += sg * p.chi * p.s;
    }
    g(n - 1, 0) += sg * p.chi;
    return g;
}

PolySolution solve_polynomial_solution(const SurfacePoint &p, double tol) {
    require_nonzero_s(p.s);
    const double m = membership_residual(p);
    if (!(m <= tol))
        throw NotOnSurface("point is off the surface: relative residual " + std::to_string(m));
    if (p.spec.ell == 0)
        return PolySolution{{cplx(1)}, p.spec.sign, 0.0, 1.0};

    Eigen::MatrixXcd a = assemble_G(p);
    const auto n = a.rows();
    std::vector<Eigen::Index> col(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        col[static_cast<std::size_t>(k)] = k;
    std::vector<double> pivots;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pr = k, pc = k;
        double best = -1;
        for (Eigen::Index i = k; i < n; ++i)
            for (Eigen::Index j = k; j < n; ++j)
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pr = i;
                    pc = j;
                }
        a.row(k).swap(a.row(pr));
        a.col(k).swap(a.col(pc));
        std::swap(col[static_cast<std::size_t>(k)], col[static_cast<std::size_t>(pc)]);
        pivots.push_back(best);
        if (best == 0)
            continue;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
        }
    }
    const double top = pivots.front();
    if (top == 0)
        throw AmbiguousKernel("G vanishes identically at this point");
    std::vector<double> ratios;
    for (double pv : pivots)
        ratios.push_back(pv / top);
    std::sort(ratios.begin(), ratios.end());
    if (ratios[1] < kPivotThreshold)
        throw AmbiguousKernel("two pivots below threshold: kernel is not one-dimensional");

    // The last eliminated column is the free variable.
    Eigen::VectorXcd x(n);
    x(n - 1) = 1.0;
    for (Eigen::Index k = n - 2; k >= 0; --k) {
        cplx acc = 0;
        for (Eigen::Index j = k + 1; j < n; ++j)
            acc += a(k, j) * x(j);
        x(k) = -acc / a(k, k);
    }
    std::vector<cplx> c(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        c[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])] = x(k);
    const cplx lead = *std::max_element(c.begin(), c.end(), [](cplx u, cplx v) { return std::abs(u) < std::abs(v); });
    for (auto &v : c)
        v /= lead;
    return PolySolution{std::move(c), p.spec.sign, ratios[0], ratios[1]};
}

double verify_solution(const SurfacePoint &p, const PolySolution &sol, std::span<const cplx> z_samples) {
    const auto y1 = sol.y1();
    const auto sys = extended_system(static_cast<double>(p.spec.ell), p.chi, p.a, p.s);
    return system_residual(sys, y1, sol.coeffs, z_samples);
}

std::vector<SurfacePoint> sample_surface(const SurfaceSpec &spec, cplx chi, cplx s, double tol) {
    require_nonzero_s(s);
    if (spec.ell < 1)
        throw std::invalid_argument("sample_surface: ell must be >= 1");
    const auto &cs = compiled(spec);
    const cplx pt[] = {chi, cplx(0), s};
    std::vector<cplx> coeffs;
    bool all_zero = true;
    for (const auto &c : cs.in_a) {
        const auto [v, scale] = c.eval_with_scale(pt);
        const bool zero = std::abs(v) <= 1e-14 * scale;
        all_zero = all_zero && zero;
        coeffs.push_back(zero ? cplx(0) : v);
    }
    if (all_zero)
        throw DegenerateSlice("the slice of the surface at this (chi, s) vanishes identically");
    std::vector<SurfacePoint> out;
    if (std::count_if(coeffs.begin() + 1, coeffs.end(), [](cplx c) { return c != cplx(0); }) == 0)
        return out;
    for (const cplx a : numeric::poly_roots(coeffs)) {
        SurfacePoint p{chi, a, s, spec};
        if (membership_residual(p) <= tol)
            out.push_back(p);
    }
    return out;
}

double heun_residual(int ell, cplx lambda, cplx mu, std::span<const cplx> e_coeffs, std::span<const cplx> z_samples) {
    std::vector<cplx> d1;
    for (std::size_t j = 1; j < e_coeffs.size(); ++j)
        d1.push_back(static_cast<double>(j) * e_coeffs[j]);
    const double l = ell;
    double worst = 0;
    for (const cplx z : z_samples) {
        const auto [e, de] = numeric::horner_with_derivative(e_coeffs, z);
        const cplx dde = numeric::horner_with_derivative(d1, z).second;
        const cplx terms[] = {z * z * dde, (1.0 - l) * z * de, mu * (1.0 - z * z) * de, lambda * e,
                              mu * (l - 1.0) * z * e};
        cplx sum = 0;
        double scale = std::abs(e) + std::abs(z * de) + std::abs(z * z * dde);
        double term_scale = 0;
        for (const auto &t : terms) {
            sum += t;
            term_scale += std::abs(t);
        }
        scale = std::max(scale, term_scale);
        if (scale > 0)
            worst = std::max(worst, std::abs(sum) / scale);
    }
    return worst;
}

HeunSystemSolution system_from_heun(int ell, std::span<const cplx> e_coeffs, cplx a, cplx mu,
                                    std::span<const cplx> z_samples) {
    if (a == cplx(0))
        throw std::invalid_argument("system_from_heun: a must be nonzero");
    if (std::all_of(e_coeffs.begin(), e_coeffs.end(), [](cplx c) { return c == cplx(0); }))
        throw std::invalid_argument("system_from_heun: E is the zero polynomial");
    HeunSystemSolution out;
    out.y2.assign(e_coeffs.begin(), e_coeffs.end());
    out.y1.assign(e_coeffs.size() + 1, cplx(0));
    for (std::size_t j = 0; j < e_coeffs.size(); ++j) {
        const cplx next = j + 1 < e_coeffs.size() ? static_cast<double>(j + 1) * e_coeffs[j + 1] : cplx(0);
        out.y1[j + 1] = 2.0 * (next - mu * e_coeffs[j]) / a;
    }
    const auto sys = extended_system(static_cast<double>(ell), 0.0, a, 2.0 * mu);
    out.residual = system_residual(sys, out.y1, out.y2, z_samples);
    return out;
}

std::vector<cplx> unit_circle_samples(std::size_t n) {
    std::vector<cplx> z;
    for (std::size_t k = 0; k < n; ++k)
        z.push_back(std::polar(1.0, 2 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n)));
    return z;
}

} // namespace heunlab::polysol
