#pragma once

#include "heunlab/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace heunlab::numeric {

struct Dopri5Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Initial step; 0 picks one from the right-hand side.
    double h0 = 0.0;
    double hmax = std::numeric_limits<double>::infinity();
    /// Smallest admissible |h| at parameter t. Falling below raises IntegrationFailure.
    std::function<double(double)> min_step = [](double t) { return 1e-12 * std::max(1.0, std::abs(t)); };
    std::size_t max_steps = 1'000'000;
    bool dense = false;
};

/// One accepted step with its continuous extension.
template <class V>
struct DenseStep {
    double t0;
    double h;
    double err;
    V r1, r2, r3, r4, r5;

    V operator()(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }

    /// Derivative of the continuous extension with respect to t.
    V derivative(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        const V a = r4 + th1 * r5;
        const V b = r3 + th * a;
        const V db = a - th * r5;
        const V c = r2 + th1 * b;
        const V dc = th1 * db - b;
        return (c + th * dc) / h;
    }
};

template <class V>
struct Dopri5Result {
    double t_end;
    V y_end;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<DenseStep<V>> steps; // empty unless Dopri5Options::dense

    /// Step whose interval contains t (the nearest one at the ends).
    const DenseStep<V> &step_at(double t) const {
        if (steps.empty())
            throw std::logic_error("Dopri5Result: no dense output recorded");
        const bool fwd = steps.front().h > 0;
        auto it = std::lower_bound(steps.begin(), steps.end(), t, [fwd](const DenseStep<V> &st, double x) {
            return fwd ? st.t0 + st.h < x : st.t0 + st.h > x;
        });
        if (it == steps.end())
            --it;
        return *it;
    }

    /// Continuous extension; t must lie in the integrated interval.
    V at(double t) const { return step_at(t)(t); }
    V derivative_at(double t) const { return step_at(t).derivative(t); }
};

/// Dormand-Prince 5(4) with Hairer's step-size controller and dense output.
/// V is an Eigen column vector, real or complex; the independent variable is real.
template <class V, class F>
Dopri5Result<V> dopri5(F &&f, double t0, V y0, double t1, const Dopri5Options &opt) {
    using std::abs;
    constexpr double a21 = 0.2, a31 = 3.0 / 40.0, a32 = 9.0 / 40.0, a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                     a43 = 32.0 / 9.0, a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0, a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0, a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                     a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    constexpr double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;

    Dopri5Result<V> res{t0, y0};
    if (t1 == t0)
        return res;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const auto n = y0.size();

    const auto norm = [&](const V &e, const V &ya, const V &yb) {
        double acc = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(abs(ya[i]), abs(yb[i]));
            const double r = abs(e[i]) / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(n));
    };

    double t = t0;
    V y = y0;
    V k1 = f(t, y);
    double h = opt.h0;
    if (h == 0) {
        // Hairer's starting-step heuristic.
        const double dnf = norm(k1, y, y);
        const double dny = norm(y, y, y);
        double h1 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
        h1 = std::min(h1, opt.hmax);
        const V y1 = y + dir * h1 * k1;
        const V f1 = f(t + dir * h1, y1);
        const double der2 = norm(f1 - k1, y, y) / h1;
        const double der12 = std::max(der2, dnf);
        const double h2 = der12 <= 1e-15 ? std::max(1e-6, h1 * 1e-3) : std::pow(0.01 / der12, 0.2);
        h = std::min({100 * h1, h2, opt.hmax});
    }
    h = std::min(h, abs(t1 - t0)) * dir;

    double facold = 1e-4;
    bool last_rejected = false;
    V k2, k3, k4, k5, k6, k7, y1, ytmp, err;
    for (std::size_t step = 0;; ++step) {
        if (step >= opt.max_steps)
            throw IntegrationFailure("dopri5: step budget exhausted", t);
        if (abs(h) < opt.min_step(t))
            throw IntegrationFailure("dopri5: step size underflow at t = " + std::to_string(t), t);
        bool final_step = false;
        if ((t + h - t1) * dir >= 0) {
            h = t1 - t;
            final_step = true;
        }
        ytmp = y + h * a21 * k1;
        k2 = f(t + c2 * h, ytmp);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        k3 = f(t + c3 * h, ytmp);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        k4 = f(t + c4 * h, ytmp);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        k5 = f(t + c5 * h, ytmp);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        k6 = f(t + h, ytmp);
        y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f(t + h, y1);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double e = norm(err, y, y1);
        if (!std::isfinite(e))
            throw IntegrationFailure("dopri5: non-finite state at t = " + std::to_string(t), t);

        const double fac11 = std::pow(e, 0.2 - beta * 0.75);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(1.0 / facr, std::min(1.0 / facl, fac / safe));
        if (e <= 1.0) {
            facold = std::max(e, 1e-4);
            ++res.accepted;
            if (opt.dense) {
                DenseStep<V> ds{t, h, e, y, y1 - y, V(), V(), V()};
                ds.r3 = h * k1 - ds.r2;
                ds.r4 = ds.r2 - h * k7 - ds.r3;
                ds.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                res.steps.push_back(std::move(ds));
            }
            k1 = k7;
            y = y1;
            t = final_step ? t1 : t + h;
            if (final_step)
                break;
            double hnew = h / fac;
            if (abs(hnew) > opt.hmax)
                hnew = dir * opt.hmax;
            if (last_rejected)
                hnew = dir * std::min(abs(hnew), abs(h));
            last_rejected = false;
            h = hnew;
        } else {
            ++res.rejected;
            last_rejected = true;
            h /= std::min(1.0 / facl, fac11 / safe);
        }
    }
    res.t_end = t;
    res.y_end = y;
    return res;
}

} // namespace heunlab::numeric
