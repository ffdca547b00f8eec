#include "heunlab/numeric/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heunlab::numeric {

std::pair<cplx, cplx> horner_with_derivative(std::span<const cplx> coeffs, cplx x) {
    cplx p = 0;
    cplx dp = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        dp = dp * x + p;
        p = p * x + *it;
    }
    return {p, dp};
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs, double lead_cut, int max_iter) {
    double big = 0;
    for (const auto &c : coeffs)
        big = std::max(big, std::abs(c));
    if (big == 0)
        throw std::domain_error("poly_roots: zero polynomial");
    std::size_t n = coeffs.size();
    while (n > 0 && std::abs(coeffs[n - 1]) <= lead_cut * big)
        --n;
    std::vector<cplx> c(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n));

    // Zero roots come off exactly.
    std::vector<cplx> roots;
    std::size_t low = 0;
    while (low + 1 < c.size() && c[low] == cplx(0))
        ++low;
    roots.assign(low, cplx(0));
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    const std::size_t deg = c.size() - 1;
    if (deg == 0)
        return roots;

    // Start on a circle whose radius is the geometric mean of the root moduli,
    // slightly rotated to avoid symmetric stalls.
    const double radius = std::pow(std::abs(c[0] / c[deg]), 1.0 / static_cast<double>(deg));
    std::vector<cplx> z(deg);
    for (std::size_t k = 0; k < deg; ++k)
        z[k] = std::polar(radius, 2 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(deg) + 0.4);

    std::vector<bool> done(deg, false);
    for (int it = 0; it < max_iter; ++it) {
        bool all_done = true;
        for (std::size_t k = 0; k < deg; ++k) {
            if (done[k])
                continue;
            const auto [p, dp] = horner_with_derivative(c, z[k]);
            if (p == cplx(0)) {
                done[k] = true;
                continue;
            }
            const cplx ratio = p / dp;
            cplx sum = 0;
            for (std::size_t j = 0; j < deg; ++j)
                if (j != k)
                    sum += 1.0 / (z[k] - z[j]);
            const cplx w = ratio / (1.0 - ratio * sum);
            z[k] -= w;
            if (std::abs(w) <= 1e-15 * std::max(1.0, std::abs(z[k])))
                done[k] = true;
            else
                all_done = false;
        }
        if (all_done)
            break;
    }
    for (auto &r : z) {
        for (int step = 0; step < 2; ++step) {
            const auto [p, dp] = horner_with_derivative(c, r);
            if (dp == cplx(0) || p == cplx(0))
                break;
            const cplx nr = r - p / dp;
            if (std::abs(horner_with_derivative(c, nr).first) < std::abs(p))
                r = nr;
        }
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

} // namespace heunlab::numeric
