#include "heunlab/errors.hpp"
#include "heunlab/numeric/dopri5.hpp"
#include "heunlab/numeric/format.hpp"
#include "heunlab/numeric/parallel.hpp"
#include "heunlab/numeric/roots.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <numbers>
#include <random>

using namespace heunlab;
using namespace heunlab::numeric;

TEST_CASE("dopri5 integrates a complex linear oscillator") {
    using V = Eigen::Matrix<cplx, 1, 1>;
    Dopri5Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.dense = true;
    const cplx k(0.2, 1.0);
    auto res = dopri5<V>([&](double, const V &y) -> V { return k * y; }, 0.0, V(cplx(1)), 3.0, opt);
    CHECK(std::abs(res.y_end[0] - std::exp(3.0 * k)) < 1e-10);
    for (double t : {0.1, 0.77, 1.5, 2.9})
        CHECK(std::abs(res.at(t)[0] - std::exp(t * k)) < 1e-8);

    auto back = dopri5<V>([&](double, const V &y) -> V { return k * y; }, 3.0, res.y_end, 0.0, opt);
    CHECK(std::abs(back.y_end[0] - 1.0) < 1e-9);
}

TEST_CASE("dopri5 error decreases with tolerance") {
    using V = Eigen::Vector2d;
    const auto f = [](double, const V &y) -> V { return V(y[1], -y[0]); };
    double prev = 1;
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        Dopri5Options opt;
        opt.rtol = tol;
        opt.atol = tol;
        const auto r = dopri5<V>(f, 0.0, V(1, 0), 10.0, opt);
        const double err = std::abs(r.y_end[0] - std::cos(10.0));
        CHECK(err < 100 * tol);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("dopri5 reports step underflow at a blow-up") {
    using V = Eigen::Matrix<double, 1, 1>;
    Dopri5Options opt;
    CHECK_THROWS_AS(dopri5<V>([](double, const V &y) -> V { return y.cwiseProduct(y); }, 0.0, V(1.0), 2.0, opt),
                    IntegrationFailure);
}

TEST_CASE("roots of polynomials with known zeros") {
    const std::vector<cplx> want{{1, 0}, {-2, 0}, {0.5, 1}, {0.5, -1}, {3, 2}};
    std::vector<cplx> c{1};
    for (const auto &r : want) {
        std::vector<cplx> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = next;
    }
    auto got = poly_roots(c);
    REQUIRE(got.size() == want.size());
    for (const auto &r : want) {
        double best = 1;
        for (const auto &g : got)
            best = std::min(best, std::abs(g - r));
        CHECK(best < 1e-12);
    }
    // Equal-modulus roots: x^4 - 1.
    auto unit = poly_roots(std::vector<cplx>{-1, 0, 0, 0, 1});
    for (const auto &r : unit)
        CHECK(std::abs(std::pow(r, 4) - 1.0) < 1e-13);
    // Vanishing leading coefficient drops the degree; zero roots are exact.
    CHECK(poly_roots(std::vector<cplx>{0, 2, 0}).size() == 1);
    CHECK(poly_roots(std::vector<cplx>{0, 2, 0}).front() == cplx(0));
    CHECK_THROWS_AS(poly_roots(std::vector<cplx>{0, 0}), std::domain_error);
}

TEST_CASE("property: random polynomials are reconstructed from their roots") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + trial % 12;
        std::vector<cplx> c(static_cast<std::size_t>(deg) + 1);
        for (auto &x : c)
            x = {nd(rng), nd(rng)};
        const auto rs = poly_roots(c);
        REQUIRE(rs.size() == c.size() - 1);
        for (const auto &r : rs) {
            double scale = 0;
            for (std::size_t k = 0; k < c.size(); ++k)
                scale += std::abs(c[k]) * std::pow(std::abs(r), static_cast<double>(k));
            CHECK(std::abs(horner_with_derivative(c, r).first) < 1e-12 * scale);
        }
    }
}

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_complex({1.5, -2}) == "1.5-2i");
    CHECK(format_complex({0, 0.25}) == "0+0.25i");
    CHECK(parse_complex("1.5-2i") == cplx(1.5, -2));
    CHECK(parse_complex("-3") == cplx(-3, 0));
    CHECK(parse_complex("2i") == cplx(0, 2));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("1e-3+2e+1i") == cplx(1e-3, 20));
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const cplx z(u(rng) / 7, u(rng) / 3);
        CHECK(parse_complex(format_complex(z)) == z);
    }
    const auto r = parse_range("-3:3:0.5");
    CHECK(r.size() == 13);
    CHECK(r.back() == doctest::Approx(3));
    CHECK_THROWS_AS(parse_range("1:0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_range("0:1"), std::invalid_argument);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto &h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 3),
                    std::runtime_error);
}
