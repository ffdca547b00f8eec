#include "heunlab/monodromy/monodromy.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <numbers>
#include <random>

using namespace heunlab;
using namespace heunlab::monodromy;
using spectral::Sign;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// exp(N) from its Taylor series.
Eigen::Matrix2cd series_exp(const Eigen::Matrix2cd &n) {
    Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * n / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("integrate_linear against exact solutions") {
    const cplx c(0.37, -0.2);
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = c;
    r(1, 1) = 2.0;
    const auto scalar = LinearSystemSpec::custom(Eigen::Matrix2cd::Zero(), r, Eigen::Matrix2cd::Zero());
    const auto m = monodromy_matrix(scalar, 1.0, 1e-12);
    CHECK(std::abs(m.M(0, 0) - std::exp(2 * pi * I * c)) < 1e-10);
    CHECK(std::abs(m.M(1, 1) - 1.0) < 1e-10);

    Eigen::Matrix2cd fuchs = Eigen::Matrix2cd::Zero();
    fuchs(1, 1) = -1.0;
    const auto id = monodromy_matrix(LinearSystemSpec::custom(Eigen::Matrix2cd::Zero(), fuchs, Eigen::Matrix2cd::Zero()));
    CHECK(id.gap < 1e-10);

    Eigen::Matrix2cd n;
    n << cplx(0.3, 0.1), 1.0, cplx(-0.5, 0.2), -0.4;
    const auto constant = LinearSystemSpec::custom(Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero(), n);
    const PathPiece seg[] = {PathPiece::segment(0.5, cplx(1.5, 0.5))};
    const Eigen::Matrix2cd y = integrate_linear(constant, seg, Eigen::Matrix2cd::Identity(), 1e-12);
    CHECK((y - series_exp(n * cplx(1.0, 0.5))).norm() < 1e-10);

    const PathPiece bad[] = {PathPiece::segment(-1.0, 1.0)};
    CHECK_THROWS_AS(integrate_linear(constant, bad, Eigen::Matrix2cd::Identity(), 1e-10), std::invalid_argument);
}

TEST_CASE("det M = exp(2 pi i ell) for the extended system at ell = 0.3") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const auto spec = LinearSystemSpec::extended(0.3, {u(rng), u(rng)}, {u(rng), u(rng)}, {1.0 + 0.5 * u(rng), u(rng)});
        const auto m = monodromy_matrix(spec);
        CHECK(std::abs(m.det - std::exp(2 * pi * I * 0.3)) < 1e-8);
    }
    const auto tty = monodromy_matrix(LinearSystemSpec::tty(0.7, 1.1, 0.4));
    CHECK(std::abs(tty.det - std::exp(-2 * pi * I * 0.7)) < 1e-8);
}

TEST_CASE("property: monodromy invariants are radius independent") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 3; ++k) {
        const auto spec = LinearSystemSpec::extended(cplx(1.5 * u(rng), 0.2 * u(rng)), {u(rng), u(rng)},
                                                     {u(rng), u(rng)}, {1.0, u(rng)});
        const auto ref = monodromy_matrix(spec, 1.0);
        for (double radius : {0.5, 2.0}) {
            const auto m = monodromy_matrix(spec, radius);
            CHECK(std::abs(m.trace - ref.trace) < 1e-8 * std::max(1.0, std::abs(ref.trace)));
            CHECK(std::abs(m.det - ref.det) < 1e-8);
        }
    }
}

TEST_CASE("unipotent monodromy at surface points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int ell = 1; ell <= 4; ++ell)
        for (Sign sg : {Sign::plus, Sign::minus})
            for (const auto &p : polysol::sample_surface({ell, sg}, {u(rng), u(rng)}, {1.0 + 0.3 * u(rng), 0.3 * u(rng)})) {
                polysol::solve_polynomial_solution(p);
                const auto m = monodromy_matrix(LinearSystemSpec::extended(static_cast<double>(ell), p.chi, p.a, p.s));
                CHECK(std::abs(m.trace - 2.0) < 1e-6);
                CHECK(std::abs(m.det - 1.0) < 1e-8);
                ++checked;
            }
    CHECK(checked >= 8);
}

TEST_CASE("psisys: unipotent Jordan cell and the Stokes product") {
    const auto chk = stokes_product_check();
    CHECK(std::abs(chk.monodromy.trace - 2.0) < 1e-6);
    CHECK(chk.monodromy.gap > 0.1);
    CHECK(std::abs(chk.c0c1 + 4.0) < 1e-6);
    CHECK(std::abs(chk.monodromy.det - 1.0) < 1e-8);
}

TEST_CASE("residue quadrature") {
    CHECK(std::abs(residue_closed_form(1, 1.0) - pi * I * std::exp(-0.5)) < 1e-15);
    CHECK(std::abs(residue_closed_form(2, 1.0) - 2 * pi * I * std::exp(-0.5) / 8.0) < 1e-15);
    for (int ell = 1; ell <= 4; ++ell)
        CHECK(std::abs(residue_quadrature(ell, 1.0, 256) - residue_closed_form(ell, 1.0)) < 1e-10);
    const cplx s = std::polar(1.0, 2.0);
    const double e4 = std::abs(residue_quadrature(3, s, 4) - residue_closed_form(3, s));
    const double e8 = std::abs(residue_quadrature(3, s, 8) - residue_closed_form(3, s));
    CHECK(e8 < 1e-2 * e4);
}

TEST_CASE("model systems") {
    const cplx one[] = {1.0};
    const auto r0 = model_solution_residual(SystemKind::model0, 1, 1.0, 1.0, one);
    CHECK(r0.residual < 1e-8);
    CHECK(r0.trivial == 0.0);
    const cplx samples0[] = {cplx(0.8, 0.3), cplx(1.5, -0.2), cplx(0.4, 0.9)};
    CHECK(model_solution_residual(SystemKind::model0, 3, cplx(0.7, 0.4), cplx(0.2, 1), samples0).residual < 1e-8);
    const cplx samplesi[] = {cplx(0.8, 0.3), cplx(2.5, -1.0), 1.0};
    const auto ri = model_solution_residual(SystemKind::modelinf, 2, cplx(1.2, -0.3), 0.5, samplesi);
    CHECK(ri.residual < 1e-8);
    CHECK(ri.trivial < 1e-15);

    // The explicit solution agrees with transport by the linear integrator.
    const auto spec = LinearSystemSpec::model0(2, 1.0, 1.0);
    const PathPiece seg[] = {PathPiece::segment(1.0, cplx(0.6, 0.7))};
    const Eigen::Vector2cd start = model_solution(SystemKind::model0, 2, 1.0, 1.0, 1.0);
    const Eigen::Vector2cd moved = integrate_solution(spec, seg, start, 1e-12);
    CHECK((moved - model_solution(SystemKind::model0, 2, 1.0, 1.0, cplx(0.6, 0.7))).norm() < 1e-9);

    const auto m0 = monodromy_matrix(spec);
    CHECK(std::abs(m0.trace - 2.0) < 1e-8);
    CHECK(m0.gap > 0.1);
    CHECK_THROWS_AS(model_solution(SystemKind::model0, 1, 1.0, 1.0, 3.0), std::invalid_argument);
}
