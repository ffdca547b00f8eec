#include "generators.hpp"

#include "heunlab/errors.hpp"
#include "heunlab/ratpoly/mpoly.hpp"
#include "heunlab/ratpoly/poly_matrix.hpp"
#include "heunlab/ratpoly/univariate.hpp"

#include <doctest.h>

using namespace heunlab;
using namespace heunlab::ratpoly;

namespace {

const VarList X{"x"};
const VarList XY{"x", "y"};
const VarList LM{"lambda", "mu"};
const VarList CAS{"chi", "a", "s"};

MPoly var(const VarList &vars, std::string_view n) { return MPoly::variable(vars, n); }
MPoly cst(const VarList &vars, const Rational &c) { return MPoly::constant(vars, c); }

// Laplace expansion along the first row.
MPoly cofactor_det(const PolyMatrix &m) {
    const std::size_t n = m.rows();
    if (n == 1)
        return m.at(0, 0);
    MPoly acc(m.vars());
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero())
            continue;
        PolyMatrix minor(n - 1, n - 1, m.vars());
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c)
                if (c != j)
                    minor.set(r - 1, cc++, m.at(r, c));
        MPoly term = m.at(0, j) * cofactor_det(minor);
        acc += (j % 2) ? -term : term;
    }
    return acc;
}

} // namespace

TEST_CASE("rational parsing, printing and rounding") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(to_string(Rational(-3, 2)) == "-3/2");
    CHECK(to_string(Rational(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
    CHECK(to_double(Rational(2, 3)) == 2.0 / 3.0);
}

TEST_CASE("arithmetic examples") {
    const MPoly x = var(X, "x");
    const MPoly one = cst(X, 1);
    CHECK((x + one) * (x - one) == x * x - one);
    CHECK(x + MPoly(X) == x);

    const MPoly l = var(LM, "lambda");
    const MPoly m = var(LM, "mu");
    CHECK(l * (l - cst(LM, 1)) - m * m == l.pow(2) - l - m.pow(2));
    CHECK((-l).scaled(Rational(-1, 2)) == l.scaled(Rational(1, 2)));
    CHECK_THROWS_AS(l + x, VariableMismatch);
}

TEST_CASE("differentiation examples") {
    const MPoly chi = var(CAS, "chi");
    const MPoly a = var(CAS, "a");
    const MPoly s = var(CAS, "s");
    CHECK((a * a * chi).diff("a") == (a * chi).scaled(2));
    CHECK(cst(CAS, 7).diff("s").is_zero());
    const MPoly p = (a + s) * (cst(CAS, 1) - chi.pow(2).scaled(4)) + chi.scaled(4);
    CHECK(p.diff("chi") == chi.scaled(-8) * (a + s) + cst(CAS, 4));
    CHECK_THROWS_AS(p.diff("z"), UnknownVariable);
}

TEST_CASE("substitution examples") {
    const MPoly chi = var(CAS, "chi");
    const MPoly a = var(CAS, "a");
    const MPoly s = var(CAS, "s");
    const VarList AS{"a", "s"};
    CHECK((chi * a - cst(CAS, 1)).subst({{"chi", MPoly(AS)}}, AS) == cst(AS, -1));

    const VarList MR{"mu", "r"};
    const MPoly q1 = var(LM, "lambda");
    const MPoly r = var(MR, "r");
    const MPoly mu = var(MR, "mu");
    CHECK(q1.subst({{"lambda", r * r - mu * mu}}, MR) == r * r - mu * mu);

    const MPoly p = (a + s) * (cst(CAS, 1) - chi.pow(2).scaled(4)) + chi.scaled(4);
    CHECK(p.subst({{"chi", MPoly(AS)}}, AS) == var(AS, "a") + var(AS, "s"));

    CHECK_THROWS_AS(chi.subst({{"chi", cst(X, 1)}}, AS), VariableMismatch);
    CHECK_THROWS_AS(chi.subst({}, AS), VariableMismatch);
}

TEST_CASE("evaluation examples") {
    const MPoly chi = var(CAS, "chi");
    const MPoly a = var(CAS, "a");
    const MPoly s = var(CAS, "s");
    const MPoly p = (a + s) * (cst(CAS, 1) - chi.pow(2).scaled(4)) + chi.scaled(4);
    const auto v = p.eval({{"chi", 1.0}, {"a", 1.0 / 3.0}, {"s", 1.0}});
    CHECK(std::abs(v) < 1e-15);

    const MPoly q = p + cst(CAS, Rational(5, 7));
    CHECK(q.eval({{"chi", 0.0}, {"a", 0.0}, {"s", 0.0}}) == std::complex<double>(to_double(Rational(5, 7)), 0));
    CHECK_THROWS_AS(q.eval({{"chi", 0.0}}), UnknownVariable);

    const CompiledPoly cp(p);
    const std::complex<double> pt[] = {{0.3, 0.1}, {-1.0, 2.0}, {0.5, -0.5}};
    const auto [val, scale] = cp.eval_with_scale(pt);
    CHECK(std::abs(val - p.eval({{"chi", pt[0]}, {"a", pt[1]}, {"s", pt[2]}})) < 1e-14);
    CHECK(scale >= std::abs(val));
}

TEST_CASE("determinant examples") {
    PolyMatrix tri(2, 2, CAS);
    tri.set(0, 0, var(CAS, "s").scaled(Rational(1, 2)));
    tri.set(0, 1, var(CAS, "chi") * var(CAS, "a") - cst(CAS, 1));
    tri.set(1, 1, cst(CAS, Rational(1, 2)));
    CHECK(det(tri) == var(CAS, "s").scaled(Rational(1, 4)));

    const MPoly l = var(LM, "lambda");
    const MPoly m = var(LM, "mu");
    PolyMatrix q2(2, 2, LM);
    q2.set(0, 0, l);
    q2.set(0, 1, m);
    q2.set(1, 0, m);
    q2.set(1, 1, l - cst(LM, 1));
    CHECK(det(q2) == l.pow(2) - l - m.pow(2));

    CHECK(det(PolyMatrix::identity(3, LM)) == cst(LM, 1));
    CHECK_THROWS_AS(det(PolyMatrix(2, 3, LM)), std::invalid_argument);

    // Zero leading pivot forces a row swap.
    PolyMatrix swap(2, 2, X);
    swap.set(0, 1, cst(X, 1));
    swap.set(1, 0, cst(X, 1));
    CHECK(det(swap) == cst(X, -1));
}

TEST_CASE("exact division examples") {
    const MPoly x = var(X, "x");
    const MPoly one = cst(X, 1);
    auto q = (x * x - one).div_exact(x - one);
    REQUIRE(q);
    CHECK(*q == x + one);
    CHECK_FALSE((x * x + one).div_exact(x + one));
    CHECK_THROWS_AS(x.div_exact(MPoly(X)), std::domain_error);
}

TEST_CASE("resultant examples") {
    const VarList XCD{"x", "c", "d"};
    const MPoly x = var(XCD, "x");
    const MPoly c = var(XCD, "c");
    const MPoly d = var(XCD, "d");
    const MPoly r = resultant(x - c, x - d, "x");
    CHECK((r == c - d || r == d - c));

    const VarList XU{"x", "u"};
    const MPoly xu = var(XU, "x");
    const MPoly u = var(XU, "u");
    const MPoly r2 = resultant(xu * xu - u, xu.scaled(2), "x");
    CHECK((r2 == u.scaled(4) || r2 == u.scaled(-4)));
    // Quadratic discriminant with the usual sign convention.
    CHECK(discriminant(xu * xu - u, "x") == u.scaled(4));

    CHECK_THROWS_AS(resultant(cst(XU, 2), xu, "x"), std::invalid_argument);
}

TEST_CASE("univariate gcd and square-free decomposition") {
    const UPoly xm1({Rational(-1), Rational(1)});
    const UPoly xp2({Rational(2), Rational(1)});
    const UPoly x2p1({Rational(1), Rational(0), Rational(1)});
    const UPoly p = xm1 * xp2 * xp2 * x2p1 * x2p1 * x2p1;
    const auto parts = square_free(p.monic());
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == xm1);
    CHECK(parts[1] == xp2);
    CHECK(parts[2] == x2p1);
    CHECK(gcd(xm1 * xp2, xp2 * x2p1) == xp2);
    const auto [qq, rr] = divmod(p, xp2);
    CHECK(rr.is_zero());
    CHECK(qq * xp2 == p);
}

TEST_CASE("property: total degree is additive under multiplication") {
    testing::Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const MPoly p = g.nonzero_poly(CAS, 5, 4);
        const MPoly q = g.nonzero_poly(CAS, 5, 4);
        CHECK((p * q).total_degree() == p.total_degree() + q.total_degree());
    }
}

TEST_CASE("property: Bareiss agrees with cofactor expansion up to size 4") {
    testing::Gen g(12);
    for (std::size_t n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 25; ++trial) {
            const PolyMatrix m = g.matrix(n, CAS, 3, 2);
            CHECK(det(m) == cofactor_det(m));
        }
}

TEST_CASE("property: div_exact inverts multiplication") {
    testing::Gen g(13);
    for (int trial = 0; trial < 200; ++trial) {
        const MPoly p = g.poly(CAS, 6, 4);
        const MPoly q = g.nonzero_poly(CAS, 4, 3);
        const auto h = (p * q).div_exact(q);
        REQUIRE(h);
        CHECK(*h == p);
    }
}

TEST_CASE("property: JSON round trip is term-for-term") {
    testing::Gen g(14);
    for (int trial = 0; trial < 100; ++trial) {
        const MPoly p = g.poly(CAS, 8, 6);
        const auto j = p.to_json();
        CHECK(MPoly::from_json(nlohmann::json::parse(j.dump())) == p);
    }
    const MPoly p = var(XY, "x") * var(XY, "y") + var(XY, "x").pow(2).scaled(Rational(-1, 3)) + cst(XY, 2);
    CHECK(p.to_json().dump() ==
          R"({"terms":[{"den":"3","exp":[2,0],"num":"-1"},{"den":"1","exp":[1,1],"num":"1"},)"
          R"({"den":"1","exp":[0,0],"num":"2"}],"vars":["x","y"]})");
}
