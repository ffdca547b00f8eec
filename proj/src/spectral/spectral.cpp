#include "heunlab/spectral/spectral.hpp"

#include "heunlab/errors.hpp"
#include "heunlab/numeric/roots.hpp"
#include "heunlab/ratpoly/univariate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace heunlab::spectral {

using ratpoly::Monomial;

namespace {

void require_ell(int ell, const char *what) {
    if (ell < 1)
        throw std::invalid_argument(std::string(what) + ": ell must be >= 1, got " + std::to_string(ell));
}

MPoly var(const VarList &vars, std::string_view name) { return MPoly::variable(vars, name); }
MPoly cst(const VarList &vars, const Rational &c) { return MPoly::constant(vars, c); }

/// Rational c with p = c q when such a c exists.
std::optional<Rational> constant_ratio(const MPoly &p, const MPoly &q) {
    if (p.is_zero() || q.is_zero())
        return std::nullopt;
    const Rational c = p.leading_term().coeff / q.leading_term().coeff;
    if (p == q.scaled(c))
        return c;
    return std::nullopt;
}

PolyMatrix scalar_matrix(std::size_t n, const MPoly &d) {
    PolyMatrix m(n, n, d.vars());
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, d);
    return m;
}

// Unchecked structural rule for Gcal.
PolyMatrix gcal_matrix(int ell) {
    const auto &vars = mr_vars();
    const auto n = static_cast<std::size_t>(ell);
    PolyMatrix g(n, n, vars);
    for (std::size_t i = 1; i <= n; ++i) {
        g.set(i - 1, n - i, var(vars, "mu"));
        if (i >= 2)
            g.set(i - 1, n + 1 - i, cst(vars, -static_cast<long>(n + 1 - i)));
    }
    return g;
}

} // namespace

std::pair<unsigned, std::size_t> top_in_chi_a(const MPoly &p) {
    unsigned deg = 0;
    std::size_t count = 0;
    for (const auto &t : p.terms()) {
        const unsigned d = t.mono.exponent(0) + t.mono.exponent(1);
        if (d > deg) {
            deg = d;
            count = 0;
        }
        if (d == deg)
            ++count;
    }
    return {deg, count};
}

namespace {

std::string first_difference(const MPoly &lhs, const MPoly &rhs) {
    const MPoly d = lhs - rhs;
    if (d.is_zero())
        return "";
    const auto &t = d.leading_term();
    const auto e = t.mono.exponents(d.vars().size());
    std::string s = "first differing monomial (";
    for (std::size_t i = 0; i < e.size(); ++i)
        s += (i ? "," : "") + std::to_string(e[i]);
    return s + ") with difference " + ratpoly::to_string(t.coeff);
}

} // namespace

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

Sign parse_sign(std::string_view text) {
    if (text == "plus" || text == "+")
        return Sign::plus;
    if (text == "minus" || text == "-")
        return Sign::minus;
    throw std::invalid_argument("sign must be plus or minus, got '" + std::string(text) + "'");
}

const VarList &spectral_vars() {
    static const VarList v{"lambda", "mu"};
    return v;
}
const VarList &uv_vars() {
    static const VarList v{"u", "v"};
    return v;
}
const VarList &mr_vars() {
    static const VarList v{"mu", "r"};
    return v;
}
const VarList &surface_vars() {
    static const VarList v{"chi", "a", "s"};
    return v;
}

std::string IdentityReport::line() const {
    std::string s = (pass ? "PASS " : "FAIL ") + name + " ell=" + std::to_string(ell);
    if (scalar)
        s += " scalar=" + ratpoly::to_string(*scalar);
    if (!detail.empty())
        s += " " + detail;
    return s;
}

PolyMatrix build_H(int ell) {
    require_ell(ell, "build_H");
    const auto &vars = spectral_vars();
    const MPoly mu = var(vars, "mu");
    const auto n = static_cast<std::size_t>(ell);
    PolyMatrix h(n, n, vars);
    for (int j = 1; j <= ell; ++j) {
        const auto i = static_cast<std::size_t>(j - 1);
        h.set(i, i, cst(vars, (1 - j) * (ell - j + 1)));
        if (j < ell)
            h.set(i, i + 1, mu.scaled(j));
        if (j > 1)
            h.set(i, i - 1, mu.scaled(ell - j + 1));
    }
    return h;
}

MPoly build_Q(int ell) {
    require_ell(ell, "build_Q");
    const auto &vars = spectral_vars();
    const MPoly q = det(build_H(ell) + scalar_matrix(static_cast<std::size_t>(ell), var(vars, "lambda")));
    unsigned weighted = 0;
    for (const auto &t : q.terms()) {
        if (t.mono.exponent(1) % 2)
            throw InternalInconsistency("build_Q: odd power of mu at ell = " + std::to_string(ell));
        weighted = std::max(weighted, t.mono.exponent(0) + t.mono.exponent(1) / 2);
    }
    if (weighted != static_cast<unsigned>(ell))
        throw InternalInconsistency("build_Q: degree in (lambda, mu^2) is " + std::to_string(weighted) +
                                    ", expected " + std::to_string(ell));
    return q;
}

MPoly to_uv(const MPoly &q) {
    if (q.vars() != spectral_vars())
        throw VariableMismatch("to_uv: expected a polynomial over (lambda, mu)");
    std::vector<MPoly::Term> terms;
    for (const auto &t : q.terms()) {
        if (t.mono.exponent(1) % 2)
            throw std::invalid_argument("to_uv: odd power of mu");
        const unsigned e[] = {t.mono.exponent(0), t.mono.exponent(1) / 2};
        terms.push_back({Monomial::from_exponents(e), t.coeff});
    }
    return MPoly::from_terms(uv_vars(), std::move(terms));
}

IdentityReport verify_gcal_square(int ell) {
    require_ell(ell, "verify_gcal_square");
    const auto &vars = mr_vars();
    const auto n = static_cast<std::size_t>(ell);
    const PolyMatrix g = gcal_matrix(ell);
    const MPoly mu = var(vars, "mu");
    const PolyMatrix h = build_H(ell).subst({{"lambda", MPoly(vars)}}, vars);
    const PolyMatrix rhs = scalar_matrix(n, mu * mu) - h;
    const PolyMatrix lhs = g * g;
    IdentityReport rep{"gcal_square", ell, lhs == rhs, std::nullopt, ""};
    if (!rep.pass)
        for (std::size_t i = 0; i < n && rep.detail.empty(); ++i)
            for (std::size_t j = 0; j < n && rep.detail.empty(); ++j)
                if (lhs.at(i, j) != rhs.at(i, j))
                    rep.detail = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") differs";
    return rep;
}

PolyMatrix build_Gcal(int ell) {
    require_ell(ell, "build_Gcal");
    const auto rep = verify_gcal_square(ell);
    if (!rep.pass)
        throw InternalInconsistency("build_Gcal: Gcal^2 != mu^2 Id - H at ell = " + std::to_string(ell) + ": " +
                                    rep.detail);
    return gcal_matrix(ell);
}

MPoly build_Qpm(int ell, Sign sign) {
    PolyMatrix m = build_Gcal(ell);
    const MPoly r = var(mr_vars(), "r").scaled(sign_value(sign));
    for (std::size_t i = 0; i < m.rows(); ++i)
        m.at(i, i) += r;
    return det(m);
}

PolyMatrix build_G1(int ell) {
    require_ell(ell, "build_G1");
    const auto &vars = surface_vars();
    const auto n = static_cast<std::size_t>(ell) + 1;
    PolyMatrix g(n, n, vars);
    const MPoly half_s = var(vars, "s").scaled(Rational(1, 2));
    const MPoly chia = var(vars, "chi") * var(vars, "a");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g.set(i, i, half_s);
        g.set(i, i + 1, chia - cst(vars, static_cast<long>(i + 1)));
    }
    g.set(n - 1, n - 1, cst(vars, Rational(1, 2)));
    return g;
}

PolyMatrix build_G2(int ell) {
    require_ell(ell, "build_G2");
    const auto &vars = surface_vars();
    const auto n = static_cast<std::size_t>(ell) + 1;
    PolyMatrix g(n, n, vars);
    const MPoly half_a = var(vars, "a").scaled(Rational(1, 2));
    const MPoly chi = var(vars, "chi");
    const MPoly chis = chi * var(vars, "s");
    // One-based: a/2 at (i, ell+1-i), chi s at (i, ell+2-i), i = 1..ell.
    for (std::size_t i = 1; i + 1 <= n; ++i) {
        g.set(i - 1, n - 1 - i, half_a);
        g.set(i - 1, n - i, chis);
    }
    g.set(n - 1, 0, chi);
    return g;
}

MPoly build_P(int ell, Sign sign) {
    require_ell(ell, "build_P");
    static std::mutex mutex;
    static std::map<std::pair<int, Sign>, MPoly> cache;
    {
        std::lock_guard lock(mutex);
        if (const auto it = cache.find({ell, sign}); it != cache.end())
            return it->second;
    }
    const PolyMatrix g2 = build_G2(ell);
    const PolyMatrix m = sign == Sign::plus ? build_G1(ell) + g2 : build_G1(ell) - g2;
    MPoly p = det(m);

    const auto fail = [&](const std::string &why) {
        throw InternalInconsistency("build_P(" + std::to_string(ell) + ", " + to_string(sign) + "): " + why);
    };
    if (p.total_degree() != 2 * ell + 1)
        fail("total degree " + std::to_string(p.total_degree()));
    const auto [top_deg, top_count] = top_in_chi_a(p);
    const unsigned want[] = {static_cast<unsigned>(ell + 1), static_cast<unsigned>(ell), 0};
    if (top_deg != static_cast<unsigned>(2 * ell + 1) || top_count != 1 ||
        p.coefficient(want) == 0)
        fail("top part in (chi, a) is not a multiple of chi^(ell+1) a^ell");
    const VarList &vars = surface_vars();
    const MPoly axis = p.subst({{"chi", MPoly(vars)}, {"s", MPoly(vars)}}, vars);
    Rational expected(1);
    expected /= mpz_class(1) << static_cast<mp_bitcnt_t>(ell + 1);
    if (axis.degree_in("a") != ell || abs(axis.leading_term().coeff) != expected)
        fail("restriction to the a-axis does not lead with a^ell / 2^(ell+1)");

    std::lock_guard lock(mutex);
    return cache.emplace(std::pair{ell, sign}, std::move(p)).first->second;
}

IdentityReport verify_restriction(int ell, Sign sign, std::optional<Sign> q_sign) {
    const Sign qs = q_sign.value_or(sign);
    const VarList as{"a", "s"};
    const MPoly p0 = build_P(ell, sign).subst({{"chi", MPoly(as)}}, as);
    const MPoly q = build_Qpm(ell, qs).subst(
        {{"mu", var(as, "s").scaled(Rational(1, 2))}, {"r", var(as, "a").scaled(Rational(1, 2))}}, as);
    IdentityReport rep{"restriction", ell, false, std::nullopt, "sign=" + to_string(sign)};
    if (qs != sign)
        rep.detail += " against=" + to_string(qs);
    rep.scalar = constant_ratio(p0, q);
    rep.pass = rep.scalar.has_value();
    return rep;
}

IdentityReport verify_factorization(int ell) {
    const VarList &vars = mr_vars();
    const MPoly mu = var(vars, "mu");
    const MPoly r = var(vars, "r");
    const MPoly lhs = build_Q(ell).subst({{"lambda", r * r - mu * mu}, {"mu", mu}}, vars);
    MPoly rhs = build_Qpm(ell, Sign::plus) * build_Qpm(ell, Sign::minus);
    if (ell % 2)
        rhs = -rhs;
    IdentityReport rep{"factorization", ell, lhs == rhs, std::nullopt, ""};
    if (!rep.pass)
        rep.detail = first_difference(lhs, rhs);
    return rep;
}

IdentityReport verify_involution(int ell) {
    const VarList &vars = surface_vars();
    const MPoly flipped = build_P(ell, Sign::plus)
                              .subst({{"chi", -var(vars, "chi")}, {"a", -var(vars, "a")}}, vars);
    const MPoly minus = build_P(ell, Sign::minus);
    IdentityReport rep{"involution", ell, false, std::nullopt, ""};
    if (minus == flipped)
        rep.scalar = Rational(1);
    else if (minus == -flipped)
        rep.scalar = Rational(-1);
    rep.pass = rep.scalar.has_value();
    if (!rep.pass)
        rep.detail = "neither sign relates the two surfaces";
    return rep;
}

DiscriminantCheck verify_l2_discriminant(Sign sign, const Rational &s_value) {
    if (s_value == 0)
        throw std::invalid_argument("verify_l2_discriminant: s must be nonzero");
    const VarList &vars = surface_vars();
    const int sg = sign_value(sign);
    const MPoly p = build_P(2, sign);
    const MPoly chi = var(vars, "chi");
    const MPoly s = var(vars, "s");
    const MPoly one = cst(vars, 1);
    const MPoly factored =
        (chi.scaled(2) + one.scaled(sg)).pow(4) * (one + s * s * (chi.scaled(2) - one.scaled(sg)).pow(2));

    const MPoly disc = ratpoly::discriminant(p, "a");
    const MPoly res = ratpoly::resultant(p, p.diff("a"), "a");
    const MPoly lead = p.coefficients_in("a").back();

    DiscriminantCheck out{{"l2_discriminant", 2, false, constant_ratio(disc, factored), "sign=" + to_string(sign)},
                          constant_ratio(res, lead * factored),
                          {},
                          {},
                          std::numeric_limits<double>::infinity()};
    out.report.pass = out.report.scalar.has_value();

    const VarList c{"chi"};
    const MPoly slice = disc.subst({{"a", MPoly(c)}, {"s", cst(c, s_value)}}, c);
    const auto parts = ratpoly::square_free(ratpoly::UPoly::from_mpoly(slice, "chi"));
    for (std::size_t k = 0; k < parts.size(); k += 2) {
        if (parts[k].degree() < 1)
            continue;
        std::vector<std::complex<double>> coeffs;
        for (double d : parts[k].to_doubles())
            coeffs.emplace_back(d);
        for (const auto &z : numeric::poly_roots(coeffs))
            out.branch_points.push_back(z);
    }
    const double sv = ratpoly::to_double(s_value);
    for (int pm : {1, -1})
        out.expected.push_back(0.5 * sg * std::complex<double>(1.0, pm / sv));
    if (out.branch_points.size() == out.expected.size()) {
        out.max_deviation = 0;
        for (const auto &e : out.expected) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto &b : out.branch_points)
                best = std::min(best, std::abs(b - e));
            out.max_deviation = std::max(out.max_deviation, best);
        }
    }
    return out;
}

int genus(int ell) {
    require_ell(ell, "genus");
    if (ell % 2 == 0)
        return (ell - 2) * (ell - 2) / 4;
    return (ell - 1) * (ell - 3) / 4;
}

} // namespace heunlab::spectral
