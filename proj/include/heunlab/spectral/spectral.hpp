#pragma once

#include "heunlab/ratpoly/mpoly.hpp"
#include "heunlab/ratpoly/poly_matrix.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace heunlab::spectral {

using ratpoly::MPoly;
using ratpoly::PolyMatrix;
using ratpoly::Rational;
using ratpoly::VarList;

enum class Sign { plus, minus };

inline int sign_value(Sign s) { return s == Sign::plus ? 1 : -1; }
inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
std::string to_string(Sign s);
/// "plus"/"+" or "minus"/"-". Throws std::invalid_argument.
Sign parse_sign(std::string_view text);

/// Variable lists of the coordinate systems.
const VarList &spectral_vars(); // (lambda, mu)
const VarList &uv_vars();       // (u, v) with u = lambda, v = mu^2
const VarList &mr_vars();       // (mu, r)
const VarList &surface_vars();  // (chi, a, s)

struct SurfaceSpec {
    int ell;
    Sign sign;
};

struct IdentityReport {
    std::string name;
    int ell;
    bool pass;
    std::optional<Rational> scalar;
    std::string detail;

    /// e.g. "PASS restriction ell=3 sign=plus scalar=-1/2"
    std::string line() const;
};

/// Tridiagonal ell x ell matrix over (lambda, mu).
PolyMatrix build_H(int ell);
/// det(H + lambda Id) over (lambda, mu). Checks that only even powers of mu
/// occur and that the degree in (lambda, mu^2) is ell.
MPoly build_Q(int ell);
/// Q rewritten over (u, v) with u = lambda, v = mu^2. Throws on odd powers of mu.
MPoly to_uv(const MPoly &q);

/// The square root of mu^2 Id - H over (mu, r), gated by that identity.
PolyMatrix build_Gcal(int ell);
/// det(Gcal +- r Id) over (mu, r).
MPoly build_Qpm(int ell, Sign sign);

/// The (ell+1) x (ell+1) matrices over (chi, a, s).
PolyMatrix build_G1(int ell);
PolyMatrix build_G2(int ell);
/// Degree of p in (chi, a) with s as a parameter, and the number of terms
/// attaining it. p must be over (chi, a, s).
std::pair<unsigned, std::size_t> top_in_chi_a(const MPoly &p);

/// det(G1 +- G2) over (chi, a, s), memoized. Enforced: total degree 2 ell + 1,
/// and the top part in (chi, a) is the single term c chi^(ell+1) a^ell.
MPoly build_P(int ell, Sign sign);

/// Gcal^2 = mu^2 Id - H entry by entry.
IdentityReport verify_gcal_square(int ell);
/// P_{ell,sign}(0, a, s) = c Q_{ell,q_sign}(s/2, a/2) for a rational c.
IdentityReport verify_restriction(int ell, Sign sign, std::optional<Sign> q_sign = std::nullopt);
/// Q_ell(r^2 - mu^2, mu^2) = (-1)^ell Q_{ell,+} Q_{ell,-}.
IdentityReport verify_factorization(int ell);
/// P_{ell,-}(chi, a, s) = eps P_{ell,+}(-chi, -a, s), eps in {+1, -1}.
IdentityReport verify_involution(int ell);

struct DiscriminantCheck {
    /// Proportionality of the discriminant in a to the factored form.
    IdentityReport report;
    /// Res_a(P, dP/da) = res_scalar * lc_a(P) * factored form.
    std::optional<Rational> res_scalar;
    /// Roots in chi of odd multiplicity at the chosen s.
    std::vector<std::complex<double>> branch_points;
    std::vector<std::complex<double>> expected;
    double max_deviation;
};

/// ell = 2 discriminant identity and branch points at s = s_value.
DiscriminantCheck verify_l2_discriminant(Sign sign, const Rational &s_value = 1);

/// Geometric genus of the spectral curve.
int genus(int ell);

} // namespace heunlab::spectral
