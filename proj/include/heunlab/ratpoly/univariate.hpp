#pragma once

#include "heunlab/ratpoly/mpoly.hpp"

#include <utility>
#include <vector>

namespace heunlab::ratpoly {

/// Dense polynomial in one variable over Q, coefficients from degree 0 up.
/// Trailing zeros are trimmed; the zero polynomial is the empty vector.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs);

    /// p must involve no variable other than `var`.
    static UPoly from_mpoly(const MPoly &p, std::string_view var);

    const std::vector<Rational> &coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const Rational &lead() const { return c_.back(); }

    UPoly derivative() const;
    UPoly monic() const;
    std::vector<double> to_doubles() const;

    friend UPoly operator-(const UPoly &p, const UPoly &q);
    friend UPoly operator*(const UPoly &p, const UPoly &q);
    bool operator==(const UPoly &) const = default;

private:
    void trim();
    std::vector<Rational> c_;
};

/// Quotient and remainder. Throws std::domain_error for a zero divisor.
std::pair<UPoly, UPoly> divmod(const UPoly &p, const UPoly &q);
/// Monic gcd (zero if both are zero).
UPoly gcd(const UPoly &p, const UPoly &q);

/// Yun decomposition: p = lc * prod f_k^k with f_k square-free, pairwise
/// coprime and monic. Entry k-1 holds f_k (possibly 1).
std::vector<UPoly> square_free(const UPoly &p);

} // namespace heunlab::ratpoly
