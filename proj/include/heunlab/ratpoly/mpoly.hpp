#pragma once

#include "heunlab/ratpoly/rational.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heunlab::ratpoly {

using VarList = std::vector<std::string>;

/// Exponent vector packed into one 64-bit word: the top byte holds the total
/// degree, then one byte per variable in variable order. Comparing the packed
/// words as integers is exactly graded lexicographic order.
class Monomial {
public:
    static constexpr std::size_t kMaxVars = 7;
    static constexpr unsigned kMaxExponent = 255;

    constexpr Monomial() = default;

    static Monomial from_exponents(std::span<const unsigned> exps);
    static Monomial variable(std::size_t index, unsigned power = 1);
    static constexpr Monomial from_key(std::uint64_t key) { return Monomial(key); }

    unsigned exponent(std::size_t var) const noexcept {
        return static_cast<unsigned>((key_ >> shift(var)) & 0xffu);
    }
    unsigned total_degree() const noexcept { return static_cast<unsigned>(key_ >> 56); }
    std::vector<unsigned> exponents(std::size_t nvars) const;

    bool divides(Monomial other) const noexcept;
    /// Throws std::overflow_error past kMaxExponent.
    Monomial operator*(Monomial other) const;
    /// Precondition: divisor.divides(*this).
    Monomial operator/(Monomial divisor) const noexcept { return Monomial(key_ - divisor.key_); }
    /// Drops variable `var` (its exponent becomes zero).
    Monomial without(std::size_t var) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    auto operator<=>(const Monomial &) const = default;

private:
    explicit constexpr Monomial(std::uint64_t key) : key_(key) {}
    static constexpr unsigned shift(std::size_t var) noexcept {
        return 48u - 8u * static_cast<unsigned>(var);
    }
    std::uint64_t key_ = 0;
};

class MPoly;

/// Polynomial with double coefficients prepared for repeated complex evaluation.
class CompiledPoly {
public:
    explicit CompiledPoly(const MPoly &p);

    std::size_t nvars() const noexcept { return nvars_; }
    /// Value at `point` (one complex number per variable, in variable order).
    std::complex<double> operator()(std::span<const std::complex<double>> point) const;
    /// Value together with the sum of absolute monomial values, the natural
    /// scale for relative residuals.
    std::pair<std::complex<double>, double> eval_with_scale(std::span<const std::complex<double>> point) const;

private:
    std::size_t nvars_;
    std::vector<double> coeffs_;
    std::vector<unsigned> exps_; // row-major, nvars_ per term
    std::vector<unsigned> max_exp_;
};

/// Sparse multivariate polynomial over Q on a fixed ordered variable list.
/// Terms are kept in graded-lex descending order with no zero coefficients,
/// so structural equality is mathematical equality.
class MPoly {
public:
    struct Term {
        Monomial mono;
        Rational coeff;
        bool operator==(const Term &) const = default;
    };

    MPoly() = default;
    explicit MPoly(VarList vars);

    static MPoly constant(VarList vars, const Rational &c);
    static MPoly variable(VarList vars, std::string_view name);
    static MPoly monomial(VarList vars, std::span<const unsigned> exps, const Rational &c);
    /// Builds from unordered terms; duplicate monomials are summed.
    static MPoly from_terms(VarList vars, std::vector<Term> terms);

    const VarList &vars() const noexcept { return vars_; }
    const std::vector<Term> &terms() const noexcept { return terms_; }
    std::size_t var_index(std::string_view name) const;

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Coefficient of the constant monomial (zero if absent).
    Rational constant_term() const;
    Rational coefficient(std::span<const unsigned> exps) const;

    /// -1 for the zero polynomial.
    int total_degree() const noexcept;
    int degree_in(std::string_view var) const;
    /// Leading term in graded-lex order. Precondition: !is_zero().
    const Term &leading_term() const { return terms_.front(); }
    /// Homogeneous component of total degree d.
    MPoly homogeneous_part(unsigned d) const;
    /// coefficients_in(v)[k] is the coefficient of v^k, a polynomial over the
    /// same variable list that does not involve v.
    std::vector<MPoly> coefficients_in(std::string_view var) const;

    MPoly operator-() const;
    MPoly &operator+=(const MPoly &q);
    MPoly &operator-=(const MPoly &q);
    MPoly &operator*=(const MPoly &q);
    MPoly scaled(const Rational &c) const;
    MPoly pow(unsigned n) const;

    MPoly diff(std::string_view var) const;
    /// Composes: every variable bound in `bindings` is replaced by its image
    /// (all images must live on `target`), every other variable of this
    /// polynomial must also occur by name in `target` and is carried over.
    MPoly subst(const std::map<std::string, MPoly> &bindings, const VarList &target) const;
    /// Same variables under new names or a new order (every name must exist in target).
    MPoly reindexed(const VarList &target) const;

    std::complex<double> eval(const std::map<std::string, std::complex<double>> &point) const;

    /// Returns h with *this = h * q, or nullopt if q does not divide *this.
    /// Throws std::domain_error if q is zero.
    std::optional<MPoly> div_exact(const MPoly &q) const;

    nlohmann::json to_json() const;
    static MPoly from_json(const nlohmann::json &j);
    /// Readable form, e.g. "1/2*chi^2*a - s + 3".
    std::string to_string() const;

    bool operator==(const MPoly &other) const = default;

private:
    friend class CompiledPoly;
    void require_same_vars(const MPoly &q, const char *op) const;

    VarList vars_;
    std::vector<Term> terms_;
};

MPoly operator+(MPoly p, const MPoly &q);
MPoly operator-(MPoly p, const MPoly &q);
MPoly operator*(const MPoly &p, const MPoly &q);

} // namespace heunlab::ratpoly
