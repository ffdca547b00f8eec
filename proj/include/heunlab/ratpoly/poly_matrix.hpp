#pragma once

#include "heunlab/ratpoly/mpoly.hpp"

#include <cstddef>
#include <vector>

namespace heunlab::ratpoly {

/// Dense row-major matrix of polynomials sharing one variable list.
class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols, VarList vars);

    static PolyMatrix identity(std::size_t n, VarList vars);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const VarList &vars() const noexcept { return vars_; }

    /// Zero-based indices.
    MPoly &at(std::size_t i, std::size_t j);
    const MPoly &at(std::size_t i, std::size_t j) const;
    /// Throws VariableMismatch if p is over another variable list.
    void set(std::size_t i, std::size_t j, MPoly p);

    PolyMatrix operator+(const PolyMatrix &other) const;
    PolyMatrix operator-(const PolyMatrix &other) const;
    PolyMatrix operator*(const PolyMatrix &other) const;
    PolyMatrix scaled(const Rational &c) const;
    PolyMatrix subst(const std::map<std::string, MPoly> &bindings, const VarList &target) const;

    bool operator==(const PolyMatrix &) const = default;

private:
    void require_shape(const PolyMatrix &other, const char *op) const;

    std::size_t rows_;
    std::size_t cols_;
    VarList vars_;
    std::vector<MPoly> entries_;
};

/// Fraction-free (Bareiss) determinant with exact polynomial division.
/// Throws std::invalid_argument for non-square input.
MPoly det(const PolyMatrix &m);

/// Sylvester-matrix resultant of p and q with respect to `var`; the result
/// lives on the same variable list and does not involve `var`.
/// Throws std::invalid_argument if either input has degree zero in `var`.
MPoly resultant(const MPoly &p, const MPoly &q, std::string_view var);

/// Discriminant of p in `var`: (-1)^(n(n-1)/2) Res(p, dp/dvar) / lc(p), the
/// quotient computed exactly. For a quadratic b^2 - 4ac up to that convention.
MPoly discriminant(const MPoly &p, std::string_view var);

} // namespace heunlab::ratpoly
