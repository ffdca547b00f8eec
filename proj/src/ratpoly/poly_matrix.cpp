#include "heunlab/ratpoly/poly_matrix.hpp"

#include "heunlab/errors.hpp"

#include <stdexcept>
#include <string>

namespace heunlab::ratpoly {

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, VarList vars)
    : rows_(rows), cols_(cols), vars_(std::move(vars)), entries_(rows * cols, MPoly(vars_)) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("PolyMatrix: dimensions must be positive");
}

PolyMatrix PolyMatrix::identity(std::size_t n, VarList vars) {
    PolyMatrix m(n, n, std::move(vars));
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = MPoly::constant(m.vars_, 1);
    return m;
}

MPoly &PolyMatrix::at(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }
const MPoly &PolyMatrix::at(std::size_t i, std::size_t j) const { return entries_.at(i * cols_ + j); }

void PolyMatrix::set(std::size_t i, std::size_t j, MPoly p) {
    if (p.vars() != vars_)
        throw VariableMismatch("PolyMatrix::set: entry over a different variable list");
    at(i, j) = std::move(p);
}

void PolyMatrix::require_shape(const PolyMatrix &other, const char *op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument(std::string("PolyMatrix ") + op + ": shape mismatch");
    if (vars_ != other.vars_)
        throw VariableMismatch(std::string("PolyMatrix ") + op + ": variable lists differ");
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix &other) const {
    require_shape(other, "add");
    PolyMatrix r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        r.entries_[k] += other.entries_[k];
    return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix &other) const {
    require_shape(other, "sub");
    PolyMatrix r = *this;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        r.entries_[k] -= other.entries_[k];
    return r;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix &other) const {
    if (cols_ != other.rows_)
        throw std::invalid_argument("PolyMatrix mul: inner dimensions differ");
    if (vars_ != other.vars_)
        throw VariableMismatch("PolyMatrix mul: variable lists differ");
    PolyMatrix r(rows_, other.cols_, vars_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < other.cols_; ++j)
            for (std::size_t k = 0; k < cols_; ++k)
                if (!at(i, k).is_zero() && !other.at(k, j).is_zero())
                    r.at(i, j) += at(i, k) * other.at(k, j);
    return r;
}

PolyMatrix PolyMatrix::scaled(const Rational &c) const {
    PolyMatrix r = *this;
    for (auto &e : r.entries_)
        e = e.scaled(c);
    return r;
}

PolyMatrix PolyMatrix::subst(const std::map<std::string, MPoly> &bindings, const VarList &target) const {
    PolyMatrix r(rows_, cols_, target);
    for (std::size_t k = 0; k < entries_.size(); ++k)
        r.entries_[k] = entries_[k].subst(bindings, target);
    return r;
}

MPoly det(const PolyMatrix &m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("det: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ", not square");
    const std::size_t n = m.rows();
    std::vector<std::vector<MPoly>> a(n, std::vector<MPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = m.at(i, j);

    bool negate = false;
    MPoly prev = MPoly::constant(m.vars(), 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            // Any nonzero pivot works; the sparsest keeps intermediate growth down.
            std::size_t best = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!a[i][k].is_zero() && (best == n || a[i][k].terms().size() < a[best][k].terms().size()))
                    best = i;
            if (best == n)
                return MPoly(m.vars());
            std::swap(a[k], a[best]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MPoly num = a[k][k] * a[i][j];
                if (!a[i][k].is_zero() && !a[k][j].is_zero())
                    num -= a[i][k] * a[k][j];
                if (num.is_zero()) {
                    a[i][j] = std::move(num);
                    continue;
                }
                auto q = num.div_exact(prev);
                if (!q)
                    throw InternalInconsistency("det: Bareiss step not exactly divisible");
                a[i][j] = std::move(*q);
            }
            a[i][k] = MPoly(m.vars());
        }
        prev = a[k][k];
    }
    return negate ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

MPoly resultant(const MPoly &p, const MPoly &q, std::string_view var) {
    const int m = p.degree_in(var);
    const int n = q.degree_in(var);
    if (m < 1 || n < 1)
        throw std::invalid_argument("resultant: both polynomials need positive degree in '" + std::string(var) + "'");
    const auto pc = p.coefficients_in(var);
    const auto qc = q.coefficients_in(var);
    const auto size = static_cast<std::size_t>(m + n);
    PolyMatrix s(size, size, p.vars());
    // Rows 0..n-1 carry shifted copies of p, rows n..n+m-1 of q, highest power first.
    for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r)
        for (int k = 0; k <= m; ++k)
            s.set(r, r + static_cast<std::size_t>(m - k), pc[static_cast<std::size_t>(k)]);
    for (std::size_t r = 0; r < static_cast<std::size_t>(m); ++r)
        for (int k = 0; k <= n; ++k)
            s.set(static_cast<std::size_t>(n) + r, r + static_cast<std::size_t>(n - k), qc[static_cast<std::size_t>(k)]);
    return det(s);
}

MPoly discriminant(const MPoly &p, std::string_view var) {
    const int n = p.degree_in(var);
    const MPoly res = resultant(p, p.diff(var), var);
    const MPoly lead = p.coefficients_in(var).back();
    auto d = res.div_exact(lead);
    if (!d)
        throw InternalInconsistency("discriminant: resultant not divisible by the leading coefficient");
    return (n * (n - 1) / 2) % 2 ? -*d : *d;
}

} // namespace heunlab::ratpoly
