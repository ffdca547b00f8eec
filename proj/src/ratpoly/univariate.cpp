#include "heunlab/ratpoly/univariate.hpp"

#include "heunlab/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace heunlab::ratpoly {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

UPoly UPoly::from_mpoly(const MPoly &p, std::string_view var) {
    const std::size_t v = p.var_index(var);
    std::vector<Rational> c(static_cast<std::size_t>(std::max(p.degree_in(var), 0)) + 1);
    for (const auto &t : p.terms()) {
        if (t.mono.total_degree() != t.mono.exponent(v))
            throw VariableMismatch("UPoly::from_mpoly: polynomial involves variables other than '" +
                                   std::string(var) + "'");
        c[t.mono.exponent(v)] = t.coeff;
    }
    return UPoly(std::move(c));
}

UPoly UPoly::derivative() const {
    std::vector<Rational> d;
    for (std::size_t k = 1; k < c_.size(); ++k)
        d.push_back(c_[k] * static_cast<long>(k));
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
    if (c_.empty())
        return {};
    UPoly r = *this;
    const Rational l = lead();
    for (auto &x : r.c_)
        x /= l;
    return r;
}

std::vector<double> UPoly::to_doubles() const {
    std::vector<double> d;
    d.reserve(c_.size());
    for (const auto &x : c_)
        d.push_back(to_double(x));
    return d;
}

UPoly operator-(const UPoly &p, const UPoly &q) {
    std::vector<Rational> r(std::max(p.c_.size(), q.c_.size()));
    for (std::size_t k = 0; k < p.c_.size(); ++k)
        r[k] += p.c_[k];
    for (std::size_t k = 0; k < q.c_.size(); ++k)
        r[k] -= q.c_[k];
    return UPoly(std::move(r));
}

UPoly operator*(const UPoly &p, const UPoly &q) {
    if (p.is_zero() || q.is_zero())
        return {};
    std::vector<Rational> r(p.c_.size() + q.c_.size() - 1);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
        for (std::size_t j = 0; j < q.c_.size(); ++j)
            r[i + j] += p.c_[i] * q.c_[j];
    return UPoly(std::move(r));
}

std::pair<UPoly, UPoly> divmod(const UPoly &p, const UPoly &q) {
    if (q.is_zero())
        throw std::domain_error("divmod: zero divisor");
    std::vector<Rational> rem = p.coeffs();
    const int dq = q.degree();
    if (p.degree() < dq)
        return {UPoly(), p};
    std::vector<Rational> quo(static_cast<std::size_t>(p.degree() - dq) + 1);
    for (int k = p.degree(); k >= dq; --k) {
        const Rational f = rem[static_cast<std::size_t>(k)] / q.lead();
        quo[static_cast<std::size_t>(k - dq)] = f;
        if (f == 0)
            continue;
        for (int j = 0; j <= dq; ++j)
            rem[static_cast<std::size_t>(k - dq + j)] -= f * q.coeffs()[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(dq));
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

UPoly gcd(const UPoly &p, const UPoly &q) {
    UPoly a = p;
    UPoly b = q;
    while (!b.is_zero()) {
        UPoly r = divmod(a, b).second.monic();
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<UPoly> square_free(const UPoly &p) {
    if (p.degree() < 1)
        return {};
    std::vector<UPoly> out;
    const UPoly dp = p.derivative();
    UPoly a = gcd(p, dp);
    UPoly b = divmod(p, a).first;
    UPoly c = divmod(dp, a).first;
    UPoly d = c - b.derivative();
    while (b.degree() > 0) {
        UPoly f = gcd(b, d);
        out.push_back(f);
        b = divmod(b, f).first;
        c = divmod(d, f).first;
        d = c - b.derivative();
    }
    for (auto &f : out)
        f = f.monic();
    return out;
}

} // namespace heunlab::ratpoly
