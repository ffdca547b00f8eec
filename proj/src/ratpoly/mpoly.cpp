#include "heunlab/ratpoly/mpoly.hpp"

#include "heunlab/errors.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace heunlab::ratpoly {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::from_exponents(std::span<const unsigned> exps) {
    if (exps.size() > kMaxVars)
        throw std::length_error("Monomial: more than 7 variables");
    std::uint64_t key = 0;
    unsigned total = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] > kMaxExponent)
            throw std::overflow_error("Monomial: exponent above 255");
        key |= static_cast<std::uint64_t>(exps[i]) << shift(i);
        total += exps[i];
    }
    if (total > kMaxExponent)
        throw std::overflow_error("Monomial: total degree above 255");
    return Monomial(key | (static_cast<std::uint64_t>(total) << 56));
}

Monomial Monomial::variable(std::size_t index, unsigned power) {
    std::vector<unsigned> e(index + 1, 0);
    e[index] = power;
    return from_exponents(e);
}

std::vector<unsigned> Monomial::exponents(std::size_t nvars) const {
    std::vector<unsigned> e(nvars);
    for (std::size_t i = 0; i < nvars; ++i)
        e[i] = exponent(i);
    return e;
}

bool Monomial::divides(Monomial other) const noexcept {
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (exponent(i) > other.exponent(i))
            return false;
    return true;
}

Monomial Monomial::operator*(Monomial other) const {
    // Byte-wise addition is only safe when no field overflows.
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (exponent(i) + other.exponent(i) > kMaxExponent)
            throw std::overflow_error("Monomial: exponent above 255");
    if (total_degree() + other.total_degree() > kMaxExponent)
        throw std::overflow_error("Monomial: total degree above 255");
    return Monomial(key_ + other.key_);
}

Monomial Monomial::without(std::size_t var) const noexcept {
    const std::uint64_t e = exponent(var);
    return Monomial(key_ - (e << shift(var)) - (e << 56));
}

// ---------------------------------------------------------------------------
// MPoly

namespace {

using TermMap = std::map<Monomial, Rational, std::greater<>>;

std::vector<MPoly::Term> to_terms(TermMap &&m) {
    std::vector<MPoly::Term> out;
    out.reserve(m.size());
    for (auto &[mono, c] : m)
        if (c != 0)
            out.push_back({mono, std::move(c)});
    return out;
}

std::string join_vars(const VarList &v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + v[i];
    return s + ")";
}

} // namespace

MPoly::MPoly(VarList vars) : vars_(std::move(vars)) {
    if (vars_.size() > Monomial::kMaxVars)
        throw std::length_error("MPoly: more than 7 variables");
}

MPoly MPoly::constant(VarList vars, const Rational &c) {
    MPoly p(std::move(vars));
    if (c != 0)
        p.terms_.push_back({Monomial{}, c});
    return p;
}

MPoly MPoly::variable(VarList vars, std::string_view name) {
    MPoly p(std::move(vars));
    p.terms_.push_back({Monomial::variable(p.var_index(name)), Rational(1)});
    return p;
}

MPoly MPoly::monomial(VarList vars, std::span<const unsigned> exps, const Rational &c) {
    MPoly p(std::move(vars));
    if (exps.size() != p.vars_.size())
        throw VariableMismatch("MPoly::monomial: exponent tuple length differs from variable count");
    if (c != 0)
        p.terms_.push_back({Monomial::from_exponents(exps), c});
    return p;
}

MPoly MPoly::from_terms(VarList vars, std::vector<Term> terms) {
    MPoly p(std::move(vars));
    TermMap acc;
    for (auto &t : terms)
        acc[t.mono] += t.coeff;
    p.terms_ = to_terms(std::move(acc));
    return p;
}

std::size_t MPoly::var_index(std::string_view name) const {
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end())
        throw UnknownVariable("unknown variable '" + std::string(name) + "' in " + join_vars(vars_));
    return static_cast<std::size_t>(it - vars_.begin());
}

bool MPoly::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.total_degree() == 0);
}

Rational MPoly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.total_degree() == 0)
        return terms_.back().coeff;
    return Rational(0);
}

Rational MPoly::coefficient(std::span<const unsigned> exps) const {
    const auto m = Monomial::from_exponents(exps);
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                     [](const Term &t, Monomial x) { return t.mono > x; });
    return (it != terms_.end() && it->mono == m) ? it->coeff : Rational(0);
}

int MPoly::total_degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.front().mono.total_degree());
}

int MPoly::degree_in(std::string_view var) const {
    const auto i = var_index(var);
    int d = -1;
    for (const auto &t : terms_)
        d = std::max(d, static_cast<int>(t.mono.exponent(i)));
    return d;
}

MPoly MPoly::homogeneous_part(unsigned d) const {
    MPoly p(vars_);
    for (const auto &t : terms_)
        if (t.mono.total_degree() == d)
            p.terms_.push_back(t);
    return p;
}

std::vector<MPoly> MPoly::coefficients_in(std::string_view var) const {
    const auto i = var_index(var);
    const int deg = degree_in(var);
    std::vector<MPoly> out(static_cast<std::size_t>(std::max(deg + 1, 0)), MPoly(vars_));
    // Removing a variable can reorder monomials, so go through from_terms.
    std::vector<std::vector<Term>> buckets(out.size());
    for (const auto &t : terms_)
        buckets[t.mono.exponent(i)].push_back({t.mono.without(i), t.coeff});
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = from_terms(vars_, std::move(buckets[k]));
    return out;
}

void MPoly::require_same_vars(const MPoly &q, const char *op) const {
    if (vars_ != q.vars_)
        throw VariableMismatch(std::string(op) + ": variable lists differ: " + join_vars(vars_) + " vs " +
                               join_vars(q.vars_));
}

MPoly MPoly::operator-() const {
    MPoly p = *this;
    for (auto &t : p.terms_)
        t.coeff = -t.coeff;
    return p;
}

MPoly &MPoly::operator+=(const MPoly &q) {
    require_same_vars(q, "add");
    std::vector<Term> out;
    out.reserve(terms_.size() + q.terms_.size());
    auto a = terms_.begin();
    auto b = q.terms_.begin();
    while (a != terms_.end() || b != q.terms_.end()) {
        if (b == q.terms_.end() || (a != terms_.end() && a->mono > b->mono)) {
            out.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->mono > a->mono) {
            out.push_back(*b++);
        } else {
            Rational c = a->coeff + b->coeff;
            if (c != 0)
                out.push_back({a->mono, std::move(c)});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
    return *this;
}

MPoly &MPoly::operator-=(const MPoly &q) { return *this += -q; }

MPoly &MPoly::operator*=(const MPoly &q) {
    require_same_vars(q, "mul");
    if (terms_.empty() || q.terms_.empty()) {
        terms_.clear();
        return *this;
    }
    std::unordered_map<std::uint64_t, Rational> acc;
    acc.reserve(terms_.size() * q.terms_.size());
    Rational prod;
    for (const auto &a : terms_) {
        for (const auto &b : q.terms_) {
            mpq_mul(prod.get_mpq_t(), a.coeff.get_mpq_t(), b.coeff.get_mpq_t());
            auto &slot = acc[(a.mono * b.mono).key()];
            mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), prod.get_mpq_t());
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto &[key, c] : acc) {
        if (c == 0)
            continue;
        out.push_back({Monomial::from_key(key), std::move(c)});
    }
    std::sort(out.begin(), out.end(), [](const Term &x, const Term &y) { return x.mono > y.mono; });
    terms_ = std::move(out);
    return *this;
}

MPoly MPoly::scaled(const Rational &c) const {
    if (c == 0)
        return MPoly(vars_);
    MPoly p = *this;
    for (auto &t : p.terms_)
        t.coeff *= c;
    return p;
}

MPoly MPoly::pow(unsigned n) const {
    MPoly result = constant(vars_, 1);
    MPoly base = *this;
    while (n) {
        if (n & 1u)
            result *= base;
        n >>= 1u;
        if (n)
            base *= base;
    }
    return result;
}

MPoly MPoly::diff(std::string_view var) const {
    const auto i = var_index(var);
    const auto unit = Monomial::variable(i);
    MPoly p(vars_);
    for (const auto &t : terms_) {
        const unsigned e = t.mono.exponent(i);
        if (e == 0)
            continue;
        p.terms_.push_back({t.mono / unit, t.coeff * e});
    }
    // Lowering one exponent by one keeps grlex order among the survivors.
    return p;
}

MPoly MPoly::subst(const std::map<std::string, MPoly> &bindings, const VarList &target) const {
    for (const auto &[name, image] : bindings) {
        var_index(name); // throws for a binding to a variable we do not have
        if (image.vars_ != target)
            throw VariableMismatch("subst: image of '" + name + "' is over " + join_vars(image.vars_) +
                                   ", expected " + join_vars(target));
    }
    // Image of each of our variables as a polynomial on target.
    std::vector<MPoly> images;
    images.reserve(vars_.size());
    for (const auto &v : vars_) {
        const auto it = bindings.find(v);
        if (it != bindings.end()) {
            images.push_back(it->second);
            continue;
        }
        if (std::find(target.begin(), target.end(), v) == target.end())
            throw VariableMismatch("subst: unbound variable '" + v + "' missing from target " + join_vars(target));
        images.push_back(variable(target, v));
    }
    // Power tables, filled lazily.
    std::vector<std::vector<MPoly>> powers(vars_.size());
    const auto power = [&](std::size_t i, unsigned e) -> const MPoly & {
        auto &tab = powers[i];
        if (tab.empty())
            tab.push_back(constant(target, 1));
        while (tab.size() <= e)
            tab.push_back(tab.back() * images[i]);
        return tab[e];
    };
    MPoly result(target);
    for (const auto &t : terms_) {
        MPoly term = constant(target, t.coeff);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (const unsigned e = t.mono.exponent(i))
                term *= power(i, e);
        result += term;
    }
    return result;
}

MPoly MPoly::reindexed(const VarList &target) const {
    MPoly probe(target);
    std::vector<std::size_t> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        where[i] = probe.var_index(vars_[i]);
    std::vector<Term> out;
    out.reserve(terms_.size());
    std::vector<unsigned> e(target.size());
    for (const auto &t : terms_) {
        std::fill(e.begin(), e.end(), 0u);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            e[where[i]] = t.mono.exponent(i);
        out.push_back({Monomial::from_exponents(e), t.coeff});
    }
    return from_terms(target, std::move(out));
}

std::complex<double> MPoly::eval(const std::map<std::string, std::complex<double>> &point) const {
    std::vector<std::complex<double>> x(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto it = point.find(vars_[i]);
        if (it == point.end())
            throw UnknownVariable("eval: variable '" + vars_[i] + "' is unbound");
        x[i] = it->second;
    }
    return CompiledPoly(*this)(x);
}

std::optional<MPoly> MPoly::div_exact(const MPoly &q) const {
    require_same_vars(q, "div_exact");
    if (q.is_zero())
        throw std::domain_error("div_exact: division by the zero polynomial");
    TermMap rem;
    for (const auto &t : terms_)
        rem.emplace(t.mono, t.coeff);
    const Term &lead = q.terms_.front();
    const Rational inv_lead = 1 / lead.coeff;
    std::vector<Term> quotient;
    Rational c;
    while (!rem.empty()) {
        const auto top = rem.begin();
        if (!lead.mono.divides(top->first))
            return std::nullopt;
        const Monomial m = top->first / lead.mono;
        const Rational f = top->second * inv_lead;
        rem.erase(top);
        for (auto it = q.terms_.begin() + 1; it != q.terms_.end(); ++it) {
            mpq_mul(c.get_mpq_t(), f.get_mpq_t(), it->coeff.get_mpq_t());
            auto [slot, inserted] = rem.try_emplace(it->mono * m);
            mpq_sub(slot->second.get_mpq_t(), slot->second.get_mpq_t(), c.get_mpq_t());
            if (slot->second == 0)
                rem.erase(slot);
        }
        quotient.push_back({m, f});
    }
    // Quotient monomials come out in strictly decreasing order.
    MPoly h(vars_);
    h.terms_ = std::move(quotient);
    return h;
}

nlohmann::json MPoly::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : terms_) {
        terms.push_back({{"num", t.coeff.get_num().get_str()},
                         {"den", t.coeff.get_den().get_str()},
                         {"exp", t.mono.exponents(vars_.size())}});
    }
    return {{"vars", vars_}, {"terms", std::move(terms)}};
}

MPoly MPoly::from_json(const nlohmann::json &j) {
    MPoly p(j.at("vars").get<VarList>());
    std::vector<Term> terms;
    for (const auto &t : j.at("terms")) {
        const auto exps = t.at("exp").get<std::vector<unsigned>>();
        if (exps.size() != p.vars_.size())
            throw VariableMismatch("from_json: exponent tuple length differs from variable count");
        const Rational c = parse_rational(t.at("num").get<std::string>() + "/" + t.at("den").get<std::string>());
        terms.push_back({Monomial::from_exponents(exps), c});
    }
    return from_terms(p.vars_, std::move(terms));
}

std::string MPoly::to_string() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        Rational c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            c = abs(c);
        }
        first = false;
        bool wrote = false;
        if (c != 1 || t.mono.total_degree() == 0) {
            os << ratpoly::to_string(c);
            wrote = true;
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const unsigned e = t.mono.exponent(i);
            if (!e)
                continue;
            os << (wrote ? "*" : "") << vars_[i];
            if (e > 1)
                os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

MPoly operator+(MPoly p, const MPoly &q) { return p += q; }
MPoly operator-(MPoly p, const MPoly &q) { return p -= q; }
MPoly operator*(const MPoly &p, const MPoly &q) {
    MPoly r = p;
    r *= q;
    return r;
}

// ---------------------------------------------------------------------------
// CompiledPoly

CompiledPoly::CompiledPoly(const MPoly &p) : nvars_(p.vars_.size()), max_exp_(p.vars_.size(), 0) {
    coeffs_.reserve(p.terms_.size());
    exps_.reserve(p.terms_.size() * nvars_);
    for (const auto &t : p.terms_) {
        coeffs_.push_back(to_double(t.coeff));
        for (std::size_t i = 0; i < nvars_; ++i) {
            exps_.push_back(t.mono.exponent(i));
            max_exp_[i] = std::max(max_exp_[i], t.mono.exponent(i));
        }
    }
}

std::pair<std::complex<double>, double>
CompiledPoly::eval_with_scale(std::span<const std::complex<double>> point) const {
    if (point.size() != nvars_)
        throw VariableMismatch("CompiledPoly: point dimension differs from variable count");
    std::vector<std::vector<std::complex<double>>> pw(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
        pw[i].resize(max_exp_[i] + 1);
        pw[i][0] = 1.0;
        for (unsigned e = 1; e <= max_exp_[i]; ++e)
            pw[i][e] = pw[i][e - 1] * point[i];
    }
    std::complex<double> sum = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        std::complex<double> term = coeffs_[k];
        for (std::size_t i = 0; i < nvars_; ++i)
            term *= pw[i][exps_[k * nvars_ + i]];
        sum += term;
        scale += std::abs(term);
    }
    return {sum, scale};
}

std::complex<double> CompiledPoly::operator()(std::span<const std::complex<double>> point) const {
    return eval_with_scale(point).first;
}

} // namespace heunlab::ratpoly
