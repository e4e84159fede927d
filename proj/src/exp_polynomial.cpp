#include "odecert/exp_polynomial.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"

#include <algorithm>
#include <map>

namespace odecert {

namespace {
struct MuLess {
    bool operator()(const GaussianRational& a, const GaussianRational& b) const {
        return GaussianRational::cmp(a, b) < 0;
    }
};
} // namespace

ExpPolynomial::ExpPolynomial(std::vector<EPTerm> terms) {
    std::map<GaussianRational, Poly, MuLess> merged;
    for (auto& t : terms) {
        if (t.p.is_zero()) continue;
        auto [it, fresh] = merged.emplace(t.mu, t.p);
        if (!fresh) it->second = it->second + t.p;
    }
    for (auto& [mu, p] : merged)
        if (!p.is_zero()) terms_.push_back({mu, p});
}

ExpPolynomial ExpPolynomial::operator-() const {
    std::vector<EPTerm> r;
    for (const auto& t : terms_) r.push_back({t.mu, -t.p});
    return ExpPolynomial(std::move(r));
}

ExpPolynomial ExpPolynomial::operator+(const ExpPolynomial& o) const {
    std::vector<EPTerm> r = terms_;
    r.insert(r.end(), o.terms_.begin(), o.terms_.end());
    return ExpPolynomial(std::move(r));
}

ExpPolynomial ExpPolynomial::operator*(const ExpPolynomial& o) const {
    std::vector<EPTerm> r;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) r.push_back({a.mu + b.mu, a.p * b.p});
    return ExpPolynomial(std::move(r));
}

ExpPolynomial ExpPolynomial::scale(const GaussianRational& c) const {
    std::vector<EPTerm> r;
    for (const auto& t : terms_) r.push_back({t.mu, t.p.scale(c)});
    return ExpPolynomial(std::move(r));
}

ExpPolynomial ExpPolynomial::derivative() const {
    std::vector<EPTerm> r;
    for (const auto& t : terms_) r.push_back({t.mu, t.p.derivative() + t.p.scale(t.mu)});
    return ExpPolynomial(std::move(r));
}

ExpPolynomial ExpPolynomial::derivative(int j) const {
    ExpPolynomial d = *this;
    for (int k = 0; k < j; ++k) d = d.derivative();
    return d;
}

GaussianRational ExpPolynomial::value_at_zero() const {
    GaussianRational s;
    for (const auto& t : terms_) s = s + t.p.coeff(0);
    return s;
}

ComplexBox ExpPolynomial::eval_box(const Dyadic& t, long bits) const {
    long w = bits + 8;
    mpq_class tq = t.to_rational();
    ComplexBox acc;
    for (const auto& term : terms_) {
        GaussianRational pval = term.p.eval(GaussianRational(tq));
        GaussianRational mt = term.mu * GaussianRational(tq);
        ComplexBox e = exp_box_raw(ComplexBox::from_exact(mt, w), w);
        acc = acc + e.scale(pval, w);
    }
    return acc;
}

Dyadic ExpPolynomial::sup_bound_01(long bits) const {
    RealInterval unit(Dyadic(0), Dyadic(1));
    ComplexBox tbox(unit);
    Dyadic s;
    for (const auto& term : terms_) {
        ComplexBox pv = term.p.eval_box(tbox, bits);
        ComplexBox mu_t = ComplexBox::from_exact(term.mu, bits) * tbox;
        ComplexBox ev = exp_box_raw(mu_t, bits);
        s = s + pv.mag_upper() * ev.mag_upper();
    }
    return s;
}

std::string ExpPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + t.p.to_string("t") + ")";
        if (!t.mu.is_zero()) s += "*exp((" + t.mu.to_string() + ")*t)";
    }
    return s;
}

// ------------------------------------------------------------- conversion

namespace {

// affine argument c1*t with zero constant part; nullopt otherwise
std::optional<GaussianRational> linear_rate(const ExpPolynomial& ep) {
    if (ep.is_zero()) return GaussianRational(0);
    if (ep.terms().size() != 1) return std::nullopt;
    const EPTerm& t = ep.terms()[0];
    if (!t.mu.is_zero()) return std::nullopt;
    if (t.p.degree() > 1) return std::nullopt;
    if (!t.p.coeff(0).is_zero()) return std::nullopt; // e^{c0} has no exact rational value
    return t.p.coeff(1);
}

} // namespace

std::optional<ExpPolynomial> to_exp_polynomial(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: return ExpPolynomial::constant(e->value);
        case Expr::Kind::Time: return ExpPolynomial::polynomial(Poly::X());
        case Expr::Kind::Add: {
            auto l = to_exp_polynomial(e->a);
            if (!l) return std::nullopt;
            auto r = to_exp_polynomial(e->b);
            if (!r) return std::nullopt;
            return *l + *r;
        }
        case Expr::Kind::Mul: {
            auto l = to_exp_polynomial(e->a);
            if (!l) return std::nullopt;
            auto r = to_exp_polynomial(e->b);
            if (!r) return std::nullopt;
            return *l * *r;
        }
        case Expr::Kind::Neg: {
            auto x = to_exp_polynomial(e->a);
            if (!x) return std::nullopt;
            return -*x;
        }
        case Expr::Kind::Pow: {
            auto x = to_exp_polynomial(e->a);
            if (!x) return std::nullopt;
            ExpPolynomial acc = ExpPolynomial::constant(GaussianRational(1));
            for (unsigned long k = 0; k < e->power; ++k) acc = acc * *x;
            return acc;
        }
        case Expr::Kind::Exp: {
            auto arg = to_exp_polynomial(e->a);
            if (!arg) return std::nullopt;
            auto c = linear_rate(*arg);
            if (!c) return std::nullopt;
            return ExpPolynomial::exponential(*c);
        }
        case Expr::Kind::Sin:
        case Expr::Kind::Cos: {
            auto arg = to_exp_polynomial(e->a);
            if (!arg) return std::nullopt;
            auto c = linear_rate(*arg);
            if (!c) return std::nullopt;
            GaussianRational ic = GaussianRational::i() * *c;
            ExpPolynomial plus = ExpPolynomial::exponential(ic);
            ExpPolynomial minus = ExpPolynomial::exponential(-ic);
            GaussianRational half(1, 2);
            if (e->kind == Expr::Kind::Cos) return (plus + minus).scale(half);
            // sin = (e^{ict} - e^{-ict}) / (2i) = -i/2 e^{ict} + i/2 e^{-ict}
            return (plus - minus).scale(-GaussianRational::i() * half);
        }
    }
    throw internal_error("unreachable expr kind");
}

} // namespace odecert
