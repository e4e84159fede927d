#include "odecert/poly.hpp"

#include "odecert/errors.hpp"

#include <algorithm>

namespace odecert {

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::from_roots(const std::vector<GaussianRational>& roots) {
    Poly p = constant(GaussianRational(1));
    for (const auto& r : roots) p = p * Poly({-r, GaussianRational(1)});
    return p;
}

const GaussianRational& Poly::leading() const {
    if (c_.empty()) throw internal_error("leading coefficient of zero polynomial");
    return c_.back();
}

Poly Poly::operator-() const {
    std::vector<GaussianRational> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<GaussianRational> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        GaussianRational a = i < c_.size() ? c_[i] : GaussianRational(0);
        GaussianRational b = i < o.c_.size() ? o.c_[i] : GaussianRational(0);
        r[i] = a + b;
    }
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<GaussianRational> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::scale(const GaussianRational& s) const {
    std::vector<GaussianRational> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] * s;
    return Poly(std::move(r));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return scale(leading().inverse());
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<GaussianRational> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        r[i - 1] = c_[i] * GaussianRational(static_cast<long>(i));
    return Poly(std::move(r));
}

Poly Poly::antiderivative() const {
    if (is_zero()) return Poly();
    std::vector<GaussianRational> r(c_.size() + 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        r[i + 1] = c_[i] / GaussianRational(static_cast<long>(i) + 1);
    return Poly(std::move(r));
}

GaussianRational Poly::eval(const GaussianRational& x) const {
    GaussianRational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

ComplexBox Poly::eval_box(const ComplexBox& x, long bits) const {
    ComplexBox acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * x + ComplexBox::from_exact(*it, bits);
    return acc;
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        const GaussianRational& c = c_[i];
        if (c.is_zero()) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || !c.is_one()) {
            bool wrap = !c.is_real() && i > 0;
            s += wrap ? "(" + c.to_string() + ")" : c.to_string();
            if (i > 0) s += "*";
        }
        if (i > 0) {
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

std::pair<Poly, Poly> poly_divmod(const Poly& p, const Poly& d) {
    if (d.is_zero()) throw division_by_zero_poly();
    if (p.degree() < d.degree()) return {Poly(), p};
    std::vector<GaussianRational> rem(p.coeffs());
    std::vector<GaussianRational> quo(p.degree() - d.degree() + 1);
    GaussianRational lead_inv = d.leading().inverse();
    for (int k = p.degree() - d.degree(); k >= 0; --k) {
        GaussianRational q = rem[k + d.degree()] * lead_inv;
        quo[k] = q;
        if (q.is_zero()) continue;
        for (int j = 0; j <= d.degree(); ++j)
            rem[k + j] = rem[k + j] - q * d.coeff(j);
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

bool divides(const Poly& py, const Poly& pu) {
    if (py.is_zero()) throw division_by_zero_poly("divisibility by the zero polynomial");
    return poly_divmod(pu, py).second.is_zero();
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = poly_divmod(x, y).second;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.monic();
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
    if (p.degree() < 1) return {};
    Poly f = p.monic();
    Poly fp = f.derivative();
    Poly a0 = poly_gcd(f, fp);
    std::vector<std::pair<Poly, int>> out;
    if (a0.degree() == 0) {
        out.push_back({f, 1});
        return out;
    }
    Poly b = poly_divmod(f, a0).first;
    Poly c = poly_divmod(fp, a0).first;
    Poly d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Poly a = poly_gcd(b, d);
        if (a.degree() > 0) out.push_back({a, i});
        b = poly_divmod(b, a).first;
        c = poly_divmod(d, a).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

Deflation reduce_at_root(const Poly& p, const GaussianRational& z) {
    int m = p.degree();
    if (m < 1) throw degree_zero_input();
    // b_{m-1} = a_m; b_i = a_{i+1} + z*b_{i+1}; remainder b_{-1} = a_0 + z*b_0
    std::vector<GaussianRational> b(m);
    b[m - 1] = p.coeff(m);
    for (int i = m - 2; i >= 0; --i) b[i] = p.coeff(i + 1) + z * b[i + 1];
    GaussianRational rem = p.coeff(0) + z * b[0];
    return {Poly(std::move(b)), rem};
}

BoxDeflation reduce_at_root(const Poly& p, const ComplexBox& z, long bits) {
    int m = p.degree();
    if (m < 1) throw degree_zero_input();
    std::vector<ComplexBox> b(m);
    b[m - 1] = ComplexBox::from_exact(p.coeff(m), bits);
    for (int i = m - 2; i >= 0; --i)
        b[i] = ComplexBox::from_exact(p.coeff(i + 1), bits) + z * b[i + 1];
    ComplexBox rem = ComplexBox::from_exact(p.coeff(0), bits) + z * b[0];
    return {std::move(b), rem};
}

} // namespace odecert
