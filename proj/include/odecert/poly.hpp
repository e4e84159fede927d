#pragma once

#include "odecert/gaussian_rational.hpp"
#include "odecert/interval.hpp"

#include <string>
#include <utility>
#include <vector>

namespace odecert {

// Polynomial over the Gaussian rationals; coeffs[i] multiplies X^i. The zero
// polynomial is the empty list, otherwise the last coefficient is nonzero.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(const GaussianRational& c) { return Poly({c}); }
    static Poly X() { return Poly({GaussianRational(0), GaussianRational(1)}); }
    // (X - r1)(X - r2)... for given roots
    static Poly from_roots(const std::vector<GaussianRational>& roots);

    const std::vector<GaussianRational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const GaussianRational& leading() const;
    GaussianRational coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : GaussianRational(0);
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scale(const GaussianRational& s) const;
    Poly monic() const;
    Poly derivative() const;
    Poly antiderivative() const; // constant term zero

    GaussianRational eval(const GaussianRational& x) const;
    ComplexBox eval_box(const ComplexBox& x, long bits) const;

    std::string to_string(const std::string& var = "X") const;

private:
    void trim();
    std::vector<GaussianRational> c_;
};

// Exact division with remainder: P = D*Q + R, deg R < deg D.
std::pair<Poly, Poly> poly_divmod(const Poly& p, const Poly& d);

// True iff Pu = Py * Q exactly for some polynomial Q.
bool divides(const Poly& py, const Poly& pu);

// Monic gcd over Q[i] (Euclid); gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

// Yun square-free decomposition: returns (F_k, k) with P = lead * prod F_k^k,
// the F_k monic, square-free, pairwise coprime, deg F_k >= 1.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);

// Synthetic division by (X - z): P(X) = (X - z)*R(X) + rem, via the reduction
// recurrence on coefficients.
struct Deflation {
    Poly reduced;
    GaussianRational remainder;
};
Deflation reduce_at_root(const Poly& p, const GaussianRational& z);

struct BoxDeflation {
    std::vector<ComplexBox> reduced; // coefficient i multiplies X^i
    ComplexBox remainder;
};
BoxDeflation reduce_at_root(const Poly& p, const ComplexBox& z, long bits);

} // namespace odecert
