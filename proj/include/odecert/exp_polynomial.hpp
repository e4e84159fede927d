#pragma once

#include "odecert/expr.hpp"
#include "odecert/poly.hpp"

#include <optional>
#include <vector>

namespace odecert {

// Finite sum  sum_k p_k(t) * e^{mu_k t}  with exact rational-complex rates and
// polynomial coefficients. Closed under +, *, d/dt, and the first-order
// convolution integrals, which is what makes the closed-form solver backend
// exact.
struct EPTerm {
    GaussianRational mu;
    Poly p;
};

class ExpPolynomial {
public:
    ExpPolynomial() = default;
    explicit ExpPolynomial(std::vector<EPTerm> terms); // merges, drops zeros, sorts

    static ExpPolynomial zero() { return ExpPolynomial(); }
    static ExpPolynomial constant(const GaussianRational& c) {
        return ExpPolynomial({{GaussianRational(0), Poly::constant(c)}});
    }
    static ExpPolynomial polynomial(const Poly& p) {
        return ExpPolynomial({{GaussianRational(0), p}});
    }
    static ExpPolynomial exponential(const GaussianRational& mu) {
        return ExpPolynomial({{mu, Poly::constant(GaussianRational(1))}});
    }

    const std::vector<EPTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ExpPolynomial operator-() const;
    ExpPolynomial operator+(const ExpPolynomial& o) const;
    ExpPolynomial operator-(const ExpPolynomial& o) const { return *this + (-o); }
    ExpPolynomial operator*(const ExpPolynomial& o) const;
    ExpPolynomial scale(const GaussianRational& c) const;

    ExpPolynomial derivative() const;
    ExpPolynomial derivative(int j) const;

    // Exact value at t = 0 (all exponentials are 1 there).
    GaussianRational value_at_zero() const;

    // Enclosure of the value at dyadic t; polynomial parts are exact, only the
    // exponentials round.
    ComplexBox eval_box(const Dyadic& t, long bits) const;

    // Upper bound for sup |value| over [0, 1].
    Dyadic sup_bound_01(long bits = 32) const;

    std::string to_string() const;

private:
    std::vector<EPTerm> terms_;
};

// Canonical form of an expression when it lies in the exp-polynomial class:
// polynomials, exp/sin/cos of c*t with exact rational-complex c, closed under
// + and *. Returns nullopt otherwise (e.g. exp(t^2), or exp(1 + t) whose
// constant e-factor has no exact rational representation).
std::optional<ExpPolynomial> to_exp_polynomial(const ExprPtr& e);

} // namespace odecert
