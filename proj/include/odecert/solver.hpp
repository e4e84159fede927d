#pragma once

#include "odecert/errors.hpp"
#include "odecert/exp_polynomial.hpp"
#include "odecert/ode.hpp"
#include "odecert/signal.hpp"
#include "odecert/work.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace odecert {

struct singular_matrix : error {
    explicit singular_matrix(const std::string& msg = "A1 is singular")
        : error("E_SINGULAR", msg) {}
};

// Point query: enclosure of the solution at dyadic t in [0,1] with width
// <= 2^-bits.
struct SolutionQuery {
    Dyadic t;
    long bits = 24;
};

struct SolutionResult {
    std::vector<ComplexBox> value; // one entry for scalar problems
    WorkCounters work;
    std::string backend;
};

enum class Backend { Auto, ClosedForm, Quadrature };

struct SolveOptions {
    Backend backend = Backend::Auto;
    // Cascade deflation order override (permutation of the flat root list);
    // default is the deterministic sorted order.
    std::optional<std::vector<std::size_t>> root_order;
    // Intersect down the 8-bit precision ladder so results nest across bit
    // levels. Internal high-precision consumers turn this off: a single raw
    // enclosure is equally sound and much cheaper at large bit counts.
    bool nested = true;
};

// Integrating-factor solve for order (1,n): closed-form convolution when the
// signal has an exp-polynomial form, rigorous composite quadrature otherwise.
SolutionResult solve_first_order(const LinearODE& ode, const Signal& u, const SolutionQuery& q,
                                 const SolveOptions& opts = {});

// Order-(m,n) solve by root deflation: peel one certified root of P_y at a
// time, solve the reduced equation, then integrate back up through
// y' - sigma y = y~.
SolutionResult solve_cascade(const LinearODE& ode, const Signal& u, const SolutionQuery& q,
                             const SolveOptions& opts = {});

// (1,n) system solve via the matrix-exponential kernel.
SolutionResult solve_system(const ODESystem& sys, const std::vector<Signal>& u,
                            const SolutionQuery& q, const SolveOptions& opts = {});

// Integrand for the rigorous quadrature: a point evaluator plus sup bounds for
// the derivatives that drive the a-priori error formulas (|f'| for the
// rectangle rule, |f''''| for composite Simpson).
struct Integrand {
    std::function<ComplexBox(const Dyadic& tau, long bits)> eval;
    std::optional<Dyadic> sup_d1;
    std::optional<Dyadic> sup_d4;
};

// Enclosure of integral_0^t f, width <= 2^-bits. Node budget 2^22.
ComplexBox rigorous_integral(const Integrand& f, const Dyadic& t_upper, long bits);

struct VectorIntegrand {
    int dim = 0;
    std::function<std::vector<ComplexBox>(const Dyadic& tau, long bits)> eval;
    std::optional<Dyadic> sup_d1;
    std::optional<Dyadic> sup_d4;
};
std::vector<ComplexBox> rigorous_integral(const VectorIntegrand& f, const Dyadic& t_upper,
                                          long bits);

// Exact exp-polynomial solution of y' + a0 y = sum_j b_j u^(j), y(0) = y0,
// for exp-polynomial input; the closed-form backend evaluates this.
ExpPolynomial first_order_closed_form(const GaussianRational& a0,
                                      const std::vector<GaussianRational>& b,
                                      const GaussianRational& y0, const ExpPolynomial& u);

// Deflation chain of P_y for reporting: sigma_k plus the reduced coefficient
// list after each synthetic division.
struct CascadeStep {
    ComplexBox sigma;
    std::vector<ComplexBox> reduced_coeffs;
};
std::vector<CascadeStep> deflation_chain(const LinearODE& ode, long bits,
                                         const std::optional<std::vector<std::size_t>>& order = {});

} // namespace odecert
