#pragma once

#include "odecert/exp_polynomial.hpp"
#include "odecert/expr.hpp"
#include "odecert/interval.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

namespace odecert {

// Closed-form signal: an expression with its derivative chain, cached under a
// lock so evaluation stays safe from concurrent solver workers.
class ExprSignal {
public:
    explicit ExprSignal(ExprPtr ast);

    const ExprPtr& ast() const { return state_->derivs[0]; }
    ExprPtr derivative_ast(int j) const;

private:
    struct State {
        std::mutex mu;
        std::vector<ExprPtr> derivs;
    };
    std::shared_ptr<State> state_;
};

// Precision-indexed oracle with smoothness metadata: an approximant map
// (j, t, bits) -> box of width <= 2^-bits, plus sup bounds for |u^(j)| on
// [0,1] for j = 0..max_order.
class OracleSignal {
public:
    using Approximant = std::function<ComplexBox(int j, const Dyadic& t, long bits)>;

    OracleSignal(Approximant f, int max_order, std::vector<Dyadic> deriv_sup_bounds)
        : f_(std::move(f)), max_order_(max_order), sup_(std::move(deriv_sup_bounds)) {}

    const Approximant& approximant() const { return f_; }
    int max_order() const { return max_order_; }
    const std::vector<Dyadic>& sup_bounds() const { return sup_; }

private:
    Approximant f_;
    int max_order_;
    std::vector<Dyadic> sup_;
};

// Input-signal carrier: either closed-form or oracle.
class Signal {
public:
    static Signal from_expr(ExprPtr ast) { return Signal(ExprSignal(std::move(ast))); }
    static Signal from_text(const std::string& text) { return from_expr(parse_signal(text)); }
    static Signal zero() { return from_expr(mk_const(GaussianRational(0))); }
    static Signal oracle(OracleSignal o) { return Signal(std::move(o)); }

    bool is_expr() const { return std::holds_alternative<ExprSignal>(impl_); }
    const ExprSignal* as_expr() const { return std::get_if<ExprSignal>(&impl_); }

    // Highest derivative order the signal provides (unbounded for closed form).
    int max_order() const;

    // Enclosure of u^(j)(t) with width <= 2^-bits; results at bits and bits+8
    // are nested. Throws domain_error for t outside [0,1] and
    // order_unavailable for j beyond the stored order.
    ComplexBox eval_enclosure(int j, const Dyadic& t, long bits) const;

    // Enclosure of u^(j) over a whole subinterval of [0,1].
    ComplexBox eval_over(int j, const RealInterval& range, long bits) const;

    // Upper bound for sup_{[0,1]} |u^(j)|.
    Dyadic sup_bound(int j) const;

    std::optional<ExpPolynomial> to_exp_polynomial() const;

    // The signal s(t) = this(t0 + t); valid for t in [0, 1 - t0].
    Signal shifted(const Dyadic& t0) const;

    // True when the signal is certainly real-valued (closed forms with real
    // constants); oracles are conservatively not-known-real.
    bool is_known_real() const;

private:
    explicit Signal(ExprSignal e) : impl_(std::move(e)) {}
    explicit Signal(OracleSignal o) : impl_(std::move(o)) {}

    ComplexBox eval_raw(int j, const Dyadic& t, long bits) const;

    std::variant<ExprSignal, OracleSignal> impl_;
};

} // namespace odecert
