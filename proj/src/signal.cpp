#include "odecert/signal.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"

namespace odecert {

ExprSignal::ExprSignal(ExprPtr ast) : state_(std::make_shared<State>()) {
    state_->derivs.push_back(std::move(ast));
}

ExprPtr ExprSignal::derivative_ast(int j) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    while (static_cast<int>(state_->derivs.size()) <= j)
        state_->derivs.push_back(differentiate(state_->derivs.back()));
    return state_->derivs[static_cast<std::size_t>(j)];
}

int Signal::max_order() const {
    if (const auto* o = std::get_if<OracleSignal>(&impl_)) return o->max_order();
    return std::numeric_limits<int>::max();
}

ComplexBox Signal::eval_raw(int j, const Dyadic& t, long bits) const {
    if (const auto* e = std::get_if<ExprSignal>(&impl_)) {
        ExprPtr ast = e->derivative_ast(j);
        long w = bits + 8;
        Dyadic target = Dyadic::pow2(-bits);
        ComplexBox r;
        for (int round = 0; round < 10; ++round) {
            r = eval_expr(ast, RealInterval(t), w);
            if (r.width() <= target) return r;
            w *= 2;
        }
        return r;
    }
    const auto& o = std::get<OracleSignal>(impl_);
    return o.approximant()(j, t, bits);
}

ComplexBox Signal::eval_enclosure(int j, const Dyadic& t, long bits) const {
    if (t.sign() < 0 || t > Dyadic(1)) throw domain_error("signal evaluated outside [0,1]");
    if (j < 0 || j > max_order()) throw order_unavailable();
    if (bits < 1) bits = 1;
    return nested_box_eval([&](long b) { return eval_raw(j, t, b); }, bits);
}

ComplexBox Signal::eval_over(int j, const RealInterval& range, long bits) const {
    if (range.lo().sign() < 0 || range.hi() > Dyadic(1))
        throw domain_error("signal range outside [0,1]");
    if (j < 0 || j > max_order()) throw order_unavailable();
    if (const auto* e = std::get_if<ExprSignal>(&impl_))
        return eval_expr(e->derivative_ast(j), range, bits + 8);
    // oracle: midpoint value plus Lipschitz widening from the next sup bound
    if (j + 1 > max_order()) throw order_unavailable("no Lipschitz bound for oracle range eval");
    ComplexBox mid = eval_raw(j, range.mid(), bits);
    return mid.inflate(sup_bound(j + 1) * range.rad_upper());
}

Dyadic Signal::sup_bound(int j) const {
    if (const auto* o = std::get_if<OracleSignal>(&impl_)) {
        if (j < 0 || j >= static_cast<int>(o->sup_bounds().size()))
            throw order_unavailable("no sup bound stored for this order");
        return o->sup_bounds()[static_cast<std::size_t>(j)];
    }
    ComplexBox over = eval_over(j, RealInterval(Dyadic(0), Dyadic(1)), 24);
    return over.mag_upper();
}

std::optional<ExpPolynomial> Signal::to_exp_polynomial() const {
    if (const auto* e = std::get_if<ExprSignal>(&impl_))
        return odecert::to_exp_polynomial(e->ast());
    return std::nullopt;
}

bool Signal::is_known_real() const {
    if (const auto* e = std::get_if<ExprSignal>(&impl_)) return expr_all_real(e->ast());
    return false;
}

Signal Signal::shifted(const Dyadic& t0) const {
    if (t0.is_zero()) return *this;
    if (const auto* e = std::get_if<ExprSignal>(&impl_)) {
        // substitute t := t0 + t
        ExprPtr shift = mk_add(mk_const(GaussianRational(t0.to_rational())), mk_time());
        std::function<ExprPtr(const ExprPtr&)> subst = [&](const ExprPtr& n) -> ExprPtr {
            switch (n->kind) {
                case Expr::Kind::Const: return n;
                case Expr::Kind::Time: return shift;
                case Expr::Kind::Add: return mk_add(subst(n->a), subst(n->b));
                case Expr::Kind::Mul: return mk_mul(subst(n->a), subst(n->b));
                case Expr::Kind::Neg: return mk_neg(subst(n->a));
                case Expr::Kind::Pow: return mk_pow(subst(n->a), n->power);
                case Expr::Kind::Exp: return mk_exp(subst(n->a));
                case Expr::Kind::Sin: return mk_sin(subst(n->a));
                case Expr::Kind::Cos: return mk_cos(subst(n->a));
            }
            throw internal_error("unreachable expr kind");
        };
        return from_expr(subst(e->ast()));
    }
    const auto& o = std::get<OracleSignal>(impl_);
    OracleSignal::Approximant base = o.approximant();
    Dyadic off = t0;
    return oracle(OracleSignal(
        [base, off](int j, const Dyadic& t, long bits) { return base(j, off + t, bits); },
        o.max_order(), o.sup_bounds()));
}

} // namespace odecert
