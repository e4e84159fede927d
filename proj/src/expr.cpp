#include "odecert/expr.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"

#include <cctype>

namespace odecert {

namespace {
ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}

ExprPtr mk_const(const GaussianRational& v) {
    return node({Expr::Kind::Const, v, nullptr, nullptr, 0});
}
ExprPtr mk_time() { return node({Expr::Kind::Time, {}, nullptr, nullptr, 0}); }
ExprPtr mk_add(ExprPtr l, ExprPtr r) {
    return node({Expr::Kind::Add, {}, std::move(l), std::move(r), 0});
}
ExprPtr mk_mul(ExprPtr l, ExprPtr r) {
    return node({Expr::Kind::Mul, {}, std::move(l), std::move(r), 0});
}
ExprPtr mk_neg(ExprPtr x) { return node({Expr::Kind::Neg, {}, std::move(x), nullptr, 0}); }
ExprPtr mk_pow(ExprPtr x, unsigned long k) {
    return node({Expr::Kind::Pow, {}, std::move(x), nullptr, k});
}
ExprPtr mk_exp(ExprPtr x) { return node({Expr::Kind::Exp, {}, std::move(x), nullptr, 0}); }
ExprPtr mk_sin(ExprPtr x) { return node({Expr::Kind::Sin, {}, std::move(x), nullptr, 0}); }
ExprPtr mk_cos(ExprPtr x) { return node({Expr::Kind::Cos, {}, std::move(x), nullptr, 0}); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s), pos_(0) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw syntax_error(pos_, "unexpected trailing input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    mpz_class digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw syntax_error(pos_, "expected a number");
        return mpz_class(s_.substr(start, pos_ - start));
    }

    ExprPtr expr() {
        ExprPtr acc = term();
        for (;;) {
            if (eat('+')) {
                acc = mk_add(acc, term());
            } else if (eat('-')) {
                ExprPtr r = term();
                if (r->kind == Expr::Kind::Const)
                    acc = mk_add(acc, mk_const(-r->value));
                else
                    acc = mk_add(acc, mk_neg(r));
            } else {
                return acc;
            }
        }
    }

    ExprPtr term() {
        ExprPtr acc = factor();
        while (eat('*')) acc = mk_mul(acc, factor());
        return acc;
    }

    ExprPtr factor() {
        ExprPtr base = atom();
        if (eat('^')) {
            skip_ws();
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw syntax_error(pos_, "exponent must be a natural number");
            mpz_class k = digits();
            if (!k.fits_ulong_p()) throw syntax_error(pos_, "exponent too large");
            return mk_pow(base, k.get_ui());
        }
        return base;
    }

    ExprPtr atom() {
        char c = peek();
        if (c == '\0') throw syntax_error(pos_, "unexpected end of input");
        if (c == '-') {
            ++pos_;
            ExprPtr x = atom();
            if (x->kind == Expr::Kind::Const) return mk_const(-x->value); // fold for round-trips
            return mk_neg(x);
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) throw syntax_error(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = digits();
            if (eat('/')) {
                std::size_t at = pos_;
                mpz_class den = digits();
                if (den == 0) throw syntax_error(at, "zero denominator");
                mpq_class q(num, den);
                q.canonicalize();
                return mk_const(GaussianRational(q));
            }
            return mk_const(GaussianRational(mpq_class(num)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "t") return mk_time();
            if (name == "i") return mk_const(GaussianRational::i());
            if (name == "exp" || name == "sin" || name == "cos") {
                if (!eat('(')) throw syntax_error(pos_, "expected '(' after function name");
                ExprPtr arg = expr();
                if (!eat(')')) throw syntax_error(pos_, "expected ')'");
                if (name == "exp") return mk_exp(arg);
                if (name == "sin") return mk_sin(arg);
                return mk_cos(arg);
            }
            throw unknown_function(start, name);
        }
        throw syntax_error(pos_, std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_;
};

} // namespace

ExprPtr parse_signal(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------- printer

namespace {

// is the printed form of e a grammar atom (usable as a '^' base / after '-')
bool prints_as_atom(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Time:
        case Expr::Kind::Exp:
        case Expr::Kind::Sin:
        case Expr::Kind::Cos:
            return true;
        case Expr::Kind::Const: {
            const GaussianRational& v = e->value;
            if (v.is_real()) return sgn(v.re()) >= 0;
            return v == GaussianRational::i();
        }
        default:
            return false;
    }
}

std::string print_node(const ExprPtr& e);

std::string print_const(const GaussianRational& v) {
    if (v.is_real()) return v.re().get_str();
    if (v == GaussianRational::i()) return "i";
    // general complex constant: spelled as a parenthesized sum; reparses to an
    // equal value (programmatic ASTs only; the parser never produces these)
    std::string im_mag = (v.im() < 0 ? mpq_class(-v.im()) : v.im()).get_str();
    std::string s = "(";
    if (v.re() != 0) s += v.re().get_str() + (v.im() < 0 ? "-" : "+");
    else if (v.im() < 0) s += "-";
    s += im_mag + "*i)";
    return s;
}

std::string print_atomish(const ExprPtr& e) {
    if (prints_as_atom(e) || e->kind == Expr::Kind::Const) return print_node(e);
    return "(" + print_node(e) + ")";
}

std::string print_mul_operand(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Add) return "(" + print_node(e) + ")";
    return print_node(e);
}

std::string print_node(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: return print_const(e->value);
        case Expr::Kind::Time: return "t";
        case Expr::Kind::Add: {
            const ExprPtr& r = e->b;
            if (r->kind == Expr::Kind::Neg)
                return print_node(e->a) + " - " + print_mul_operand(r->a);
            if (r->kind == Expr::Kind::Const && r->value.is_real() && sgn(r->value.re()) < 0)
                return print_node(e->a) + " - " + (-r->value).re().get_str();
            return print_node(e->a) + " + " + print_mul_operand(r);
        }
        case Expr::Kind::Mul:
            return print_mul_operand(e->a) + "*" + print_mul_operand(e->b);
        case Expr::Kind::Neg: {
            const ExprPtr& x = e->a;
            if (prints_as_atom(x)) return "-" + print_node(x);
            return "-(" + print_node(x) + ")";
        }
        case Expr::Kind::Pow:
            return print_atomish(e->a) + "^" + std::to_string(e->power);
        case Expr::Kind::Exp: return "exp(" + print_node(e->a) + ")";
        case Expr::Kind::Sin: return "sin(" + print_node(e->a) + ")";
        case Expr::Kind::Cos: return "cos(" + print_node(e->a) + ")";
    }
    throw internal_error("unreachable expr kind");
}

} // namespace

std::string print_signal(const ExprPtr& e) { return print_node(e); }

// ---------------------------------------------------------- differentiation

namespace {

bool is_const(const ExprPtr& e, long v) {
    return e->kind == Expr::Kind::Const && e->value == GaussianRational(v);
}

ExprPtr s_neg(const ExprPtr& x) {
    if (x->kind == Expr::Kind::Const) return mk_const(-x->value);
    if (x->kind == Expr::Kind::Neg) return x->a;
    return mk_neg(x);
}

ExprPtr s_add(const ExprPtr& l, const ExprPtr& r) {
    if (is_const(l, 0)) return r;
    if (is_const(r, 0)) return l;
    if (l->kind == Expr::Kind::Const && r->kind == Expr::Kind::Const)
        return mk_const(l->value + r->value);
    return mk_add(l, r);
}

ExprPtr s_mul(const ExprPtr& l, const ExprPtr& r) {
    if (is_const(l, 0) || is_const(r, 0)) return mk_const(GaussianRational(0));
    if (is_const(l, 1)) return r;
    if (is_const(r, 1)) return l;
    if (l->kind == Expr::Kind::Const && r->kind == Expr::Kind::Const)
        return mk_const(l->value * r->value);
    return mk_mul(l, r);
}

ExprPtr s_pow(const ExprPtr& x, unsigned long k) {
    if (k == 0) return mk_const(GaussianRational(1));
    if (k == 1) return x;
    return mk_pow(x, k);
}

} // namespace

ExprPtr differentiate(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: return mk_const(GaussianRational(0));
        case Expr::Kind::Time: return mk_const(GaussianRational(1));
        case Expr::Kind::Add: return s_add(differentiate(e->a), differentiate(e->b));
        case Expr::Kind::Mul:
            return s_add(s_mul(differentiate(e->a), e->b), s_mul(e->a, differentiate(e->b)));
        case Expr::Kind::Neg: return s_neg(differentiate(e->a));
        case Expr::Kind::Pow: {
            if (e->power == 0) return mk_const(GaussianRational(0));
            ExprPtr inner = s_mul(mk_const(GaussianRational(static_cast<long>(e->power))),
                                  s_pow(e->a, e->power - 1));
            return s_mul(inner, differentiate(e->a));
        }
        case Expr::Kind::Exp: return s_mul(e, differentiate(e->a));
        case Expr::Kind::Sin: return s_mul(mk_cos(e->a), differentiate(e->a));
        case Expr::Kind::Cos: return s_neg(s_mul(mk_sin(e->a), differentiate(e->a)));
    }
    throw internal_error("unreachable expr kind");
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Const: return a->value == b->value;
        case Expr::Kind::Time: return true;
        case Expr::Kind::Add:
        case Expr::Kind::Mul:
            return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
        case Expr::Kind::Pow:
            return a->power == b->power && structurally_equal(a->a, b->a);
        case Expr::Kind::Neg:
        case Expr::Kind::Exp:
        case Expr::Kind::Sin:
        case Expr::Kind::Cos:
            return structurally_equal(a->a, b->a);
    }
    return false;
}

bool expr_all_real(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: return e->value.is_real();
        case Expr::Kind::Time: return true;
        case Expr::Kind::Add:
        case Expr::Kind::Mul:
            return expr_all_real(e->a) && expr_all_real(e->b);
        default:
            return e->a ? expr_all_real(e->a) : true;
    }
}

// ---------------------------------------------------------------- evaluation

namespace {

ComplexBox pow_box(const ComplexBox& x, unsigned long k) {
    if (k == 0) return ComplexBox::real_point(Dyadic(1));
    ComplexBox acc;
    bool have = false;
    ComplexBox b = x;
    while (k > 0) {
        if (k & 1) {
            acc = have ? acc * b : b;
            have = true;
        }
        k >>= 1;
        if (k > 0) b = b.sqr();
    }
    return acc;
}

} // namespace

ComplexBox eval_expr(const ExprPtr& e, const RealInterval& t, long w) {
    switch (e->kind) {
        case Expr::Kind::Const: return ComplexBox::from_exact(e->value, w);
        case Expr::Kind::Time: return ComplexBox(t);
        case Expr::Kind::Add: return eval_expr(e->a, t, w) + eval_expr(e->b, t, w);
        case Expr::Kind::Mul: return eval_expr(e->a, t, w) * eval_expr(e->b, t, w);
        case Expr::Kind::Neg: return -eval_expr(e->a, t, w);
        case Expr::Kind::Pow: return pow_box(eval_expr(e->a, t, w), e->power);
        case Expr::Kind::Exp: return exp_box_raw(eval_expr(e->a, t, w), w);
        case Expr::Kind::Sin: return sin_box_raw(eval_expr(e->a, t, w), w);
        case Expr::Kind::Cos: return cos_box_raw(eval_expr(e->a, t, w), w);
    }
    throw internal_error("unreachable expr kind");
}

} // namespace odecert
