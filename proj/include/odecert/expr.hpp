#pragma once

#include "odecert/gaussian_rational.hpp"
#include "odecert/interval.hpp"

#include <memory>
#include <string>

namespace odecert {

// Closed-form signal expression tree. Nodes are immutable and shared.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Time, Add, Mul, Neg, Pow, Exp, Sin, Cos };
    Kind kind;
    GaussianRational value;  // Const
    ExprPtr a, b;            // children (b only for Add/Mul)
    unsigned long power = 0; // Pow exponent, >= 0
};

ExprPtr mk_const(const GaussianRational& v);
ExprPtr mk_time();
ExprPtr mk_add(ExprPtr l, ExprPtr r);
ExprPtr mk_mul(ExprPtr l, ExprPtr r);
ExprPtr mk_neg(ExprPtr x);
ExprPtr mk_pow(ExprPtr x, unsigned long k);
ExprPtr mk_exp(ExprPtr x);
ExprPtr mk_sin(ExprPtr x);
ExprPtr mk_cos(ExprPtr x);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' nat]
//   atom   := rational | 'i' | 't' | '(' expr ')' | '-' atom | fn '(' expr ')'
//   fn     := 'exp' | 'sin' | 'cos'
//   rational := int ['/' nat]
// Whitespace is insignificant. Unary minus of a constant folds into the
// constant so negative literals round-trip structurally.
ExprPtr parse_signal(const std::string& text);

// Prints a grammar-conformant string; parse(print(parse(s))) is structurally
// identical to parse(s).
std::string print_signal(const ExprPtr& e);

// Exact symbolic derivative (with light algebraic folding).
ExprPtr differentiate(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// True when every constant in the tree is real (the expression is then
// real-valued on [0,1]).
bool expr_all_real(const ExprPtr& e);

// Interval evaluation over a (possibly wide) time range at working precision
// `w`; enclosure is rigorous for every t in the range.
ComplexBox eval_expr(const ExprPtr& e, const RealInterval& t, long w);

} // namespace odecert
