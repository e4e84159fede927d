#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odecert/errors.hpp"
#include "odecert/exp_polynomial.hpp"
#include "odecert/expr.hpp"
#include "odecert/signal.hpp"

#include "oracles.hpp"

using namespace odecert;

TEST_CASE("parser produces the documented trees") {
    ExprPtr e = parse_signal("exp(-t)*sin(3*t)");
    ExprPtr want = mk_mul(mk_exp(mk_neg(mk_time())),
                          mk_sin(mk_mul(mk_const(GaussianRational(3)), mk_time())));
    CHECK(structurally_equal(e, want));

    ExprPtr e2 = parse_signal("1/2 + t^2");
    ExprPtr want2 = mk_add(mk_const(GaussianRational(1, 2)), mk_pow(mk_time(), 2));
    CHECK(structurally_equal(e2, want2));

    CHECK(structurally_equal(parse_signal("i"), mk_const(GaussianRational::i())));
    CHECK(structurally_equal(parse_signal("-3"), mk_const(GaussianRational(-3))));
}

TEST_CASE("parser rejects bad input with positions") {
    CHECK_THROWS_AS(parse_signal("t^(-1)"), syntax_error);
    CHECK_THROWS_AS(parse_signal("1/0"), syntax_error);
    CHECK_THROWS_AS(parse_signal("2 +"), syntax_error);
    CHECK_THROWS_AS(parse_signal("exp 3"), syntax_error);
    try {
        parse_signal("2*foo(t)");
        CHECK(false);
    } catch (const unknown_function& e) {
        CHECK(e.name == "foo");
        CHECK(e.offset == 2);
    }
}

TEST_CASE("print/parse round trip is structurally stable") {
    const char* corpus[] = {
        "exp(-t)*sin(3*t)",
        "1/2 + t^2",
        "-(t + 1)^3*cos(2*t) - 7/5",
        "t*t*t - i*exp(2*t)",
        "sin(cos(exp(t)))",
        "1 - 2*exp(-t) + exp(-2*t)",
        "-t^2",
    };
    for (const char* s : corpus) {
        ExprPtr once = parse_signal(s);
        ExprPtr twice = parse_signal(print_signal(once));
        CHECK(structurally_equal(once, twice));
    }
}

TEST_CASE("differentiation matches closed forms by evaluation") {
    // d/dt t^2 = 2t
    ExprPtr d1 = differentiate(parse_signal("t^2"));
    ExprPtr want1 = parse_signal("2*t");
    for (int k = 1; k <= 5; ++k) {
        Dyadic t(mpz_class(k), -3);
        ComplexBox a = eval_expr(d1, RealInterval(t), 40);
        ComplexBox b = eval_expr(want1, RealInterval(t), 40);
        CHECK(a.intersects(b));
    }
    // d/dt exp(-t) = -exp(-t)
    ExprPtr d2 = differentiate(parse_signal("exp(-t)"));
    ExprPtr want2 = parse_signal("-exp(-t)");
    // d/dt [exp(-t) sin(3t)] = exp(-t)(3cos(3t) - sin(3t))
    ExprPtr d3 = differentiate(parse_signal("exp(-t)*sin(3*t)"));
    ExprPtr want3 = parse_signal("exp(-t)*(3*cos(3*t) - sin(3*t))");
    for (int k = 1; k <= 5; ++k) {
        Dyadic t(mpz_class(2 * k - 1), -4);
        CHECK(eval_expr(d2, RealInterval(t), 40).intersects(eval_expr(want2, RealInterval(t), 40)));
        CHECK(eval_expr(d3, RealInterval(t), 40).intersects(eval_expr(want3, RealInterval(t), 40)));
    }
}

TEST_CASE("central differences validate eval_enclosure derivatives") {
    const char* signals[] = {"exp(-t)*sin(3*t)", "t^3 - 1/2*t", "cos(2*t) + exp(t)"};
    for (const char* s : signals) {
        Signal u = Signal::from_text(s);
        for (int k = 0; k < 17; ++k) {
            Dyadic t(mpz_class(8 + 3 * k), -6); // 17 interior points in [1/8, 7/8]
            Dyadic h = Dyadic::pow2(-20);
            ComplexBox up = u.eval_enclosure(0, t + h, 44);
            ComplexBox dn = u.eval_enclosure(0, t - h, 44);
            ComplexBox fd = (up - dn).mul_pow2(19); // divide by 2h = 2^-19
            ComplexBox d1 = u.eval_enclosure(1, t, 44);
            ComplexBox diff = fd - d1;
            CHECK(diff.mag_upper() <= Dyadic::pow2(-10));
        }
    }
}

TEST_CASE("to_exp_polynomial canonical forms") {
    auto t2 = to_exp_polynomial(parse_signal("t^2"));
    REQUIRE(t2.has_value());
    REQUIRE(t2->terms().size() == 1);
    CHECK(t2->terms()[0].mu == GaussianRational(0));
    CHECK(t2->terms()[0].p == Poly({GaussianRational(0), GaussianRational(0), GaussianRational(1)}));

    auto sin_t = to_exp_polynomial(parse_signal("sin(t)"));
    REQUIRE(sin_t.has_value());
    REQUIRE(sin_t->terms().size() == 2);
    GaussianRational half_i = GaussianRational::i() * GaussianRational(1, 2);
    CHECK(sin_t->terms()[0].mu == -GaussianRational::i());
    CHECK(sin_t->terms()[0].p == Poly::constant(half_i));
    CHECK(sin_t->terms()[1].mu == GaussianRational::i());
    CHECK(sin_t->terms()[1].p == Poly::constant(-half_i));

    CHECK(!to_exp_polynomial(parse_signal("exp(t^2)")).has_value());
    CHECK(!to_exp_polynomial(parse_signal("exp(t + 1)")).has_value());
    CHECK(to_exp_polynomial(parse_signal("exp(-2*t)*t^3 + cos(5*t)")).has_value());
}

TEST_CASE("canonical form evaluates consistently with the tree") {
    const char* signals[] = {"sin(t)", "exp(-t)*sin(3*t)", "t^2 - cos(2*t)", "1 - 2*exp(-t)"};
    for (const char* s : signals) {
        Signal u = Signal::from_text(s);
        auto ep = u.to_exp_polynomial();
        REQUIRE(ep.has_value());
        for (long bits : {10L, 20L, 30L}) {
            for (int k = 0; k <= 4; ++k) {
                Dyadic t(mpz_class(k), -2);
                ComplexBox direct = u.eval_enclosure(0, t, bits);
                ComplexBox canon = ep->eval_box(t, bits + 8);
                CHECK(direct.intersects(canon));
            }
        }
    }
}

TEST_CASE("sin(t) Euler form re-evaluates to 2^-30 agreement at t=1") {
    Signal u = Signal::from_text("sin(t)");
    auto ep = u.to_exp_polynomial();
    ComplexBox direct = u.eval_enclosure(0, Dyadic(1), 34);
    ComplexBox canon = ep->eval_box(Dyadic(1), 40);
    CHECK(direct.intersects(canon));
    auto gap = direct.re().lo() - canon.re().hi();
    CHECK(gap.abs() <= Dyadic::pow2(-30) + direct.width() + canon.width());
}

TEST_CASE("eval_enclosure respects domain and width contracts") {
    Signal u = Signal::from_text("exp(-t)");
    auto e = oracle::exp_rat(-1, 192);
    ComplexBox at1 = u.eval_enclosure(0, Dyadic(1), 30);
    CHECK(oracle::box_contains_real(at1, e));
    CHECK(at1.width() <= Dyadic::pow2(-30));

    Signal lin = Signal::from_text("t");
    ComplexBox d = lin.eval_enclosure(1, Dyadic(mpz_class(1), -1), 30);
    CHECK(d.contains(GaussianRational(1)));

    Signal s3 = Signal::from_text("sin(3*t)");
    ComplexBox dd = s3.eval_enclosure(2, Dyadic(0), 30);
    CHECK(dd.contains(GaussianRational(0)));

    CHECK_THROWS_AS(u.eval_enclosure(0, Dyadic(2), 20), domain_error);
    CHECK_THROWS_AS(u.eval_enclosure(0, -Dyadic(1), 20), domain_error);
}

TEST_CASE("nesting across bit levels") {
    Signal u = Signal::from_text("exp(-t)*cos(2*t)");
    for (long n : {8L, 16L, 24L}) {
        ComplexBox loose = u.eval_enclosure(0, Dyadic(mpz_class(3), -2), n);
        ComplexBox tight = u.eval_enclosure(0, Dyadic(mpz_class(3), -2), n + 8);
        CHECK(loose.contains(tight));
        CHECK(loose.width() <= Dyadic::pow2(-n));
    }
}

TEST_CASE("oracle signals: contracts, order limits, nesting") {
    // oracle for u(t) = t with derivative metadata up to order 3
    OracleSignal::Approximant f = [](int j, const Dyadic& t, long bits) {
        if (j == 0) return ComplexBox::real_point(t).inflate(Dyadic::pow2(-bits - 1));
        if (j == 1) return ComplexBox::real_point(Dyadic(1)).inflate(Dyadic::pow2(-bits - 1));
        return ComplexBox().inflate(Dyadic::pow2(-bits - 1));
    };
    Signal u = Signal::oracle(OracleSignal(f, 3, {Dyadic(1), Dyadic(1), Dyadic(0), Dyadic(0)}));
    CHECK(u.max_order() == 3);
    ComplexBox v = u.eval_enclosure(1, Dyadic(mpz_class(1), -2), 20);
    CHECK(v.contains(GaussianRational(1)));
    CHECK_THROWS_AS(u.eval_enclosure(4, Dyadic(0), 20), order_unavailable);

    ComplexBox loose = u.eval_enclosure(0, Dyadic(mpz_class(1), -1), 12);
    ComplexBox tight = u.eval_enclosure(0, Dyadic(mpz_class(1), -1), 20);
    CHECK(loose.contains(tight));
}

TEST_CASE("signal shift composes with evaluation") {
    Signal u = Signal::from_text("exp(-t)");
    Dyadic t0(mpz_class(1), -2); // 1/4
    Signal v = u.shifted(t0);
    ComplexBox a = v.eval_enclosure(0, Dyadic(mpz_class(1), -1), 30); // u(3/4)
    ComplexBox b = u.eval_enclosure(0, Dyadic(mpz_class(3), -2), 30);
    CHECK(a.intersects(b));
}
