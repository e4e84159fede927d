#include "odecert/solver.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"
#include "odecert/roots.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>

namespace odecert {

namespace {

constexpr std::uint64_t kNodeCap = 1ull << 22;

Dyadic exp_mag_upper(const Dyadic& x) {
    // upper bound for e^x
    if (x.sign() <= 0) return Dyadic(1);
    return exp_point(x, Dyadic(), 16).re().hi();
}

Dyadic gr_mag_upper(const GaussianRational& z, long bits = 24) {
    mpq_class r = abs(z.re()), i = abs(z.im());
    return Dyadic::from_rational_up(r, bits) + Dyadic::from_rational_up(i, bits);
}

long ceil_log2_count(std::uint64_t n) {
    long b = 0;
    while ((1ull << b) < n) ++b;
    return b;
}

// C(4,l) |base|^l s(4-l) summed over l: Leibniz bound for 4th derivatives of
// kernel*signal products.
Dyadic leibniz4(const Dyadic& base, const std::function<Dyadic(int)>& s) {
    Dyadic total;
    for (int l = 0; l <= 4; ++l) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), 4, static_cast<unsigned long>(l));
        Dyadic p(1);
        for (int x = 0; x < l; ++x) p = p * base;
        Dyadic term = p * s(4 - l);
        Dyadic cd(mpz_class(c), 0);
        total = total + cd * term;
    }
    return total;
}

// ------------------------------------------------------------ box polynomials

using BoxPoly = std::vector<ComplexBox>; // [i] multiplies t^i

BoxPoly bp_from_exact(const Poly& p, long wb) {
    BoxPoly out(static_cast<std::size_t>(p.degree() + 1));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = ComplexBox::from_exact(p.coeff(i), wb);
    return out;
}

BoxPoly bp_add(const BoxPoly& a, const BoxPoly& b) {
    BoxPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i < a.size() && i < b.size()) out[i] = a[i] + b[i];
        else if (i < a.size()) out[i] = a[i];
        else out[i] = b[i];
    }
    return out;
}

BoxPoly bp_scale(const BoxPoly& a, const ComplexBox& c) {
    BoxPoly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
    return out;
}

BoxPoly bp_derivative(const BoxPoly& a) {
    if (a.size() <= 1) return {};
    BoxPoly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        out[i - 1] = a[i].scale(GaussianRational(static_cast<long>(i)), 0);
    return out;
}

BoxPoly bp_antiderivative(const BoxPoly& a, long wb) {
    BoxPoly out(a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i + 1] = a[i].scale(GaussianRational(1, static_cast<long>(i) + 1), wb);
    return out;
}

ComplexBox bp_eval(const BoxPoly& a, const Dyadic& t) {
    ComplexBox acc;
    ComplexBox tb = ComplexBox::real_point(t);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * tb + a[i];
    return acc;
}

ComplexBox bp_at_zero(const BoxPoly& a) { return a.empty() ? ComplexBox() : a[0]; }

Dyadic bp_sup01(const BoxPoly& a) {
    Dyadic s;
    for (const auto& c : a) s = s + c.mag_upper();
    return s;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::uint64_t ns() const {
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                              std::chrono::steady_clock::now() - start_)
                                              .count());
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// retry with growing internal precision until the enclosure meets 2^-bits
ComplexBox refine_scalar(const std::function<ComplexBox(long)>& compute, long bits) {
    long extra = 6;
    ComplexBox r;
    for (int k = 0; k < 8; ++k, extra *= 2) {
        r = compute(bits + extra);
        if (r.width() <= Dyadic::pow2(-bits)) break;
    }
    return r;
}

std::vector<ComplexBox> refine_vector(const std::function<std::vector<ComplexBox>(long)>& compute,
                                      long bits) {
    long extra = 6;
    std::vector<ComplexBox> r;
    for (int k = 0; k < 8; ++k, extra *= 2) {
        r = compute(bits + extra);
        Dyadic wmax;
        for (const auto& v : r) wmax = std::max(wmax, v.width());
        if (wmax <= Dyadic::pow2(-bits)) break;
    }
    return r;
}

std::vector<ComplexBox> nested_vector_eval(const std::function<std::vector<ComplexBox>(long)>& raw,
                                           long bits) {
    if (bits < 1) bits = 1;
    long b0 = ((bits - 1) % 8) + 1;
    std::vector<ComplexBox> acc = raw(b0);
    for (long b = b0 + 8; b <= bits; b += 8) {
        std::vector<ComplexBox> r = raw(b);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            auto meet = acc[i].intersect(r[i]);
            if (!meet) throw internal_error("precision ladder enclosures do not overlap");
            acc[i] = *meet;
        }
    }
    return acc;
}

} // namespace

// ----------------------------------------------------------------- quadrature

namespace {

struct Rule {
    bool simpson;
    std::uint64_t panels; // power of two
};

Rule choose_rule(const std::optional<Dyadic>& sup_d1, const std::optional<Dyadic>& sup_d4,
                 const mpq_class& t, long bits) {
    mpq_class budget = Dyadic::pow2(-(bits + 1)).to_rational();
    if (sup_d4) {
        mpq_class m4 = sup_d4->round_up(24).to_rational();
        std::uint64_t panels = 1;
        while (2 * panels + 1 <= kNodeCap) {
            mpq_class h = t / mpq_class(2 * panels);
            mpq_class err = t * h * h * h * h * m4 / 180;
            if (err <= budget) return {true, panels};
            panels *= 2;
        }
        throw quadrature_budget_exceeded("Simpson node budget exceeded");
    }
    if (sup_d1) {
        mpq_class m1 = sup_d1->round_up(24).to_rational();
        std::uint64_t n = 1;
        while (n <= kNodeCap) {
            mpq_class h = t / mpq_class(n);
            mpq_class err = t * h * m1 / 2;
            if (err <= budget) return {false, n};
            n *= 2;
        }
        throw quadrature_budget_exceeded("rectangle-rule node budget exceeded");
    }
    throw missing_smoothness_bound();
}

long log2_exact(std::uint64_t pow2) {
    long b = 0;
    while ((1ull << b) < pow2) ++b;
    return b;
}

} // namespace

ComplexBox rigorous_integral(const Integrand& f, const Dyadic& t_upper, long bits) {
    if (t_upper.is_zero()) return ComplexBox();
    mpq_class t = t_upper.to_rational();
    Rule rule = choose_rule(f.sup_d1, f.sup_d4, t, bits);
    long nb = bits + 6;

    ComplexBox acc;
    if (rule.simpson) {
        Dyadic hp = t_upper.mul_pow2(-log2_exact(rule.panels)); // exact dyadic panel width
        mpq_class weight = hp.to_rational() / 6;
        ComplexBox left = f.eval(Dyadic(0), nb);
        work::count_node();
        for (std::uint64_t p = 0; p < rule.panels; ++p) {
            Dyadic a = hp * Dyadic(static_cast<long>(p));
            Dyadic mid = a + hp.mul_pow2(-1);
            Dyadic b = a + hp;
            ComplexBox fm = f.eval(mid, nb);
            ComplexBox fb = f.eval(b, nb);
            work::count_node(2);
            ComplexBox panel = left + fm.scale(GaussianRational(4), nb) + fb;
            acc = acc + panel.scale(GaussianRational(weight), nb);
            left = fb;
        }
        mpq_class h = t / mpq_class(2 * rule.panels);
        mpq_class err = t * h * h * h * h * f.sup_d4->round_up(24).to_rational() / 180;
        return acc.inflate(Dyadic::from_rational_up(err, 24));
    }

    Dyadic h = t_upper.mul_pow2(-log2_exact(rule.panels));
    mpq_class hq = h.to_rational();
    for (std::uint64_t k = 0; k < rule.panels; ++k) {
        Dyadic a = h * Dyadic(static_cast<long>(k));
        ComplexBox fa = f.eval(a, nb);
        work::count_node();
        acc = acc + fa.scale(GaussianRational(hq), nb);
    }
    mpq_class err = t * (t / mpq_class(rule.panels)) * f.sup_d1->round_up(24).to_rational() / 2;
    return acc.inflate(Dyadic::from_rational_up(err, 24));
}

std::vector<ComplexBox> rigorous_integral(const VectorIntegrand& f, const Dyadic& t_upper,
                                          long bits) {
    std::vector<ComplexBox> zero(static_cast<std::size_t>(f.dim));
    if (t_upper.is_zero()) return zero;
    mpq_class t = t_upper.to_rational();
    Rule rule = choose_rule(f.sup_d1, f.sup_d4, t, bits);
    long nb = bits + 6;

    auto vscale = [](const std::vector<ComplexBox>& v, const GaussianRational& c, long b) {
        std::vector<ComplexBox> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].scale(c, b);
        return r;
    };
    auto vadd = [](const std::vector<ComplexBox>& a, const std::vector<ComplexBox>& b) {
        std::vector<ComplexBox> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    };

    std::vector<ComplexBox> acc = zero;
    if (rule.simpson) {
        Dyadic hp = t_upper.mul_pow2(-log2_exact(rule.panels));
        mpq_class weight = hp.to_rational() / 6;
        std::vector<ComplexBox> left = f.eval(Dyadic(0), nb);
        work::count_node();
        for (std::uint64_t p = 0; p < rule.panels; ++p) {
            Dyadic a = hp * Dyadic(static_cast<long>(p));
            Dyadic mid = a + hp.mul_pow2(-1);
            Dyadic b = a + hp;
            auto fm = f.eval(mid, nb);
            auto fb = f.eval(b, nb);
            work::count_node(2);
            auto panel = vadd(vadd(left, vscale(fm, GaussianRational(4), nb)), fb);
            acc = vadd(acc, vscale(panel, GaussianRational(weight), nb));
            left = fb;
        }
        mpq_class h = t / mpq_class(2 * rule.panels);
        mpq_class err = t * h * h * h * h * f.sup_d4->round_up(24).to_rational() / 180;
        Dyadic r = Dyadic::from_rational_up(err, 24);
        for (auto& v : acc) v = v.inflate(r);
        return acc;
    }

    Dyadic h = t_upper.mul_pow2(-log2_exact(rule.panels));
    mpq_class hq = h.to_rational();
    for (std::uint64_t k = 0; k < rule.panels; ++k) {
        Dyadic a = h * Dyadic(static_cast<long>(k));
        auto fa = f.eval(a, nb);
        work::count_node();
        acc = vadd(acc, vscale(fa, GaussianRational(hq), nb));
    }
    mpq_class err = t * (t / mpq_class(rule.panels)) * f.sup_d1->round_up(24).to_rational() / 2;
    Dyadic r = Dyadic::from_rational_up(err, 24);
    for (auto& v : acc) v = v.inflate(r);
    return acc;
}

// ------------------------------------------------------- first-order closed form

ExpPolynomial first_order_closed_form(const GaussianRational& a0,
                                      const std::vector<GaussianRational>& b,
                                      const GaussianRational& y0, const ExpPolynomial& u) {
    std::vector<EPTerm> acc;
    if (!y0.is_zero()) acc.push_back({-a0, Poly::constant(y0)});

    for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j].is_zero()) continue;
        ExpPolynomial v = u.derivative(static_cast<int>(j)).scale(b[j]);
        for (const auto& term : v.terms()) {
            GaussianRational nu = term.mu + a0;
            if (nu.is_zero()) {
                // resonance: plain polynomial integral, degree bump
                acc.push_back({-a0, term.p.antiderivative()});
            } else {
                // antiderivative of p e^{nu tau}: e^{nu tau} g, g = sum (-1)^k p^(k)/nu^{k+1}
                Poly g;
                Poly d = term.p;
                GaussianRational nu_inv = nu.inverse();
                GaussianRational factor = nu_inv;
                int sign = 1;
                while (!d.is_zero()) {
                    Poly piece = d.scale(sign > 0 ? factor : -factor);
                    g = g + piece;
                    d = d.derivative();
                    factor = factor * nu_inv;
                    sign = -sign;
                }
                acc.push_back({term.mu, g});
                acc.push_back({-a0, Poly::constant(-g.eval(GaussianRational(0)))});
            }
        }
    }
    return ExpPolynomial(std::move(acc));
}

// ----------------------------------------------------------- solution functions

namespace {

class SolFn {
public:
    virtual ~SolFn() = default;
    virtual ComplexBox eval(int j, const Dyadic& t, long wb) const = 0;
    virtual Dyadic sup_bound(int j) const = 0;
    virtual int max_order() const = 0;
};
using SolFnPtr = std::shared_ptr<const SolFn>;

// g(t) = sum_j c_j u^(j) as a SolFn (the right-hand side of the bottom level).
class SignalRhs final : public SolFn {
public:
    SignalRhs(std::vector<GaussianRational> c, Signal u) : c_(std::move(c)), u_(std::move(u)) {}

    ComplexBox eval(int j, const Dyadic& t, long wb) const override {
        ComplexBox acc;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            acc = acc + u_.eval_enclosure(static_cast<int>(k) + j, t, wb).scale(c_[k], wb);
        }
        return acc;
    }
    Dyadic sup_bound(int j) const override {
        Dyadic s;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            s = s + gr_mag_upper(c_[k]) * u_.sup_bound(static_cast<int>(k) + j);
        }
        return s;
    }
    int max_order() const override {
        int mo = u_.max_order();
        int deg = static_cast<int>(c_.size()) - 1;
        return mo == std::numeric_limits<int>::max() ? mo : mo - deg;
    }

private:
    std::vector<GaussianRational> c_;
    Signal u_;
};

// ------------------------------------------------------------ cascade algebra

// Exponent in the cascade exp-polynomials: an exactly-known rational or an
// entry of the root table. Distinct table entries hold distinct roots, and
// rational coincidences (resonance with signal exponents) are marked up
// front, so equality is decidable.
struct Expo {
    std::optional<GaussianRational> exact;
    int root = -1;
};

struct RootTable {
    std::vector<ComplexBox> boxes;
    std::vector<std::optional<GaussianRational>> ids;

    ComplexBox box_of(const Expo& e, long wb) const {
        if (e.exact) return ComplexBox::from_exact(*e.exact, wb);
        return boxes[static_cast<std::size_t>(e.root)];
    }
    bool equal(const Expo& a, const Expo& b) const {
        if (a.root >= 0 && b.root >= 0) return a.root == b.root;
        const std::optional<GaussianRational>& va =
            a.root >= 0 ? ids[static_cast<std::size_t>(a.root)] : a.exact;
        const std::optional<GaussianRational>& vb =
            b.root >= 0 ? ids[static_cast<std::size_t>(b.root)] : b.exact;
        if (va && vb) return *va == *vb;
        return false; // unmarked root vs rational: known distinct
    }
};

struct CTerm {
    Expo e;
    BoxPoly p;
};

struct CascadeEP {
    std::vector<CTerm> terms;
};

CascadeEP cep_add_term(CascadeEP a, const RootTable& rt, const Expo& e, const BoxPoly& p) {
    if (p.empty()) return a;
    for (auto& t : a.terms)
        if (rt.equal(t.e, e)) {
            t.p = bp_add(t.p, p);
            return a;
        }
    a.terms.push_back({e, p});
    return a;
}

CascadeEP cep_from_ep(const ExpPolynomial& ep, long wb) {
    CascadeEP out;
    for (const auto& t : ep.terms()) {
        Expo e;
        e.exact = t.mu;
        out.terms.push_back({e, bp_from_exact(t.p, wb)});
    }
    return out;
}

CascadeEP cep_derivative(const CascadeEP& f, const RootTable& rt, long wb) {
    CascadeEP out;
    for (const auto& t : f.terms) {
        BoxPoly dp = bp_add(bp_derivative(t.p), bp_scale(t.p, rt.box_of(t.e, wb)));
        out = cep_add_term(std::move(out), rt, t.e, dp);
    }
    return out;
}

ComplexBox cep_eval(const CascadeEP& f, const RootTable& rt, const Dyadic& t, long wb) {
    ComplexBox acc;
    for (const auto& term : f.terms) {
        ComplexBox mu_t = rt.box_of(term.e, wb) * ComplexBox::real_point(t);
        acc = acc + bp_eval(term.p, t) * exp_box_raw(mu_t, wb);
    }
    return acc;
}

Dyadic cep_sup01(const CascadeEP& f, const RootTable& rt, long wb) {
    Dyadic s;
    for (const auto& term : f.terms)
        s = s + bp_sup01(term.p) * exp_mag_upper(rt.box_of(term.e, wb).re().hi());
    return s;
}

// Exact level solve in the cascade algebra: y' - sigma y = rhs, y(0) = iv.
CascadeEP cep_solve_level(const Expo& sigma, const ComplexBox& iv, const CascadeEP& rhs,
                          const RootTable& rt, long wb) {
    CascadeEP out;
    BoxPoly sigma_poly = {iv};
    for (const auto& term : rhs.terms) {
        if (rt.equal(term.e, sigma)) {
            // resonance: e^{sigma t} * Antiderivative(q)(t), degree bump
            sigma_poly = bp_add(sigma_poly, bp_antiderivative(term.p, wb));
        } else {
            ComplexBox nu = rt.box_of(term.e, wb) - rt.box_of(sigma, wb);
            ComplexBox nu_inv = ComplexBox::real_point(Dyadic(1)).div(nu, wb); // throws if 0 in nu
            BoxPoly g;
            BoxPoly d = term.p;
            ComplexBox factor = nu_inv;
            int sign = 1;
            while (!d.empty()) {
                g = bp_add(g, bp_scale(d, sign > 0 ? factor : -factor));
                d = bp_derivative(d);
                factor = factor * nu_inv;
                sign = -sign;
            }
            out = cep_add_term(std::move(out), rt, term.e, g);
            sigma_poly = bp_add(sigma_poly, BoxPoly{-bp_at_zero(g)});
        }
    }
    out = cep_add_term(std::move(out), rt, sigma, sigma_poly);
    return out;
}

class CascadeEPFn final : public SolFn {
public:
    CascadeEPFn(CascadeEP f, std::shared_ptr<const RootTable> rt, long wb)
        : f_(std::move(f)), rt_(std::move(rt)), wb_(wb) {}

    ComplexBox eval(int j, const Dyadic& t, long wb) const override {
        CascadeEP cur = f_;
        for (int k = 0; k < j; ++k) cur = cep_derivative(cur, *rt_, wb_);
        return cep_eval(cur, *rt_, t, std::max(wb, wb_));
    }
    Dyadic sup_bound(int j) const override {
        CascadeEP cur = f_;
        for (int k = 0; k < j; ++k) cur = cep_derivative(cur, *rt_, wb_);
        return cep_sup01(cur, *rt_, wb_);
    }
    int max_order() const override { return std::numeric_limits<int>::max(); }

    const CascadeEP& data() const { return f_; }

private:
    CascadeEP f_;
    std::shared_ptr<const RootTable> rt_;
    long wb_;
};

// Quadrature-backed level solution: y(t) = e^{sigma t} iv +
// int_0^t e^{sigma (t-tau)} rhs(tau) dtau; derivatives via y' = sigma y + rhs.
class QuadLevelFn final : public SolFn {
public:
    QuadLevelFn(ComplexBox sigma, ComplexBox iv, SolFnPtr rhs)
        : sigma_(std::move(sigma)), iv_(std::move(iv)), rhs_(std::move(rhs)) {}

    ComplexBox eval(int j, const Dyadic& t, long wb) const override {
        if (j == 0) return eval_value(t, wb);
        return sigma_ * eval(j - 1, t, wb) + rhs_->eval(j - 1, t, wb);
    }

    Dyadic sup_bound(int j) const override {
        if (j == 0)
            return exp_mag_upper(sigma_.re().hi()) * (iv_.mag_upper() + rhs_->sup_bound(0));
        return sigma_.mag_upper() * sup_bound(j - 1) + rhs_->sup_bound(j - 1);
    }
    int max_order() const override {
        int mo = rhs_->max_order();
        return mo == std::numeric_limits<int>::max() ? mo : mo + 1;
    }

private:
    ComplexBox eval_value(const Dyadic& t, long wb) const {
        ComplexBox et = exp_box_raw(sigma_ * ComplexBox::real_point(t), wb);
        Integrand f;
        ComplexBox sig = sigma_;
        SolFnPtr rhs = rhs_;
        f.eval = [sig, rhs, t](const Dyadic& tau, long nb) {
            ComplexBox kernel = exp_box_raw(sig * ComplexBox::real_point(t - tau), nb);
            return kernel * rhs->eval(0, tau, nb);
        };
        Dyadic e_sig = exp_mag_upper(sigma_.re().hi());
        Dyadic mag = sigma_.mag_upper();
        if (rhs_->max_order() >= 1)
            f.sup_d1 = e_sig * (mag * rhs_->sup_bound(0) + rhs_->sup_bound(1));
        if (rhs_->max_order() >= 4)
            f.sup_d4 = e_sig * leibniz4(mag, [&](int k) { return rhs_->sup_bound(k); });
        return et * iv_ + rigorous_integral(f, t, wb);
    }

    ComplexBox sigma_;
    ComplexBox iv_;
    SolFnPtr rhs_;
};

} // namespace

// --------------------------------------------------------------- entry points

namespace {

struct ScalarNormalized {
    GaussianRational a0;
    std::vector<GaussianRational> b;
};

ScalarNormalized normalize_first_order(const LinearODE& ode) {
    if (ode.m() != 1) throw validation_error("solve_first_order requires m = 1");
    GaussianRational inv = ode.a[1].inverse();
    ScalarNormalized out;
    out.a0 = ode.a[0] * inv;
    out.b.reserve(ode.b.size());
    for (const auto& c : ode.b) out.b.push_back(c * inv);
    return out;
}

void check_query(const SolutionQuery& q) {
    if (q.bits < 1) throw validation_error("bits must be >= 1");
    if (q.t.sign() < 0 || q.t > Dyadic(1)) throw domain_error("query time outside [0,1]");
}

bool problem_is_real(const LinearODE& ode, const Signal& u) {
    bool real = u.is_known_real();
    for (const auto& c : ode.a) real = real && c.is_real();
    for (const auto& c : ode.b) real = real && c.is_real();
    for (const auto& c : ode.y0) real = real && c.is_real();
    return real;
}

void check_real_enclosure(bool real, const ComplexBox& y) {
    if (real && !y.im().contains_zero())
        throw internal_error("real problem produced an enclosure excluding the real axis");
}

ComplexBox eval_ep_refined(const ExpPolynomial& y, const Dyadic& t, long bits) {
    long w = bits + 8;
    ComplexBox r;
    for (int round = 0; round < 10; ++round, w *= 2) {
        r = y.eval_box(t, w);
        if (r.width() <= Dyadic::pow2(-bits)) break;
    }
    return r;
}

} // namespace

SolutionResult solve_first_order(const LinearODE& ode, const Signal& u, const SolutionQuery& q,
                                 const SolveOptions& opts) {
    ode.validate();
    check_query(q);
    if (u.max_order() < ode.n())
        throw derivative_order_unavailable("signal provides fewer than n derivatives");
    ScalarNormalized nrm = normalize_first_order(ode);

    SolutionResult res;
    Stopwatch clock;
    work::MeterScope meter(res.work);

    auto u_ep = opts.backend == Backend::Quadrature ? std::nullopt : u.to_exp_polynomial();
    if (opts.backend == Backend::ClosedForm && !u_ep)
        throw validation_error("closed-form backend requires an exp-polynomial signal");

    ComplexBox v;
    if (u_ep) {
        res.backend = "closed-form";
        ExpPolynomial y = first_order_closed_form(nrm.a0, nrm.b, ode.y0[0], *u_ep);
        auto raw = [&](long b) { return eval_ep_refined(y, q.t, b); };
        v = opts.nested ? nested_box_eval(raw, q.bits) : raw(q.bits);
    } else {
        res.backend = "quadrature";
        Dyadic a0_up = gr_mag_upper(nrm.a0);
        mpq_class re_neg = -nrm.a0.re();
        Dyadic e_up = exp_mag_upper(sgn(re_neg) > 0 ? Dyadic::from_rational_up(re_neg, 16) : Dyadic());
        long split = ceil_log2_count(static_cast<std::uint64_t>(nrm.b.size()) + 1);

        auto raw = [&](long b) {
            return refine_scalar(
                [&](long ib) {
                    long hb = ib + 1 + split;
                    ComplexBox acc =
                        exp_box_raw(ComplexBox::from_exact(-nrm.a0, hb + 8) *
                                        ComplexBox::real_point(q.t),
                                    hb)
                            .scale(ode.y0[0], hb + 8);
                    for (std::size_t j = 0; j < nrm.b.size(); ++j) {
                        if (nrm.b[j].is_zero()) continue;
                        Integrand f;
                        GaussianRational bj = nrm.b[j];
                        GaussianRational a0 = nrm.a0;
                        Dyadic t = q.t;
                        int jj = static_cast<int>(j);
                        const Signal& sig = u;
                        f.eval = [bj, a0, t, jj, &sig](const Dyadic& tau, long nb) {
                            ComplexBox kernel =
                                exp_box_raw(ComplexBox::from_exact(-a0, nb + 8) *
                                                ComplexBox::real_point(t - tau),
                                            nb);
                            return (kernel * sig.eval_enclosure(jj, tau, nb)).scale(bj, nb + 8);
                        };
                        Dyadic bj_up = gr_mag_upper(bj);
                        if (u.max_order() >= jj + 1)
                            f.sup_d1 =
                                bj_up * e_up * (a0_up * u.sup_bound(jj) + u.sup_bound(jj + 1));
                        if (u.max_order() >= jj + 4)
                            f.sup_d4 = bj_up * e_up *
                                       leibniz4(a0_up, [&](int k) { return u.sup_bound(jj + k); });
                        acc = acc + rigorous_integral(f, q.t, hb);
                    }
                    return acc;
                },
                b);
        };
        v = opts.nested ? nested_box_eval(raw, q.bits) : raw(q.bits);
    }
    check_real_enclosure(problem_is_real(ode, u), v);
    res.value = {v};
    res.work.elapsed_ns = clock.ns();
    return res;
}

namespace {

std::vector<std::size_t> default_flat_order(const RootEnclosures& roots) {
    std::vector<std::size_t> flat;
    for (std::size_t i = 0; i < roots.items().size(); ++i)
        for (int k = 0; k < roots.items()[i].multiplicity; ++k) flat.push_back(i);
    return flat;
}

std::vector<std::size_t> apply_order(std::vector<std::size_t> flat,
                                     const std::optional<std::vector<std::size_t>>& order) {
    if (!order) return flat;
    if (order->size() != flat.size())
        throw validation_error("root_order permutation has wrong length");
    std::vector<std::size_t> perm;
    perm.reserve(flat.size());
    for (std::size_t idx : *order) perm.push_back(flat.at(idx));
    return perm;
}

} // namespace

SolutionResult solve_cascade(const LinearODE& ode, const Signal& u, const SolutionQuery& q,
                             const SolveOptions& opts) {
    ode.validate();
    check_query(q);
    if (ode.m() == 1 && !opts.root_order) return solve_first_order(ode, u, q, opts);
    if (u.max_order() < ode.n())
        throw derivative_order_unavailable("signal provides fewer than n derivatives");

    LinearODE nrm = ode.normalize();
    Poly py = char_polys(nrm).first;

    SolutionResult res;
    Stopwatch clock;
    work::MeterScope meter(res.work);

    auto u_ep = opts.backend == Backend::Quadrature ? std::nullopt : u.to_exp_polynomial();
    if (opts.backend == Backend::ClosedForm && !u_ep)
        throw validation_error("closed-form backend requires an exp-polynomial signal");
    res.backend = u_ep ? "closed-form" : "quadrature";

    const int m = nrm.m();

    auto raw = [&](long b) -> ComplexBox {
        // quadrature cost is exponential in the working precision: start tight
        long wb = u_ep ? b + 24 : b + 10;
        for (int round = 0;; ++round) {
            try {
                RootEnclosures roots = certified_roots(py, wb);
                auto rt = std::make_shared<RootTable>();
                for (const auto& item : roots.items()) {
                    rt->boxes.push_back(item.box);
                    rt->ids.push_back(std::nullopt);
                }
                if (u_ep)
                    for (const auto& term : u_ep->terms())
                        if (py.eval(term.mu).is_zero())
                            for (std::size_t i = 0; i < rt->boxes.size(); ++i)
                                if (rt->boxes[i].contains(term.mu)) rt->ids[i] = term.mu;

                std::vector<std::size_t> flat = apply_order(default_flat_order(roots), opts.root_order);

                // iv chains: y~ = y' - sigma y  =>  iv~[i] = iv[i+1] - sigma iv[i]
                std::vector<std::vector<ComplexBox>> ivs(static_cast<std::size_t>(m));
                std::vector<ComplexBox> cur;
                for (const auto& vv : nrm.y0) cur.push_back(ComplexBox::from_exact(vv, wb));
                ivs[static_cast<std::size_t>(m - 1)] = cur;
                for (int level = m - 1; level > 0; --level) {
                    const ComplexBox sig =
                        rt->boxes[flat[static_cast<std::size_t>(m - 1 - level)]];
                    std::vector<ComplexBox> next;
                    const auto& prev = ivs[static_cast<std::size_t>(level)];
                    for (std::size_t i = 0; i + 1 < prev.size(); ++i)
                        next.push_back(prev[i + 1] - sig * prev[i]);
                    ivs[static_cast<std::size_t>(level - 1)] = next;
                }

                std::size_t bottom_root = flat[static_cast<std::size_t>(m - 1)];
                SolFnPtr level_fn;
                std::shared_ptr<CascadeEPFn> level_ep;
                if (u_ep) {
                    ExpPolynomial rhs_ep;
                    for (std::size_t j = 0; j < nrm.b.size(); ++j)
                        rhs_ep = rhs_ep + u_ep->derivative(static_cast<int>(j)).scale(nrm.b[j]);
                    Expo sig;
                    sig.root = static_cast<int>(bottom_root);
                    CascadeEP sol =
                        cep_solve_level(sig, ivs[0][0], cep_from_ep(rhs_ep, wb), *rt, wb);
                    level_ep = std::make_shared<CascadeEPFn>(std::move(sol), rt, wb);
                    level_fn = level_ep;
                } else {
                    SolFnPtr rhs = std::make_shared<SignalRhs>(nrm.b, u);
                    level_fn =
                        std::make_shared<QuadLevelFn>(rt->boxes[bottom_root], ivs[0][0], rhs);
                }

                for (int level = 1; level < m; ++level) {
                    std::size_t root_idx = flat[static_cast<std::size_t>(m - 1 - level)];
                    ComplexBox lev_iv = ivs[static_cast<std::size_t>(level)][0];
                    if (level_ep) {
                        Expo sig;
                        sig.root = static_cast<int>(root_idx);
                        CascadeEP sol = cep_solve_level(sig, lev_iv, level_ep->data(), *rt, wb);
                        level_ep = std::make_shared<CascadeEPFn>(std::move(sol), rt, wb);
                        level_fn = level_ep;
                    } else {
                        level_fn =
                            std::make_shared<QuadLevelFn>(rt->boxes[root_idx], lev_iv, level_fn);
                    }
                }

                ComplexBox v = level_fn->eval(0, q.t, wb);
                if (v.width() <= Dyadic::pow2(-b) || round >= 6) return v;
            } catch (const divisor_contains_zero&) {
                if (round >= 6) throw;
            }
            wb *= 2;
        }
    };

    ComplexBox v = opts.nested ? nested_box_eval(raw, q.bits) : raw(q.bits);
    check_real_enclosure(problem_is_real(ode, u), v);
    res.value = {v};
    res.work.elapsed_ns = clock.ns();
    return res;
}

std::vector<CascadeStep> deflation_chain(const LinearODE& ode, long bits,
                                         const std::optional<std::vector<std::size_t>>& order) {
    LinearODE nrm = ode.normalize();
    Poly py = char_polys(nrm).first;
    std::vector<CascadeStep> out;
    if (py.degree() < 1) return out;
    RootEnclosures roots = certified_roots(py, bits);
    std::vector<std::size_t> flat = apply_order(default_flat_order(roots), order);

    long wb = bits + 16;
    // first step from the exact polynomial, later steps on box coefficients
    {
        ComplexBox sigma = roots.items()[flat[0]].box;
        BoxDeflation first = reduce_at_root(py, sigma, wb);
        out.push_back({sigma, first.reduced});
    }
    for (std::size_t k = 1; k < flat.size() && out.back().reduced_coeffs.size() > 1; ++k) {
        const BoxPoly& cur = out.back().reduced_coeffs;
        ComplexBox sigma = roots.items()[flat[k]].box;
        std::size_t deg = cur.size() - 1;
        BoxPoly red(deg);
        red[deg - 1] = cur[deg];
        for (std::size_t i = deg - 1; i-- > 0;) red[i] = cur[i + 1] + sigma * red[i + 1];
        out.push_back({sigma, red});
    }
    return out;
}

// ------------------------------------------------------------------- systems

namespace {

struct SystemClosedForm {
    QMatrix a_aug; // [[-M, C], [0, J]]
    std::vector<GaussianRational> x0;
};

// Variation-of-constants via one block matrix exponential: the forcing basis
// functions t^k e^{mu t} satisfy their own linear system z' = J z, so
// x = (y, z) evolves under the augmented matrix and resonance needs no cases.
SystemClosedForm build_augmented(const QMatrix& m, const std::vector<QMatrix>& w,
                                 const std::vector<ExpPolynomial>& u,
                                 const std::vector<GaussianRational>& y0) {
    const int d = m.rows();
    std::vector<ExpPolynomial> g(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < w.size(); ++j)
        for (int i = 0; i < d; ++i) {
            ExpPolynomial gi;
            for (int c = 0; c < d; ++c) {
                GaussianRational coeff = w[j].at(i, c);
                if (coeff.is_zero()) continue;
                gi = gi +
                     u[static_cast<std::size_t>(c)].derivative(static_cast<int>(j)).scale(coeff);
            }
            g[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] + gi;
        }

    struct MuLess {
        bool operator()(const GaussianRational& a, const GaussianRational& b) const {
            return GaussianRational::cmp(a, b) < 0;
        }
    };
    std::map<GaussianRational, int, MuLess> maxdeg;
    for (const auto& gi : g)
        for (const auto& term : gi.terms()) {
            auto [it, fresh] = maxdeg.emplace(term.mu, term.p.degree());
            if (!fresh) it->second = std::max(it->second, term.p.degree());
        }

    int z = 0;
    std::map<GaussianRational, int, MuLess> offset;
    for (const auto& [mu, deg] : maxdeg) {
        offset[mu] = z;
        z += deg + 1;
    }

    SystemClosedForm out;
    out.a_aug = QMatrix(d + z, d + z);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.a_aug.at(i, j) = -m.at(i, j);
    for (const auto& [mu, deg] : maxdeg) {
        int base = d + offset[mu];
        for (int i = 0; i < d; ++i)
            for (const auto& term : g[static_cast<std::size_t>(i)].terms())
                if (term.mu == mu)
                    for (int k = 0; k <= term.p.degree(); ++k)
                        out.a_aug.at(i, base + k) = term.p.coeff(static_cast<std::size_t>(k));
        for (int k = 0; k <= deg; ++k) {
            out.a_aug.at(base + k, base + k) = mu;
            if (k > 0) out.a_aug.at(base + k, base + k - 1) = GaussianRational(k);
        }
    }
    out.x0 = y0;
    out.x0.resize(static_cast<std::size_t>(d + z), GaussianRational(0));
    for (const auto& [mu, deg] : maxdeg)
        out.x0[static_cast<std::size_t>(d + offset[mu])] = GaussianRational(1);
    return out;
}

} // namespace

SolutionResult solve_system(const ODESystem& sys, const std::vector<Signal>& u,
                            const SolutionQuery& q, const SolveOptions& opts) {
    sys.validate();
    check_query(q);
    if (sys.m() != 1) throw unsupported_order("solve_system requires order (1,n)");
    if (static_cast<int>(u.size()) != sys.d)
        throw dimension_mismatch("need one signal per system component");
    auto inv = mat_inverse_exact(sys.A[1]);
    if (!inv) throw singular_matrix();
    QMatrix m = *inv * sys.A[0];
    std::vector<QMatrix> w;
    for (const auto& bj : sys.B) w.push_back(*inv * bj);
    for (const auto& sig : u)
        if (sig.max_order() < sys.n())
            throw derivative_order_unavailable("signal provides fewer than n derivatives");

    SolutionResult res;
    Stopwatch clock;
    work::MeterScope meter(res.work);

    std::vector<ExpPolynomial> u_ep;
    bool all_ep = opts.backend != Backend::Quadrature;
    if (all_ep)
        for (const auto& sig : u) {
            auto ep = sig.to_exp_polynomial();
            if (!ep) {
                all_ep = false;
                u_ep.clear();
                break;
            }
            u_ep.push_back(*ep);
        }
    if (opts.backend == Backend::ClosedForm && !all_ep)
        throw validation_error("closed-form backend requires exp-polynomial signals");

    const int d = sys.d;
    if (all_ep) {
        res.backend = "closed-form";
        SystemClosedForm cf = build_augmented(m, w, u_ep, sys.y0);
        QMatrix at = cf.a_aug.scale(GaussianRational(q.t.to_rational()));
        auto raw = [&](long b) {
            return refine_vector(
                [&](long ib) {
                    MatrixBox e = mat_exp_raw(MatrixBox::from_exact(at, ib + 16), ib);
                    std::vector<ComplexBox> x0;
                    for (const auto& vv : cf.x0) x0.push_back(ComplexBox::from_exact(vv, ib + 16));
                    std::vector<ComplexBox> full = e.apply(x0);
                    full.resize(static_cast<std::size_t>(d));
                    return full;
                },
                b);
        };
        res.value = opts.nested ? nested_vector_eval(raw, q.bits) : raw(q.bits);
    } else {
        res.backend = "quadrature";
        Dyadic norm_m = MatrixBox::from_exact(m, 24).rowsum_norm_upper();
        Dyadic e_m = exp_mag_upper(norm_m);
        int min_order = std::numeric_limits<int>::max();
        for (const auto& sig : u) min_order = std::min(min_order, sig.max_order());
        auto forcing_sup = [&](int extra) {
            Dyadic s;
            for (std::size_t j = 0; j < w.size(); ++j) {
                Dyadic wn = MatrixBox::from_exact(w[j], 24).rowsum_norm_upper();
                Dyadic us;
                for (int c = 0; c < d; ++c)
                    us = std::max(us, u[static_cast<std::size_t>(c)].sup_bound(
                                        static_cast<int>(j) + extra));
                s = s + wn * us;
            }
            return s;
        };

        auto raw = [&](long b) {
            return refine_vector(
                [&](long ib) {
                    MatrixBox eh = mat_exp_raw(
                        MatrixBox::from_exact(m.scale(GaussianRational(-q.t.to_rational())), ib + 16),
                        ib + 1);
                    std::vector<ComplexBox> y0b;
                    for (const auto& vv : sys.y0) y0b.push_back(ComplexBox::from_exact(vv, ib + 16));
                    std::vector<ComplexBox> acc = eh.apply(y0b);

                    VectorIntegrand f;
                    f.dim = d;
                    Dyadic t = q.t;
                    f.eval = [&, t](const Dyadic& tau, long nb) {
                        QMatrix mk = m.scale(GaussianRational(-(t - tau).to_rational()));
                        MatrixBox kernel = mat_exp_raw(MatrixBox::from_exact(mk, nb + 16), nb);
                        std::vector<ComplexBox> s(static_cast<std::size_t>(d));
                        for (std::size_t j = 0; j < w.size(); ++j) {
                            std::vector<ComplexBox> uv(static_cast<std::size_t>(d));
                            for (int c = 0; c < d; ++c)
                                uv[static_cast<std::size_t>(c)] =
                                    u[static_cast<std::size_t>(c)].eval_enclosure(
                                        static_cast<int>(j), tau, nb);
                            MatrixBox wjb = MatrixBox::from_exact(w[j], nb + 16);
                            auto contrib = wjb.apply(uv);
                            for (int i = 0; i < d; ++i)
                                s[static_cast<std::size_t>(i)] =
                                    s[static_cast<std::size_t>(i)] +
                                    contrib[static_cast<std::size_t>(i)];
                        }
                        return kernel.apply(s);
                    };
                    if (min_order >= sys.n() + 1)
                        f.sup_d1 = e_m * (norm_m * forcing_sup(0) + forcing_sup(1));
                    if (min_order >= sys.n() + 4)
                        f.sup_d4 = e_m * leibniz4(norm_m, [&](int k) { return forcing_sup(k); });
                    auto integral = rigorous_integral(f, q.t, ib + 1);
                    for (int i = 0; i < d; ++i)
                        acc[static_cast<std::size_t>(i)] =
                            acc[static_cast<std::size_t>(i)] +
                            integral[static_cast<std::size_t>(i)];
                    return acc;
                },
                b);
        };
        res.value = opts.nested ? nested_vector_eval(raw, q.bits) : raw(q.bits);
    }
    res.work.elapsed_ns = clock.ns();
    return res;
}

} // namespace odecert
