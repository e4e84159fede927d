#include "odecert/analyzer.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"

#include <algorithm>

namespace odecert {

Verdict classify_scalar(const LinearODE& ode) {
    ode.validate();
    auto [py, pu] = char_polys(ode);

    if (py.degree() == 0) {
        // m = 0: y is a direct derivative combination of u, trivially solvable
        return TrivialNoBlowup{poly_divmod(pu, py).first};
    }

    bool div = divides(py, pu);

    // independent route: certified root multiset inclusion (Lemma-style
    // divisibility over an algebraically closed field)
    RootEnclosures zy = certified_roots(py, 32);
    RootEnclosures zu = pu.degree() >= 1 ? certified_roots(pu, 32) : RootEnclosures::empty(pu);
    Inclusion incl = multiset_root_inclusion(zy, zu);
    if ((incl == Inclusion::Included && !div) || (incl == Inclusion::NotIncluded && div))
        throw internal_error("divisibility and root-inclusion paths disagree on " + py.to_string() +
                             " | " + pu.to_string());

    if (div) return TrivialNoBlowup{poly_divmod(pu, py).first};

    auto excluded = find_excluded_root(zy, zu);
    if (!excluded)
        throw root_uncertifiable("no certifiable witness root found for a non-dividing pair");
    Blowup b{excluded->box, excluded->deficit, std::nullopt};
    if (ode.m() == 1) {
        // Prop-3.2 fast path value: the single root of P_y is -a_0/a_1
        GaussianRational root = -ode.a[0] / ode.a[1];
        b.pu_at_minus_a0 = pu.eval(root);
    }
    return b;
}

Verdict classify_system(const ODESystem& sys) {
    sys.validate();
    if (sys.m() != 1)
        throw unsupported_order("system criterion requires order (1,n), got m = " +
                                std::to_string(sys.m()));
    const QMatrix& a1 = sys.A[1];
    const QMatrix& a0 = sys.A[0];
    auto inv = mat_inverse_exact(a1);
    if (!inv) return CriterionNotApplicable{"A1 is singular"};
    QMatrix m = *inv * a0;

    std::vector<QMatrix> n;
    n.reserve(sys.B.size());
    for (const auto& bj : sys.B) n.push_back(*inv * bj);
    for (std::size_t j = 0; j < n.size(); ++j) {
        QMatrix comm = m * n[j] - n[j] * m;
        if (!comm.is_zero())
            return CriterionNotApplicable{"commutativity condition fails for B_" +
                                          std::to_string(j)};
    }

    QMatrix neg_m = -m;
    QMatrix k(sys.d, sys.d);
    for (std::size_t j = 0; j < n.size(); ++j) k = k + n[j] * neg_m.pow(j);

    QMatrix literal = matpoly_eval(MatPoly(sys.d, sys.A), neg_m);

    if (k.is_zero()) return SystemNoBlowupCandidate{k, literal};
    return SystemBlowup{k, literal};
}

std::string verdict_summary(const Verdict& v) {
    if (const auto* t = std::get_if<TrivialNoBlowup>(&v))
        return "trivial (no blowup), Q = " + t->Q.to_string();
    if (const auto* b = std::get_if<Blowup>(&v)) {
        std::string s = "complexity blowup, witness root " + b->witness.to_string(10);
        if (b->deficit_witness) s += " (multiplicity deficit)";
        if (b->pu_at_minus_a0) s += ", P_u(-a0) = " + b->pu_at_minus_a0->to_string();
        return s;
    }
    if (std::holds_alternative<SystemBlowup>(v)) return "system complexity blowup";
    if (std::holds_alternative<SystemNoBlowupCandidate>(v))
        return "system no-blowup candidate (criterion matrix vanishes)";
    if (const auto* c = std::get_if<CriterionNotApplicable>(&v))
        return "criterion not applicable: " + c->reason;
    return "inconclusive: " + std::get<Inconclusive>(v).reason;
}

int verdict_exit_code(const Verdict& v) {
    if (std::holds_alternative<TrivialNoBlowup>(v) ||
        std::holds_alternative<SystemNoBlowupCandidate>(v))
        return 0;
    if (std::holds_alternative<Blowup>(v) || std::holds_alternative<SystemBlowup>(v)) return 2;
    return 3;
}

// ------------------------------------------------------- trivial synthesis

namespace {

// (t^l e^{sigma t})^(i) at tau: e^{sigma tau} * sum_{j<=min(i,l)} C(i,j) l!/(l-j)! tau^{l-j} sigma^{i-j}
ComplexBox basis_deriv(const ComplexBox& sigma, int l, int i, const Dyadic& tau, long wb) {
    ComplexBox sum;
    for (int j = 0; j <= std::min(i, l); ++j) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(j));
        mpz_class fall(1);
        for (int x = l; x > l - j; --x) fall *= x;
        GaussianRational scalar(mpq_class(c * fall));
        ComplexBox tpow = box_pow(ComplexBox::real_point(tau), static_cast<unsigned long>(l - j));
        ComplexBox spow = box_pow(sigma, static_cast<unsigned long>(i - j));
        sum = sum + (tpow * spow).scale(scalar, wb);
    }
    ComplexBox st = sigma * ComplexBox::real_point(tau);
    return exp_box_raw(st, wb) * sum;
}

// Gaussian elimination in interval arithmetic; fails (nullopt) when no pivot
// certifiably excludes zero, which callers treat as "need more precision".
std::optional<std::vector<ComplexBox>> solve_box_system(std::vector<std::vector<ComplexBox>> a,
                                                        std::vector<ComplexBox> rhs, long wb) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        Dyadic best_mag;
        for (std::size_t r = col; r < n; ++r) {
            Dyadic ml = a[r][col].mag_lower();
            if (ml > best_mag) {
                best_mag = ml;
                best = r;
            }
        }
        if (best_mag.is_zero()) return std::nullopt;
        std::swap(a[col], a[best]);
        std::swap(rhs[col], rhs[best]);
        for (std::size_t r = col + 1; r < n; ++r) {
            ComplexBox f = a[r][col].div(a[col][col], wb);
            for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    std::vector<ComplexBox> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        ComplexBox s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s = s - a[ri][c] * x[c];
        x[ri] = s.div(a[ri][ri], wb);
    }
    return x;
}

} // namespace

TrivialSolution::TrivialSolution(LinearODE ode, Poly q, Signal u)
    : ode_(std::move(ode)), q_(std::move(q)), u_(std::move(u)) {
    auto [py, pu] = char_polys(ode_);
    if (py * q_ != pu) throw validation_error("quotient does not satisfy P_u = P_y * Q");
    int need = q_.degree() + ode_.m();
    if (need > u_.max_order())
        throw derivative_order_unavailable("signal provides too few derivatives for Q(d/dt)u");
}

ComplexBox TrivialSolution::particular_deriv(int deriv, const Dyadic& t, long wb) const {
    ComplexBox acc;
    for (int k = 0; k <= q_.degree(); ++k) {
        GaussianRational qk = q_.coeff(static_cast<std::size_t>(k));
        if (qk.is_zero()) continue;
        acc = acc + u_.eval_enclosure(k + deriv, t, wb).scale(qk, wb);
    }
    return acc;
}

const TrivialSolution::Homogeneous* TrivialSolution::homogeneous(long wb) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(wb);
    if (it != cache_.end()) return it->second ? &*it->second : nullptr;

    int m = ode_.m();
    Homogeneous h;
    bool ok = true;
    if (m > 0) {
        auto [py, pu] = char_polys(ode_);
        RootEnclosures roots = certified_roots(py, wb);
        std::vector<std::pair<ComplexBox, int>> basis; // (sigma, power)
        for (const auto& item : roots.items())
            for (int l = 0; l < item.multiplicity; ++l) basis.push_back({item.box, l});

        std::vector<std::vector<ComplexBox>> mat(static_cast<std::size_t>(m));
        std::vector<ComplexBox> rhs(static_cast<std::size_t>(m));
        Dyadic zero;
        for (int i = 0; i < m; ++i) {
            for (const auto& [sigma, l] : basis)
                mat[static_cast<std::size_t>(i)].push_back(basis_deriv(sigma, l, i, zero, wb));
            rhs[static_cast<std::size_t>(i)] =
                ComplexBox::from_exact(ode_.y0[static_cast<std::size_t>(i)], wb) -
                particular_deriv(i, zero, wb);
        }
        auto coeffs = solve_box_system(mat, rhs, wb);
        if (coeffs) {
            for (std::size_t k = 0; k < basis.size(); ++k)
                h.terms.push_back({basis[k].first, basis[k].second, (*coeffs)[k]});
        } else {
            ok = false; // pivots straddle zero: caller retries at higher precision
        }
    }
    auto ins = cache_.emplace(wb, ok ? std::optional<Homogeneous>(std::move(h)) : std::nullopt);
    return ins.first->second ? &*ins.first->second : nullptr;
}

ComplexBox TrivialSolution::eval_deriv(int deriv, const Dyadic& t, long bits) const {
    long wb = bits + 16;
    ComplexBox result;
    bool have = false;
    for (int round = 0; round < 8; ++round, wb *= 2) {
        const Homogeneous* h = homogeneous(wb);
        if (!h) continue;
        result = particular_deriv(deriv, t, wb);
        for (const auto& term : h->terms)
            result = result + term.coeff * basis_deriv(term.sigma, term.power, deriv, t, wb);
        have = true;
        if (result.width() <= Dyadic::pow2(-bits)) return result;
    }
    if (!have) throw root_uncertifiable("homogeneous coefficients not solvable");
    return result;
}

TrivialSolution synthesize_trivial_solution(const LinearODE& ode, const Poly& q, const Signal& u) {
    return TrivialSolution(ode, q, u);
}

} // namespace odecert
