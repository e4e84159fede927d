#include "odecert/lif.hpp"

#include "odecert/elementary.hpp"
#include "odecert/errors.hpp"

#include <deque>

namespace odecert {

LIFConfig LIFConfig::from_params(const LifParams& p, Signal ie) {
    LIFConfig cfg;
    cfg.tau_m = p.tau_m;
    cfg.tau_s = p.tau_s;
    cfg.v_rest = p.v_rest;
    cfg.theta = p.theta;
    cfg.v0 = p.v0;
    cfg.i0 = p.i0;
    cfg.input = std::move(ie);
    return cfg;
}

void LIFConfig::validate() const {
    if (!tau_m.is_real() || !tau_s.is_real() || sgn(tau_m.re()) <= 0 || sgn(tau_s.re()) <= 0)
        throw nonpositive_time_constant();
    if (!v_rest.is_real() || !theta.is_real() || !v0.is_real() || !i0.is_real())
        throw validation_error("LIF parameters must be real");
    if (theta.re() <= v_rest.re())
        throw validation_error("firing threshold must exceed the resting potential");
}

const char* to_string(SpikeReport::Status s) {
    switch (s) {
        case SpikeReport::Status::Crossed: return "Crossed";
        case SpikeReport::Status::NoCrossing: return "NoCrossingOn[0,1]";
        case SpikeReport::Status::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::pair<ComplexBox, ComplexBox> simulate_lif(const LIFConfig& cfg, const Dyadic& t, long bits) {
    cfg.validate();
    ODESystem sys = build_lif(cfg.tau_m, cfg.tau_s, cfg.v_rest, cfg.v0, cfg.i0);
    std::vector<Signal> u = {Signal::zero(), cfg.input};
    SolutionResult r = solve_system(sys, u, {t, bits + 1});
    ComplexBox v = r.value[0] + ComplexBox::from_exact(cfg.v_rest, bits + 8);
    return {v, r.value[1]};
}

namespace {

// Shared machinery for first_spike / spike_train: works on [0, t_end] with a
// possibly restarted state.
struct SpikeSearch {
    LIFConfig cfg;
    Dyadic t_end;
    long bits;

    ODESystem sys;
    std::vector<Signal> u;
    mpq_class theta;
    Dyadic lipschitz; // upper bound for |V'| on the domain

    SpikeSearch(const LIFConfig& c, const Dyadic& end, long b) : cfg(c), t_end(end), bits(b) {
        cfg.validate();
        sys = build_lif(cfg.tau_m, cfg.tau_s, cfg.v_rest, cfg.v0, cfg.i0);
        u = {Signal::zero(), cfg.input};
        theta = cfg.theta.re();

        // |V'| = |(-Vshift + I)/tau_m| <= 2 * sup||y|| / tau_m with
        // sup||y|| <= e^{||M||} (||y0|| + ||B0|| sup|I_e|)
        auto inv = mat_inverse_exact(sys.A[1]);
        QMatrix m = *inv * sys.A[0];
        Dyadic norm_m = MatrixBox::from_exact(m, 24).rowsum_norm_upper();
        Dyadic e_m = exp_point(norm_m, Dyadic(), 16).re().hi();
        Dyadic y0n;
        for (const auto& v : sys.y0) y0n = std::max(y0n, gr_mag_upper(v));
        Dyadic b0n = MatrixBox::from_exact(sys.B[0], 24).rowsum_norm_upper();
        Dyadic sup_state = e_m * (y0n + b0n * cfg.input.sup_bound(0));
        Dyadic inv_tau = Dyadic::from_rational_up(mpq_class(1) / cfg.tau_m.re(), 24);
        lipschitz = (sup_state + sup_state) * inv_tau;
    }

    static Dyadic gr_mag_upper(const GaussianRational& z) {
        mpq_class r = abs(z.re()), i = abs(z.im());
        return Dyadic::from_rational_up(r, 24) + Dyadic::from_rational_up(i, 24);
    }

    RealInterval v_point_at(const Dyadic& t, long wb) const {
        SolveOptions opts;
        opts.nested = false;
        SolutionResult r = solve_system(sys, u, {t, wb}, opts);
        const ComplexBox& vshift = r.value[0];
        if (!vshift.im().contains_zero())
            throw internal_error("LIF potential enclosure excludes the real axis");
        RealInterval shifted = vshift.re();
        mpq_class lo = shifted.lo().to_rational() + cfg.v_rest.re();
        mpq_class hi = shifted.hi().to_rational() + cfg.v_rest.re();
        return RealInterval::from_rationals(lo, hi, wb + 8);
    }

    // escalate precision only while the enclosure straddles theta
    RealInterval v_point(const Dyadic& t, long wb_cap) const {
        long w = bits + 12;
        for (;;) {
            RealInterval v = v_point_at(t, w);
            if (below(v) || at_or_above(v) || w >= wb_cap) return v;
            w = std::min(2 * w, wb_cap);
        }
    }

    RealInterval v_range(const Dyadic& a, const Dyadic& b) const {
        Dyadic mid = (a + b).mul_pow2(-1);
        RealInterval at_mid = v_point_at(mid, bits + 12);
        Dyadic rad = (b - a).mul_pow2(-1).round_up(24);
        return at_mid.inflate(lipschitz * rad);
    }

    bool below(const RealInterval& v) const { return v.hi().to_rational() < theta; }
    bool at_or_above(const RealInterval& v) const { return v.lo().to_rational() >= theta; }

    // one scan+bisection pass at a fixed grid size and working precision
    struct PassResult {
        enum class Kind { NoCrossing, Crossed, Unresolved } kind;
        RealInterval bracket;
        std::vector<RealInterval> candidates;
    };

    PassResult pass(int grid, long wb_cap) const {
        // exact initial comparison: crossing at t = 0
        if (cfg.v0.re() >= theta) {
            PassResult r;
            r.kind = PassResult::Kind::Crossed;
            r.bracket = RealInterval(Dyadic(0), Dyadic(0));
            return r;
        }

        const Dyadic min_len = Dyadic::pow2(-(bits + 1));
        // grid is a power of two, so every cut t_end * k / grid is exact dyadic
        std::deque<std::pair<Dyadic, Dyadic>> segments;
        Dyadic prev(0);
        for (int k = 1; k <= grid; ++k) {
            Dyadic cut = t_end.mul_pow2(-log2_int(grid)) * Dyadic(k);
            segments.emplace_back(prev, cut);
            prev = cut;
        }

        std::size_t steps = 0;
        const std::size_t step_cap = 4096;
        while (!segments.empty()) {
            auto [a, b] = segments.front();
            segments.pop_front();
            if (++steps > step_cap) {
                PassResult r;
                r.kind = PassResult::Kind::Unresolved;
                r.candidates.push_back(RealInterval(a, t_end));
                return r;
            }
            RealInterval rng = v_range(a, b);
            if (below(rng)) continue;

            // the first crossing, if any, is at or after a; try to bracket it
            RealInterval va = v_point(a, wb_cap);
            if (at_or_above(va)) {
                // crossing exactly at the prefix boundary
                PassResult r;
                r.kind = PassResult::Kind::Crossed;
                r.bracket = RealInterval(a, a);
                return r;
            }
            if (!below(va)) {
                PassResult r; // straddles theta even at the precision cap: grazing
                r.kind = PassResult::Kind::Unresolved;
                r.candidates.push_back(RealInterval(a, b));
                return r;
            }
            if (b - a <= min_len) {
                RealInterval vb = v_point(b, wb_cap);
                if (at_or_above(vb)) {
                    PassResult r;
                    r.kind = PassResult::Kind::Crossed;
                    r.bracket = RealInterval(a, b);
                    return r;
                }
                if (below(vb)) continue; // excursion ruled in neither: range was loose
                PassResult r;
                r.kind = PassResult::Kind::Unresolved;
                r.candidates.push_back(RealInterval(a, b));
                return r;
            }
            Dyadic mid = (a + b).mul_pow2(-1);
            segments.emplace_front(mid, b);
            segments.emplace_front(a, mid);
        }
        PassResult r;
        r.kind = PassResult::Kind::NoCrossing;
        return r;
    }

    static long log2_int(int pow2) {
        long b = 0;
        while ((1 << b) < pow2) ++b;
        return b;
    }

    SpikeReport run() const {
        // scan grid doubles 64 -> 1024; point precision escalates adaptively
        // inside each pass, capped at 8 doublings of the base precision
        const long wb_cap = (bits + 12) << 8;
        SpikeReport rep;
        std::vector<RealInterval> last_candidates;
        for (int grid = 64; grid <= 1024; grid *= 2) {
            PassResult r = pass(grid, wb_cap);
            if (r.kind == PassResult::Kind::NoCrossing) {
                rep.status = SpikeReport::Status::NoCrossing;
                return rep;
            }
            if (r.kind == PassResult::Kind::Crossed) {
                rep.status = SpikeReport::Status::Crossed;
                rep.t_box = r.bracket;
                return rep;
            }
            last_candidates = r.candidates;
        }
        rep.status = SpikeReport::Status::Indeterminate;
        rep.candidates = last_candidates;
        return rep;
    }
};

} // namespace

SpikeReport first_spike(const LIFConfig& cfg, long bits) {
    return SpikeSearch(cfg, Dyadic(1), bits).run();
}

std::vector<SpikeReport> spike_train(const LIFConfig& cfg, long bits) {
    cfg.validate();
    std::vector<SpikeReport> out;
    Dyadic t0(0);
    LIFConfig cur = cfg;
    mpq_class budget = 0;
    const mpq_class tolerance = Dyadic::pow2(-bits).to_rational();

    while (t0 < Dyadic(1)) {
        Dyadic remaining = Dyadic(1) - t0;
        SpikeSearch search(cur, remaining, bits);
        SpikeReport rep = search.run();
        if (rep.status == SpikeReport::Status::NoCrossing) break;

        // report in absolute time
        if (rep.status == SpikeReport::Status::Indeterminate) {
            for (auto& c : rep.candidates) c = RealInterval(t0 + c.lo(), t0 + c.hi());
            out.push_back(rep);
            break;
        }
        RealInterval abs_box(t0 + rep.t_box.lo(), t0 + rep.t_box.hi());
        SpikeReport abs_rep = rep;
        abs_rep.t_box = abs_box;
        out.push_back(abs_rep);

        Dyadic restart = rep.t_box.hi();
        if (t0 + restart >= Dyadic(1)) break;

        // restart: V resets exactly, I continues from the enclosure midpoint;
        // the discarded half-width joins the error budget
        auto [vbox, ibox] = simulate_lif(cur, restart, bits + 4);
        budget += ibox.width().to_rational() / 2;
        if (budget > tolerance)
            throw budget_exceeded("accumulated restart widths exceed 2^-bits");

        LIFConfig next = cur;
        next.v0 = cur.v_rest;
        next.i0 = GaussianRational(ibox.re().mid().to_rational());
        next.input = cur.input.shifted(restart);
        cur = next;
        t0 = t0 + restart;
    }
    return out;
}

} // namespace odecert
