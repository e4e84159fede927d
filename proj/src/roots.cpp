#include "odecert/roots.hpp"

#include "odecert/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace odecert {

int RootEnclosures::total_multiplicity() const {
    int s = 0;
    for (const auto& it : items_) s += it.multiplicity;
    return s;
}

namespace {

std::complex<double> to_cd(const GaussianRational& z) {
    return {z.re().get_d(), z.im().get_d()};
}

// Eigenvalues of the companion matrix of a monic polynomial, as double
// precision estimates to be certified afterwards.
std::vector<std::complex<double>> companion_estimates(const Poly& f) {
    int d = f.degree();
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) c(i, d - 1) = -to_cd(f.coeff(static_cast<std::size_t>(i)));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
    std::vector<std::complex<double>> out(d);
    for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

// Aberth-Ehrlich fallback when companion estimates collapse onto each other.
std::vector<std::complex<double>> aberth_estimates(const Poly& f) {
    int d = f.degree();
    std::vector<std::complex<double>> a(d + 1);
    for (int i = 0; i <= d; ++i) a[i] = to_cd(f.coeff(static_cast<std::size_t>(i)));
    double bound = 0;
    for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(a[i]));
    double radius = 1.0 + bound;
    std::vector<std::complex<double>> z(d);
    for (int k = 0; k < d; ++k) {
        double ang = 2.0 * 3.141592653589793 * k / d + 0.4;
        z[k] = std::polar(radius, ang);
    }
    auto horner = [&](std::complex<double> x, bool deriv) {
        std::complex<double> p = 0, dp = 0;
        for (int i = d; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + a[i];
        }
        return deriv ? dp : p;
    };
    for (int iter = 0; iter < 400; ++iter) {
        double worst = 0;
        for (int k = 0; k < d; ++k) {
            std::complex<double> p = horner(z[k], false);
            std::complex<double> dp = horner(z[k], true);
            if (dp == 0.0) continue;
            std::complex<double> w = p / dp;
            std::complex<double> s = 0;
            for (int j = 0; j < d; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            std::complex<double> corr = w / (1.0 - w * s);
            z[k] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[k])));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

struct DyadicComplex {
    Dyadic re, im;
};

DyadicComplex from_cd(std::complex<double> z) {
    // doubles are dyadic; decompose exactly
    auto conv = [](double x) {
        if (x == 0.0 || !std::isfinite(x)) return Dyadic();
        int e;
        double m = std::frexp(x, &e);
        long long mi = static_cast<long long>(std::ldexp(m, 53));
        return Dyadic(mpz_class(static_cast<long>(mi)), e - 53);
    };
    return {conv(z.real()), conv(z.imag())};
}

GaussianRational to_gauss(const DyadicComplex& z) {
    return GaussianRational(z.re.to_rational(), z.im.to_rational());
}

// Exact point Newton iterations, rounded back to w bits each step.
DyadicComplex polish(const Poly& f, const Poly& fp, DyadicComplex z, long w, long target_bits) {
    mpq_class tol2 = Dyadic::pow2(-(target_bits + 10)).to_rational();
    tol2 *= tol2;
    for (int iter = 0; iter < 80; ++iter) {
        GaussianRational num = f.eval(to_gauss(z));
        if (num.is_zero()) return z;
        GaussianRational den = fp.eval(to_gauss(z));
        if (den.is_zero()) {
            // sitting exactly on a critical point: nudge off it
            z.re = z.re + Dyadic::pow2(-(w / 2));
            continue;
        }
        GaussianRational step = num / den;
        z.re = Dyadic::from_rational_down(z.re.to_rational() - step.re(), w);
        z.im = Dyadic::from_rational_down(z.im.to_rational() - step.im(), w);
        if (step.norm_sq() <= tol2) break;
    }
    return z;
}

std::optional<ComplexBox> newton_operator(const Poly& f, const Poly& fp, const ComplexBox& x, long w) {
    Dyadic mr = x.re().mid(), mi = x.im().mid();
    GaussianRational mid(mr.to_rational(), mi.to_rational());
    GaussianRational fm = f.eval(mid); // exact: midpoints are dyadic
    ComplexBox fm_box = ComplexBox::from_exact(fm, w);
    ComplexBox d = fp.eval_box(x, w);
    if (d.contains_zero()) return std::nullopt;
    return ComplexBox::point(mr, mi) - fm_box.div(d, w);
}

// Interval Newton certification with an inflation ladder: N(X) strictly inside
// X proves X contains exactly one root; subsequent Newton steps contract the
// enclosure to the requested width.
// Contraction of a certified box down to the requested width.
std::optional<ComplexBox> contract_certified(const Poly& f, const Poly& fp, ComplexBox enc,
                                             long w, long target_bits) {
    Dyadic target = Dyadic::pow2(-target_bits);
    for (int it = 0; it < 80 && enc.width() > target; ++it) {
        auto step = newton_operator(f, fp, enc, w);
        if (!step) return std::nullopt;
        auto meet = enc.intersect(*step);
        if (!meet) return std::nullopt;
        if (meet->width() >= enc.width()) return std::nullopt; // stalled
        enc = *meet;
    }
    if (enc.width() <= target) return enc;
    return std::nullopt;
}

std::optional<ComplexBox> certify_simple_root(const Poly& f, const Poly& fp,
                                              const DyadicComplex& z, long w, long target_bits) {
    for (int k = 0; k <= 10; ++k) {
        Dyadic r = Dyadic::pow2(-(target_bits + 8)).mul_pow2(2 * k);
        ComplexBox x(RealInterval(z.re - r, z.re + r), RealInterval(z.im - r, z.im + r));
        auto n = newton_operator(f, fp, x, w);
        if (!n || !x.strictly_contains(*n)) continue;
        auto enc = contract_certified(f, fp, *n, w, target_bits);
        if (enc) return enc;
    }
    return std::nullopt;
}

// Estimate-free fallback: exhaustive quadtree subdivision of a box containing
// all roots, discarding boxes whose interval evaluation excludes zero and
// certifying the rest by interval Newton. Total for square-free input given
// enough working precision; used when floating-point estimates cannot
// separate a root cluster.
std::optional<std::vector<ComplexBox>> subdivision_isolate(const Poly& f, const Poly& fp,
                                                           long w, long target_bits) {
    Dyadic bound(1);
    for (int i = 0; i < f.degree(); ++i) {
        GaussianRational c = f.coeff(static_cast<std::size_t>(i));
        Dyadic mag = Dyadic::from_rational_up(abs(c.re()), 24) +
                     Dyadic::from_rational_up(abs(c.im()), 24);
        bound = std::max(bound, Dyadic(1) + mag);
    }
    std::vector<ComplexBox> work = {
        ComplexBox(RealInterval(-bound, bound), RealInterval(-bound, bound))};
    std::vector<ComplexBox> found;

    std::size_t steps = 0;
    const std::size_t cap = 200000;
    while (!work.empty()) {
        if (++steps > cap) return std::nullopt;
        ComplexBox x = work.back();
        work.pop_back();
        if (!f.eval_box(x, w).contains_zero()) continue; // no root here
        if (x.width() <= Dyadic(1)) {
            auto n = newton_operator(f, fp, x, w);
            if (n && x.strictly_contains(*n)) {
                auto enc = contract_certified(f, fp, *n, w, target_bits);
                if (!enc) return std::nullopt;
                bool duplicate = false;
                for (const auto& r : found)
                    if (r.intersects(*enc)) duplicate = true; // same root reached twice
                if (!duplicate) found.push_back(*enc);
                continue;
            }
        }
        if (x.width() <= Dyadic::pow2(-(w - 8))) return std::nullopt; // cannot resolve at w
        Dyadic rm = x.re().mid(), im = x.im().mid();
        RealInterval rl(x.re().lo(), rm), rr(rm, x.re().hi());
        RealInterval il(x.im().lo(), im), ir(im, x.im().hi());
        work.push_back(ComplexBox(rl, il));
        work.push_back(ComplexBox(rl, ir));
        work.push_back(ComplexBox(rr, il));
        work.push_back(ComplexBox(rr, ir));
    }
    if (static_cast<int>(found.size()) != f.degree()) return std::nullopt;
    return found;
}

bool mid_lex_less(const RootItem& a, const RootItem& b) {
    int c = Dyadic::cmp(a.box.re().mid(), b.box.re().mid());
    if (c != 0) return c < 0;
    return Dyadic::cmp(a.box.im().mid(), b.box.im().mid()) < 0;
}

bool pairwise_disjoint(const std::vector<RootItem>& items) {
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j)
            if (items[i].box.intersects(items[j].box)) return false;
    return true;
}

} // namespace

RootEnclosures certified_roots(const Poly& p, long bits) {
    if (p.degree() < 1) throw degree_zero_input("certified_roots requires degree >= 1");
    if (bits < 1) bits = 1;
    auto factors = squarefree_decomposition(p);

    long w = bits + 48;
    for (int attempt = 0; attempt <= 8; ++attempt, w *= 2) {
        std::vector<RootItem> items;
        bool ok = true;
        long target_bits = bits + 4 + 4 * attempt;
        // keep every box full-dimensional so that a tighter enclosure of the
        // same root always fits strictly inside a looser one
        const Dyadic pad = Dyadic::pow2(-(target_bits + 4));
        for (const auto& [f, mult] : factors) {
            if (f.degree() == 1) {
                // monic X + c: root is exactly -c
                GaussianRational root = -f.coeff(0);
                items.push_back({ComplexBox::from_exact(root, target_bits + 16).inflate(pad), mult});
                continue;
            }
            Poly fp = f.derivative();
            std::vector<ComplexBox> found;
            if (attempt < 2) {
                // fast path: floating-point estimates polished and certified
                auto estimates = attempt == 0 ? companion_estimates(f) : aberth_estimates(f);
                for (const auto& est : estimates) {
                    DyadicComplex z = polish(f, fp, from_cd(est), w, target_bits);
                    auto enc = certify_simple_root(f, fp, z, w, target_bits);
                    if (!enc) {
                        ok = false;
                        break;
                    }
                    found.push_back(*enc);
                }
            } else {
                // clusters the estimators cannot separate: rigorous subdivision
                auto isolated = subdivision_isolate(f, fp, w, target_bits);
                if (isolated) found = *isolated;
                else ok = false;
            }
            if (!ok) break;
            for (auto& b : found) items.push_back({b.inflate(pad), mult});
        }
        if (!ok) continue;
        if (!pairwise_disjoint(items)) continue; // duplicates or contact: retry tighter
        std::sort(items.begin(), items.end(), mid_lex_less);
        return RootEnclosures(p, bits, std::move(items));
    }
    throw root_uncertifiable("roots of " + p.to_string() + " could not be certified");
}

namespace {

struct MatchOutcome {
    bool resolved = false;      // every a-box sits inside exactly one b-box
    bool not_included = false;  // certified exclusion found
    std::optional<ExcludedRoot> witness;
};

MatchOutcome match_items(const std::vector<RootItem>& as, const std::vector<RootItem>& bs) {
    MatchOutcome out;
    std::vector<int> assigned(bs.size(), -1);
    out.resolved = true;
    for (std::size_t i = 0; i < as.size(); ++i) {
        const auto& a = as[i];
        int inside = -1, n_intersect = 0, best_mult = 0;
        for (std::size_t j = 0; j < bs.size(); ++j) {
            if (!a.box.intersects(bs[j].box)) continue;
            ++n_intersect;
            best_mult = std::max(best_mult, bs[j].multiplicity);
            if (bs[j].box.contains(a.box)) inside = static_cast<int>(j);
        }
        if (n_intersect == 0) {
            out.not_included = true;
            out.witness = ExcludedRoot{a.box, false};
            return out;
        }
        if (best_mult < a.multiplicity) {
            // the root can match at most one b-item; all candidates are short
            out.not_included = true;
            out.witness = ExcludedRoot{a.box, true};
            return out;
        }
        if (inside < 0 || n_intersect != 1 || bs[inside].multiplicity < a.multiplicity ||
            assigned[inside] >= 0) {
            out.resolved = false;
        } else {
            assigned[inside] = static_cast<int>(i);
        }
    }
    return out;
}

} // namespace

Inclusion multiset_root_inclusion(const RootEnclosures& a, const RootEnclosures& b) {
    if (a.items().empty()) return Inclusion::Included;
    if (b.items().empty()) return Inclusion::NotIncluded;

    long base = std::max({a.bits(), b.bits(), 32L});
    int stable = 0;
    for (int depth = 0; depth <= 8; ++depth) {
        long bd = base << depth;
        RootEnclosures ra = certified_roots(a.source(), bd + 16);
        RootEnclosures rb = certified_roots(b.source(), bd);
        MatchOutcome m = match_items(ra.items(), rb.items());
        if (m.not_included) return Inclusion::NotIncluded;
        if (m.resolved) {
            if (++stable >= 2) return Inclusion::Included;
        } else {
            stable = 0;
        }
    }
    return Inclusion::Inconclusive;
}

std::optional<ExcludedRoot> find_excluded_root(const RootEnclosures& a, const RootEnclosures& b) {
    if (a.items().empty()) return std::nullopt;
    if (b.items().empty()) return ExcludedRoot{a.items().front().box, false};

    long base = std::max({a.bits(), b.bits(), 32L});
    for (int depth = 0; depth <= 8; ++depth) {
        long bd = base << depth;
        RootEnclosures ra = depth == 0 ? a : certified_roots(a.source(), bd);
        RootEnclosures rb = depth == 0 ? b : certified_roots(b.source(), bd);
        MatchOutcome m = match_items(ra.items(), rb.items());
        if (m.not_included) return m.witness;
    }
    return std::nullopt;
}

const char* to_string(Inclusion v) {
    switch (v) {
        case Inclusion::Included: return "Included";
        case Inclusion::NotIncluded: return "NotIncluded";
        case Inclusion::Inconclusive: return "Inconclusive";
    }
    return "?";
}

} // namespace odecert
