#include "odecert/elementary.hpp"

#include "odecert/errors.hpp"
#include "odecert/work.hpp"

#include <algorithm>

namespace odecert {

long dyadic_ceil_long(const Dyadic& x) {
    if (x.is_zero()) return 0;
    mpq_class q = x.to_rational();
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!c.fits_slong_p()) throw internal_error("ceil out of range");
    return c.get_si();
}

ComplexBox exp_point(const Dyadic& re, const Dyadic& im, long w) {
    if (w < 8) w = 8;
    const long wr = w + 16; // internal rounding precision
    Dyadic bound = re.abs() + im.abs();

    // scale so the series argument has 1-norm <= 1/2
    long k = 0;
    if (!bound.is_zero()) {
        long cl = bound.ceil_log2_abs();
        if (cl + 1 > 0) k = cl + 1;
    }
    ComplexBox x = ComplexBox::point(re.mul_pow2(-k), im.mul_pow2(-k));

    ComplexBox term = ComplexBox::real_point(Dyadic(1));
    ComplexBox sum = term;
    const Dyadic tol = Dyadic::pow2(-(w + 6));
    unsigned long j = 1;
    for (;; ++j) {
        term = (term * x).scale(GaussianRational(1, static_cast<long>(j)), wr);
        term = term.round_outward(wr);
        sum = sum + term;
        // remaining tail <= |term_j| * sum_{l>=1} (1/2)^l / binom-ish <= |term_j| / (j+1)
        Dyadic tail = term.mag_upper();
        mpq_class tq = tail.to_rational() / (static_cast<long>(j) + 1);
        if (tq <= tol.to_rational()) {
            sum = sum.inflate(Dyadic::from_rational_up(tq, 24));
            break;
        }
        if (j > 4 * static_cast<unsigned long>(w) + 64)
            throw internal_error("exp series failed to converge");
    }

    for (long s = 0; s < k; ++s)
        sum = sum.sqr().round_outward(wr);
    return sum;
}

RealInterval exp_real(const RealInterval& x, long w) {
    ComplexBox lo = exp_point(x.lo(), Dyadic(), w);
    if (x.is_point()) return lo.re();
    ComplexBox hi = exp_point(x.hi(), Dyadic(), w);
    return RealInterval(lo.re().lo(), hi.re().hi());
}

CosSin cossin_real(const RealInterval& theta, long w) {
    ComplexBox e = exp_point(Dyadic(), theta.mid(), w);
    Dyadic r = theta.rad_upper();
    RealInterval unit(Dyadic(-1), Dyadic(1));
    RealInterval c = e.re().inflate(r);
    RealInterval s = e.im().inflate(r);
    auto ci = c.intersect(unit);
    auto si = s.intersect(unit);
    return {ci ? *ci : unit, si ? *si : unit};
}

ComplexBox exp_box_raw(const ComplexBox& z, long bits) {
    work::count_exp();
    // extra working bits to absorb the output magnitude 2^{re * log2 e}
    long extra = 0;
    if (z.re().hi().sign() > 0) extra = 2 * dyadic_ceil_long(z.re().hi()) + 2;
    long w = bits + 8 + extra;

    ComplexBox result;
    Dyadic target = Dyadic::pow2(-bits);
    for (int round = 0;; ++round) {
        RealInterval er = exp_real(z.re(), w);
        CosSin cs = cossin_real(z.im(), w);
        result = ComplexBox(er * cs.cos, er * cs.sin);
        if (round == 0) {
            // width attributable to the input box itself; we cannot do better
            Dyadic prop = result.mag_upper() * (z.re().width() + z.im().width());
            target = target + prop.mul_pow2(2);
        }
        if (result.width() <= target || round >= 6) break;
        w *= 2;
    }
    return result;
}

ComplexBox nested_box_eval(const std::function<ComplexBox(long)>& raw, long bits) {
    if (bits < 1) bits = 1;
    long b0 = ((bits - 1) % 8) + 1;
    ComplexBox acc = raw(b0);
    for (long b = b0 + 8; b <= bits; b += 8) {
        ComplexBox r = raw(b);
        auto i = acc.intersect(r);
        if (!i) throw internal_error("precision ladder enclosures do not overlap");
        acc = *i;
    }
    return acc;
}

ComplexBox exp_box(const ComplexBox& z, long bits) {
    return nested_box_eval([&](long b) { return exp_box_raw(z, b); }, bits);
}

static ComplexBox mul_i(const ComplexBox& z) {
    return ComplexBox(-z.im(), z.re());
}

ComplexBox sin_box_raw(const ComplexBox& z, long bits) {
    ComplexBox iz = mul_i(z);
    ComplexBox a = exp_box_raw(iz, bits + 2);
    ComplexBox b = exp_box_raw(-iz, bits + 2);
    // (a - b) * (-i/2)
    return mul_i(b - a).mul_pow2(-1);
}

ComplexBox cos_box_raw(const ComplexBox& z, long bits) {
    ComplexBox iz = mul_i(z);
    ComplexBox a = exp_box_raw(iz, bits + 2);
    ComplexBox b = exp_box_raw(-iz, bits + 2);
    return (a + b).mul_pow2(-1);
}

} // namespace odecert
