#include "odecert/interval.hpp"

#include "odecert/errors.hpp"
#include "odecert/work.hpp"

#include <algorithm>

namespace odecert {

RealInterval::RealInterval(Dyadic lo, Dyadic hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw internal_error("interval endpoints out of order");
}

RealInterval RealInterval::from_rational(const mpq_class& q, long bits) {
    if (Dyadic::rational_is_dyadic(q)) return RealInterval(Dyadic::from_rational_exact(q));
    return RealInterval(Dyadic::from_rational_down(q, bits), Dyadic::from_rational_up(q, bits));
}

RealInterval RealInterval::from_rationals(const mpq_class& lo, const mpq_class& hi, long bits) {
    return RealInterval(Dyadic::from_rational_down(lo, bits), Dyadic::from_rational_up(hi, bits));
}

RealInterval RealInterval::hull(const RealInterval& a, const RealInterval& b) {
    return RealInterval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

bool RealInterval::contains(const mpq_class& q) const {
    return lo_.to_rational() <= q && q <= hi_.to_rational();
}

std::optional<RealInterval> RealInterval::intersect(const RealInterval& o) const {
    Dyadic l = std::max(lo_, o.lo_);
    Dyadic h = std::min(hi_, o.hi_);
    if (l > h) return std::nullopt;
    return RealInterval(l, h);
}

Dyadic RealInterval::mag_upper() const {
    return std::max(lo_.abs(), hi_.abs());
}

Dyadic RealInterval::mag_lower() const {
    if (contains_zero()) return Dyadic();
    return std::min(lo_.abs(), hi_.abs());
}

RealInterval RealInterval::operator+(const RealInterval& o) const {
    work::count_arith();
    return RealInterval(lo_ + o.lo_, hi_ + o.hi_);
}

RealInterval RealInterval::operator-(const RealInterval& o) const {
    work::count_arith();
    return RealInterval(lo_ - o.hi_, hi_ - o.lo_);
}

RealInterval RealInterval::operator*(const RealInterval& o) const {
    work::count_arith();
    Dyadic p1 = lo_ * o.lo_, p2 = lo_ * o.hi_, p3 = hi_ * o.lo_, p4 = hi_ * o.hi_;
    Dyadic lo = std::min(std::min(p1, p2), std::min(p3, p4));
    Dyadic hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return RealInterval(lo, hi);
}

RealInterval RealInterval::sqr() const {
    work::count_arith();
    Dyadic a = lo_ * lo_, b = hi_ * hi_;
    if (contains_zero()) return RealInterval(Dyadic(), std::max(a, b));
    return RealInterval(std::min(a, b), std::max(a, b));
}

RealInterval RealInterval::div(const RealInterval& o, long bits) const {
    if (o.contains_zero()) throw divisor_contains_zero();
    work::count_arith();
    if (bits <= 0) bits = static_cast<long>(std::max<std::size_t>(
        {lo_.bit_length(), hi_.bit_length(), o.lo_.bit_length(), o.hi_.bit_length(), 53})) + 32;
    mpq_class q1 = lo_.to_rational() / o.lo_.to_rational();
    mpq_class q2 = lo_.to_rational() / o.hi_.to_rational();
    mpq_class q3 = hi_.to_rational() / o.lo_.to_rational();
    mpq_class q4 = hi_.to_rational() / o.hi_.to_rational();
    mpq_class lo = std::min(std::min(q1, q2), std::min(q3, q4));
    mpq_class hi = std::max(std::max(q1, q2), std::max(q3, q4));
    return from_rationals(lo, hi, bits);
}

RealInterval RealInterval::scale(const mpq_class& q, long bits) const {
    work::count_arith();
    mpq_class a = lo_.to_rational() * q;
    mpq_class b = hi_.to_rational() * q;
    if (a > b) std::swap(a, b);
    if (Dyadic::rational_is_dyadic(a) && Dyadic::rational_is_dyadic(b))
        return RealInterval(Dyadic::from_rational_exact(a), Dyadic::from_rational_exact(b));
    return from_rationals(a, b, bits);
}

std::string RealInterval::to_string(std::size_t digits) const {
    return "[" + lo_.to_decimal(digits, false) + ", " + hi_.to_decimal(digits, true) + "]";
}

ComplexBox ComplexBox::from_exact(const GaussianRational& z, long bits) {
    return ComplexBox(RealInterval::from_rational(z.re(), bits),
                      RealInterval::from_rational(z.im(), bits));
}

std::optional<ComplexBox> ComplexBox::intersect(const ComplexBox& o) const {
    auto r = re_.intersect(o.re_);
    if (!r) return std::nullopt;
    auto i = im_.intersect(o.im_);
    if (!i) return std::nullopt;
    return ComplexBox(*r, *i);
}

Dyadic ComplexBox::mag_lower() const {
    // max of the two separable lower bounds; positive iff one axis excludes 0
    return std::max(re_.mag_lower(), im_.mag_lower());
}

ComplexBox ComplexBox::operator*(const ComplexBox& o) const {
    return ComplexBox(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
}

ComplexBox ComplexBox::sqr() const {
    // (a+bi)^2 = a^2 - b^2 + 2ab i; squaring the components keeps the real
    // part tight when an axis straddles zero
    return ComplexBox(re_.sqr() - im_.sqr(), (re_ * im_).mul_pow2(1));
}

ComplexBox ComplexBox::div(const ComplexBox& o, long bits) const {
    if (o.contains_zero()) throw divisor_contains_zero();
    if (bits <= 0)
        bits = static_cast<long>(std::max<std::size_t>(
            {re_.lo().bit_length(), re_.hi().bit_length(), im_.lo().bit_length(),
             im_.hi().bit_length(), o.re_.lo().bit_length(), o.re_.hi().bit_length(), 53})) + 32;
    RealInterval n = o.re_.sqr() + o.im_.sqr(); // positive since o excludes 0
    ComplexBox num = *this * o.conj();
    return ComplexBox(num.re_.div(n, bits), num.im_.div(n, bits));
}

ComplexBox ComplexBox::scale(const GaussianRational& z, long bits) const {
    if (z.is_real())
        return ComplexBox(re_.scale(z.re(), bits), im_.scale(z.re(), bits));
    return ComplexBox(re_.scale(z.re(), bits) - im_.scale(z.im(), bits),
                      re_.scale(z.im(), bits) + im_.scale(z.re(), bits));
}

std::string ComplexBox::to_string(std::size_t digits) const {
    if (im_.lo().is_zero() && im_.hi().is_zero()) return re_.to_string(digits);
    return re_.to_string(digits) + " + " + im_.to_string(digits) + " i";
}

ComplexBox box_add(const ComplexBox& x, const ComplexBox& y) { return x + y; }
ComplexBox box_mul(const ComplexBox& x, const ComplexBox& y) { return x * y; }
ComplexBox box_div(const ComplexBox& x, const ComplexBox& y, long bits) { return x.div(y, bits); }

ComplexBox box_pow(const ComplexBox& x, unsigned long k) {
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

} // namespace odecert
