#pragma once

#include "odecert/dyadic.hpp"
#include "odecert/gaussian_rational.hpp"

#include <optional>
#include <string>

namespace odecert {

// Closed real interval with dyadic endpoints. Addition, subtraction and
// multiplication are exact (dyadics are closed under them); division and
// rational scaling round outward at an explicit precision.
class RealInterval {
public:
    RealInterval() : lo_(), hi_() {}
    explicit RealInterval(const Dyadic& point) : lo_(point), hi_(point) {}
    RealInterval(Dyadic lo, Dyadic hi);

    static RealInterval from_rational(const mpq_class& q, long bits);
    static RealInterval from_rationals(const mpq_class& lo, const mpq_class& hi, long bits);
    static RealInterval hull(const RealInterval& a, const RealInterval& b);

    const Dyadic& lo() const { return lo_; }
    const Dyadic& hi() const { return hi_; }
    Dyadic width() const { return hi_ - lo_; }
    Dyadic mid() const { return (lo_ + hi_).mul_pow2(-1); }
    Dyadic rad_upper() const { return (hi_ - lo_).mul_pow2(-1).round_up(16); }

    bool is_point() const { return lo_ == hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const mpq_class& q) const;
    bool contains(const RealInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool strictly_contains(const RealInterval& o) const { return lo_ < o.lo_ && o.hi_ < hi_; }
    bool intersects(const RealInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
    std::optional<RealInterval> intersect(const RealInterval& o) const;

    // Upper bound for |x| over the interval; lower bound is 0 when 0 is inside.
    Dyadic mag_upper() const;
    Dyadic mag_lower() const;

    RealInterval operator-() const { return RealInterval(-hi_, -lo_); }
    RealInterval operator+(const RealInterval& o) const;
    RealInterval operator-(const RealInterval& o) const;
    RealInterval operator*(const RealInterval& o) const;
    RealInterval sqr() const;
    RealInterval div(const RealInterval& o, long bits) const;
    RealInterval scale(const mpq_class& q, long bits) const;
    RealInterval mul_pow2(long k) const { return RealInterval(lo_.mul_pow2(k), hi_.mul_pow2(k)); }

    RealInterval round_outward(long bits) const {
        return RealInterval(lo_.round_down(bits), hi_.round_up(bits));
    }
    RealInterval inflate(const Dyadic& r) const { return RealInterval(lo_ - r, hi_ + r); }

    std::string to_string(std::size_t digits = 12) const;

private:
    Dyadic lo_, hi_;
};

// Axis-aligned complex rectangle: the carrier for every enclosure the toolkit
// produces. width() is the max of the two component widths.
class ComplexBox {
public:
    ComplexBox() = default;
    explicit ComplexBox(RealInterval re) : re_(std::move(re)), im_() {}
    ComplexBox(RealInterval re, RealInterval im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexBox from_exact(const GaussianRational& z, long bits);
    static ComplexBox real_point(const Dyadic& x) { return ComplexBox(RealInterval(x)); }
    static ComplexBox point(const Dyadic& re, const Dyadic& im) {
        return ComplexBox(RealInterval(re), RealInterval(im));
    }
    static ComplexBox hull(const ComplexBox& a, const ComplexBox& b) {
        return ComplexBox(RealInterval::hull(a.re_, b.re_), RealInterval::hull(a.im_, b.im_));
    }

    const RealInterval& re() const { return re_; }
    const RealInterval& im() const { return im_; }

    Dyadic width() const {
        Dyadic wr = re_.width(), wi = im_.width();
        return wr >= wi ? wr : wi;
    }
    bool is_point() const { return re_.is_point() && im_.is_point(); }
    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool contains(const GaussianRational& z) const {
        return re_.contains(z.re()) && im_.contains(z.im());
    }
    bool contains(const ComplexBox& o) const { return re_.contains(o.re_) && im_.contains(o.im_); }
    bool strictly_contains(const ComplexBox& o) const {
        return re_.strictly_contains(o.re_) && im_.strictly_contains(o.im_);
    }
    bool intersects(const ComplexBox& o) const {
        return re_.intersects(o.re_) && im_.intersects(o.im_);
    }
    std::optional<ComplexBox> intersect(const ComplexBox& o) const;

    // 1-norm style modulus bounds: |z| <= |re| + |im| (upper), and a valid
    // lower bound that is positive iff the box certifiably excludes zero.
    Dyadic mag_upper() const { return re_.mag_upper() + im_.mag_upper(); }
    Dyadic mag_lower() const;

    ComplexBox operator-() const { return ComplexBox(-re_, -im_); }
    ComplexBox operator+(const ComplexBox& o) const { return ComplexBox(re_ + o.re_, im_ + o.im_); }
    ComplexBox operator-(const ComplexBox& o) const { return ComplexBox(re_ - o.re_, im_ - o.im_); }
    ComplexBox operator*(const ComplexBox& o) const;
    ComplexBox sqr() const;
    ComplexBox conj() const { return ComplexBox(re_, -im_); }
    ComplexBox div(const ComplexBox& o, long bits) const;
    ComplexBox scale(const GaussianRational& z, long bits) const;
    ComplexBox mul_pow2(long k) const { return ComplexBox(re_.mul_pow2(k), im_.mul_pow2(k)); }

    ComplexBox round_outward(long bits) const {
        return ComplexBox(re_.round_outward(bits), im_.round_outward(bits));
    }
    ComplexBox inflate(const Dyadic& r) const {
        return ComplexBox(re_.inflate(r), im_.inflate(r));
    }

    std::string to_string(std::size_t digits = 12) const;

private:
    RealInterval re_, im_;
};

// Spec-facing aliases for the primitive box operations.
ComplexBox box_add(const ComplexBox& x, const ComplexBox& y);
ComplexBox box_mul(const ComplexBox& x, const ComplexBox& y);
ComplexBox box_div(const ComplexBox& x, const ComplexBox& y, long bits = 0);

// x^k by binary powering (squaring keeps real-axis tightness).
ComplexBox box_pow(const ComplexBox& x, unsigned long k);

} // namespace odecert
