#pragma once

#include <gmpxx.h>

#include <string>

namespace odecert {

// Exact complex number with rational real and imaginary parts: the coefficient
// field for ODE data. Both parts are kept canonical (lowest terms, positive
// denominator), so equality is structural.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long v) : re_(v), im_(0) {}
    GaussianRational(mpq_class re) : re_(std::move(re)), im_(0) { re_.canonicalize(); }
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }
    GaussianRational(long num, long den);

    static GaussianRational i() { return GaussianRational(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }

    GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
    GaussianRational operator+(const GaussianRational& o) const {
        return GaussianRational(re_ + o.re_, im_ + o.im_);
    }
    GaussianRational operator-(const GaussianRational& o) const {
        return GaussianRational(re_ - o.re_, im_ - o.im_);
    }
    GaussianRational operator*(const GaussianRational& o) const {
        return GaussianRational(re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_);
    }
    GaussianRational operator/(const GaussianRational& o) const;

    GaussianRational conj() const { return GaussianRational(re_, -im_); }
    mpq_class norm_sq() const { return re_ * re_ + im_ * im_; } // |z|^2, exact
    GaussianRational inverse() const;

    bool operator==(const GaussianRational& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    // Total order (lexicographic on (re, im)); used only for canonical sorting.
    static int cmp(const GaussianRational& a, const GaussianRational& b);

    std::string to_string() const;

private:
    mpq_class re_, im_;
};

GaussianRational pow(const GaussianRational& base, unsigned long k);

} // namespace odecert
