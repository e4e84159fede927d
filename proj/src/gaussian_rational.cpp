#include "odecert/gaussian_rational.hpp"

#include "odecert/errors.hpp"

namespace odecert {

GaussianRational::GaussianRational(long num, long den) : re_(num, den), im_(0) {
    if (den == 0) throw division_by_zero("rational with zero denominator");
    re_.canonicalize();
}

GaussianRational GaussianRational::inverse() const {
    if (is_zero()) throw division_by_zero("inverse of zero");
    mpq_class n = norm_sq();
    return GaussianRational(re_ / n, -im_ / n);
}

GaussianRational GaussianRational::operator/(const GaussianRational& o) const {
    return *this * o.inverse();
}

int GaussianRational::cmp(const GaussianRational& a, const GaussianRational& b) {
    int c = ::cmp(a.re_, b.re_);
    if (c != 0) return c;
    return ::cmp(a.im_, b.im_);
}

GaussianRational pow(const GaussianRational& base, unsigned long k) {
    GaussianRational acc(1);
    GaussianRational b = base;
    while (k > 0) {
        if (k & 1) acc = acc * b;
        b = b * b;
        k >>= 1;
    }
    return acc;
}

static std::string rat_str(const mpq_class& q) {
    return q.get_str();
}

std::string GaussianRational::to_string() const {
    if (im_ == 0) return rat_str(re_);
    std::string im_part = rat_str(im_ < 0 ? mpq_class(-im_) : im_) + "i";
    if (re_ == 0) return (im_ < 0 ? "-" : "") + im_part;
    return rat_str(re_) + (im_ < 0 ? "-" : "+") + im_part;
}

} // namespace odecert
