#include "odecert/dyadic.hpp"

#include "odecert/errors.hpp"

#include <algorithm>
#include <cmath>

namespace odecert {

void Dyadic::canonicalize() {
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    unsigned long tz = mpz_scan1(mant_.get_mpz_t(), 0);
    if (tz > 0) {
        mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), tz);
        exp_ += static_cast<long>(tz);
    }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    long e = std::min(exp_, o.exp_);
    mpz_class a = mant_;
    mpz_class b = o.mant_;
    if (exp_ > e) mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(exp_ - e));
    if (o.exp_ > e) mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(o.exp_ - e));
    return Dyadic(a + b, e);
}

Dyadic Dyadic::round_down(long bits) const {
    if (bits < 1) bits = 1;
    std::size_t len = bit_length();
    if (len <= static_cast<std::size_t>(bits)) return *this;
    unsigned long drop = static_cast<unsigned long>(len - static_cast<std::size_t>(bits));
    mpz_class m;
    mpz_fdiv_q_2exp(m.get_mpz_t(), mant_.get_mpz_t(), drop); // floor
    return Dyadic(m, exp_ + static_cast<long>(drop));
}

Dyadic Dyadic::round_up(long bits) const {
    if (bits < 1) bits = 1;
    std::size_t len = bit_length();
    if (len <= static_cast<std::size_t>(bits)) return *this;
    unsigned long drop = static_cast<unsigned long>(len - static_cast<std::size_t>(bits));
    mpz_class m;
    mpz_cdiv_q_2exp(m.get_mpz_t(), mant_.get_mpz_t(), drop); // ceil
    return Dyadic(m, exp_ + static_cast<long>(drop));
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    return (a - b).sign();
}

mpq_class Dyadic::to_rational() const {
    mpq_class q(mant_);
    if (exp_ >= 0) {
        mpz_class two_e;
        mpz_ui_pow_ui(two_e.get_mpz_t(), 2, static_cast<unsigned long>(exp_));
        q *= mpq_class(two_e);
    } else {
        mpz_class two_e;
        mpz_ui_pow_ui(two_e.get_mpz_t(), 2, static_cast<unsigned long>(-exp_));
        q /= mpq_class(two_e);
    }
    q.canonicalize();
    return q;
}

static Dyadic from_rational_directed(const mpq_class& q, long bits, bool up) {
    if (q == 0) return Dyadic();
    if (bits < 1) bits = 1;
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    long la = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
    long lb = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    // shift so the quotient mantissa carries ~bits+2 significant bits
    long s = bits - (la - lb) + 2;
    mpz_class n = num, d = den;
    if (s >= 0)
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(s));
    else
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(-s));
    mpz_class m;
    if (up)
        mpz_cdiv_q(m.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    else
        mpz_fdiv_q(m.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return Dyadic(m, -s);
}

Dyadic Dyadic::from_rational_down(const mpq_class& q, long bits) {
    return from_rational_directed(q, bits, false);
}

Dyadic Dyadic::from_rational_up(const mpq_class& q, long bits) {
    return from_rational_directed(q, bits, true);
}

bool Dyadic::rational_is_dyadic(const mpq_class& q) {
    mpz_class den = q.get_den();
    if (den == 1) return true;
    unsigned long tz = mpz_scan1(den.get_mpz_t(), 0);
    mpz_class odd;
    mpz_fdiv_q_2exp(odd.get_mpz_t(), den.get_mpz_t(), tz);
    return odd == 1;
}

Dyadic Dyadic::from_rational_exact(const mpq_class& q) {
    if (!rational_is_dyadic(q))
        throw validation_error("rational " + q.get_str() + " is not a dyadic");
    mpz_class den = q.get_den();
    unsigned long tz = (den == 1) ? 0 : mpz_scan1(den.get_mpz_t(), 0);
    return Dyadic(q.get_num(), -static_cast<long>(tz));
}

long Dyadic::ceil_log2_abs() const {
    if (is_zero()) throw internal_error("ceil_log2_abs of zero");
    long len = static_cast<long>(bit_length());
    // |mant| <= 2^len with equality iff mant = +-2^len; mant is odd so
    // |mant| = 1 exactly when len = 1.
    mpz_class a = ::abs(mant_);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(len - 1));
    if (a == p) return exp_ + len - 1; // power of two exactly
    return exp_ + len;
}

double Dyadic::to_double() const {
    if (is_zero()) return 0.0;
    // clamp the exponent so the conversion does not overflow silently
    Dyadic r = round_down(64);
    double m = r.mantissa().get_d();
    return std::ldexp(m, static_cast<int>(r.exponent()));
}

std::string Dyadic::to_decimal(std::size_t digits, bool up) const {
    if (is_zero()) return "0";
    // value * 10^digits, rounded in the requested direction, then re-insert the point
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    mpz_class num = mant_ * pow10;
    mpz_class scaled;
    if (exp_ >= 0) {
        mpz_mul_2exp(scaled.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(exp_));
    } else {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(-exp_));
        if (up)
            mpz_cdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        else
            mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    bool neg = scaled < 0;
    mpz_class a = ::abs(scaled);
    std::string s = a.get_str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
    if (digits == 0) s.pop_back();
    return (neg ? "-" : "") + s;
}

std::string Dyadic::to_string() const {
    return mant_.get_str() + "*2^" + std::to_string(exp_);
}

} // namespace odecert
