#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace odecert {

// Dyadic rational: mantissa * 2^exponent with arbitrary-size mantissa.
// Canonical form: mantissa is odd, or zero (with exponent 0), so equality
// is structural. Dyadics are closed under +, -, *; division is only offered
// with directed rounding.
class Dyadic {
public:
    Dyadic() : mant_(0), exp_(0) {}
    Dyadic(long v) : mant_(v), exp_(0) { canonicalize(); }
    Dyadic(mpz_class mant, long exp) : mant_(std::move(mant)), exp_(exp) { canonicalize(); }

    static Dyadic pow2(long e) { return Dyadic(mpz_class(1), e); }

    const mpz_class& mantissa() const { return mant_; }
    long exponent() const { return exp_; }

    bool is_zero() const { return mant_ == 0; }
    int sign() const { return sgn(mant_); }

    Dyadic operator-() const { return Dyadic(-mant_, exp_); }
    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const { return *this + (-o); }
    Dyadic operator*(const Dyadic& o) const { return Dyadic(mant_ * o.mant_, exp_ + o.exp_); }

    Dyadic mul_pow2(long k) const { return is_zero() ? Dyadic() : Dyadic(mant_, exp_ + k); }
    Dyadic abs() const { return sign() < 0 ? -*this : *this; }

    // Number of significant bits of the mantissa (0 for zero).
    std::size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(mant_.get_mpz_t(), 2); }

    // Directed rounding to at most `bits` significant mantissa bits.
    Dyadic round_down(long bits) const; // toward -infinity
    Dyadic round_up(long bits) const;   // toward +infinity

    static int cmp(const Dyadic& a, const Dyadic& b);
    bool operator==(const Dyadic& o) const { return mant_ == o.mant_ && exp_ == o.exp_; }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
    bool operator<(const Dyadic& o) const { return cmp(*this, o) < 0; }
    bool operator<=(const Dyadic& o) const { return cmp(*this, o) <= 0; }
    bool operator>(const Dyadic& o) const { return cmp(*this, o) > 0; }
    bool operator>=(const Dyadic& o) const { return cmp(*this, o) >= 0; }

    mpq_class to_rational() const;
    static Dyadic from_rational_down(const mpq_class& q, long bits);
    static Dyadic from_rational_up(const mpq_class& q, long bits);
    // Exact conversion; throws if q is not dyadic (denominator not a power of two).
    static Dyadic from_rational_exact(const mpq_class& q);
    static bool rational_is_dyadic(const mpq_class& q);

    // ceil(log2 |x|) for x != 0: the least k with |x| <= 2^k.
    long ceil_log2_abs() const;

    double to_double() const; // best-effort, for diagnostics only

    // Decimal rendering with directed rounding; used when printing interval
    // endpoints so the printed interval still contains the exact one.
    std::string to_decimal(std::size_t digits, bool round_up_dir) const;
    std::string to_string() const; // exact "m*2^e" form

private:
    void canonicalize();

    mpz_class mant_;
    long exp_;
};

} // namespace odecert
