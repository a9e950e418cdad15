#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>

#include "posapprox/errors.hpp"

namespace posapprox {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

inline Integer pow2(unsigned long k)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
    return r;
}

inline Integer pow10(unsigned long k)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

inline Integer floor_q(const Rational& q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_q(const Rational& q)
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// q * 2^k, exact.
inline Rational mul_2exp(const Rational& q, long k)
{
    Rational r;
    if (k >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(k));
    } else {
        mpq_div_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-k));
    }
    return r;
}

inline Rational dyadic(const Integer& num, unsigned long k)
{
    Rational r(num, pow2(k));
    r.canonicalize();
    return r;
}

inline Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer big(long long v) { return Integer(static_cast<long>(v)); }

} // namespace detail

enum class Rounding { Down, Up };

/// Decimal rendering of an exact rational, rounded in the given direction to
/// `sig_digits` significant digits. The output is scientific ("1.25e-3") and
/// deterministic; a Down-rounded string never exceeds q, an Up-rounded one is
/// never below q.
inline std::string decimal_string(const Rational& q, int sig_digits, Rounding dir)
{
    if (sgn(q) == 0) {
        return "0";
    }
    const bool neg = sgn(q) < 0;
    const Rational a = neg ? Rational(-q) : q;
    // Magnitude rounding direction: toward zero for (Down, positive) or (Up, negative).
    const bool mag_up = (dir == Rounding::Up) != neg;

    // Find e with 10^e <= a < 10^(e+1).
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
    auto scaled = [&](long shift) {
        // a * 10^shift
        if (shift >= 0) {
            return Rational(a * Rational(detail::pow10(static_cast<unsigned long>(shift))));
        }
        return Rational(a / Rational(detail::pow10(static_cast<unsigned long>(-shift))));
    };
    while (scaled(-e) >= 10) {
        ++e;
    }
    while (scaled(-e) < 1) {
        --e;
    }
    const long shift = sig_digits - 1 - e;
    const Rational s = scaled(shift);
    Integer n = mag_up ? detail::ceil_q(s) : detail::floor_q(s);
    const Integer limit = detail::pow10(static_cast<unsigned long>(sig_digits));
    if (n >= limit) {
        // Rounded up across a power of ten.
        n /= 10;
        ++e;
    }
    std::string digits = n.get_str();
    while (digits.size() > 1 && digits.back() == '0') {
        digits.pop_back();
    }
    std::string out;
    if (neg) {
        out += '-';
    }
    out += digits[0];
    if (digits.size() > 1) {
        out += '.';
        out.append(digits, 1, std::string::npos);
    }
    if (e != 0) {
        out += 'e';
        out += std::to_string(e);
    }
    return out;
}

/// Closed interval [lo, hi] with exact rational endpoints.
class RationalInterval {
public:
    RationalInterval() = default;
    explicit RationalInterval(const Rational& point) : lo_(point), hi_(point) {}
    RationalInterval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        if (lo_ > hi_) {
            throw InvalidArgument("interval with lo > hi");
        }
    }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational midpoint() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool strictly_below(const Rational& x) const { return hi_ < x; }
    bool strictly_above(const Rational& x) const { return lo_ > x; }
    /// True when every point of *this is below every point of o.
    bool strictly_below(const RationalInterval& o) const { return hi_ < o.lo_; }

    /// Width bounded by 2^-bits.
    bool width_at_most_2exp(unsigned long bits) const
    {
        return detail::mul_2exp(width(), static_cast<long>(bits)) <= 1;
    }

    /// Outward rounding onto the dyadic grid 2^-bits; keeps denominators small.
    RationalInterval rounded_outward(unsigned long bits) const
    {
        const auto k = static_cast<long>(bits);
        Integer l = detail::floor_q(detail::mul_2exp(lo_, k));
        Integer h = detail::ceil_q(detail::mul_2exp(hi_, k));
        return {detail::dyadic(l, bits), detail::dyadic(h, bits)};
    }

    RationalInterval hull(const RationalInterval& o) const
    {
        return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
    }

    friend RationalInterval operator-(const RationalInterval& a) { return {-a.hi_, -a.lo_}; }
    friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b)
    {
        return {a.lo_ + b.lo_, a.hi_ + b.hi_};
    }
    friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b)
    {
        return {a.lo_ - b.hi_, a.hi_ - b.lo_};
    }
    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b)
    {
        const Rational p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
    }
    friend RationalInterval operator*(const RationalInterval& a, const Rational& s)
    {
        if (sgn(s) >= 0) {
            return {a.lo_ * s, a.hi_ * s};
        }
        return {a.hi_ * s, a.lo_ * s};
    }
    friend RationalInterval operator*(const Rational& s, const RationalInterval& a) { return a * s; }
    friend RationalInterval operator+(const RationalInterval& a, const Rational& s)
    {
        return {a.lo_ + s, a.hi_ + s};
    }
    friend RationalInterval operator-(const RationalInterval& a, const Rational& s)
    {
        return {a.lo_ - s, a.hi_ - s};
    }
    friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b)
    {
        if (b.contains(Rational(0))) {
            throw InvalidArgument("interval division by an interval containing zero");
        }
        return a * RationalInterval(1 / b.hi_, 1 / b.lo_);
    }
    friend RationalInterval operator/(const RationalInterval& a, const Rational& s)
    {
        if (sgn(s) == 0) {
            throw InvalidArgument("interval division by zero");
        }
        return a * Rational(1 / s);
    }

    friend bool operator==(const RationalInterval& a, const RationalInterval& b)
    {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    friend std::ostream& operator<<(std::ostream& os, const RationalInterval& v)
    {
        return os << '[' << decimal_string(v.lo_, 20, Rounding::Down) << ", "
                  << decimal_string(v.hi_, 20, Rounding::Up) << ']';
    }

private:
    Rational lo_{0};
    Rational hi_{0};
};

/// Enclosure of |x| over the interval.
inline RationalInterval abs(const RationalInterval& v)
{
    if (sgn(v.lo()) >= 0) {
        return v;
    }
    if (sgn(v.hi()) <= 0) {
        return -v;
    }
    return {Rational(0), std::max(Rational(-v.lo()), v.hi())};
}

} // namespace posapprox
