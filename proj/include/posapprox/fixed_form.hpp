#pragma once

#include <cstdint>
#include <limits>

#include "posapprox/certified_real.hpp"

namespace posapprox {

using u128 = unsigned __int128;

namespace detail {

inline Integer to_integer(u128 v)
{
    Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
    Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
    return (hi << 64) + lo;
}

inline constexpr u128 kU128Max = std::numeric_limits<u128>::max();

// Integer in [0, 2^128) to u128; saturates above.
inline u128 to_u128_saturating(const Integer& z)
{
    if (sgn(z) <= 0) {
        return 0;
    }
    if (mpz_sizeinbase(z.get_mpz_t(), 2) > 128) {
        return kU128Max;
    }
    const Integer hi = z >> 64;
    const Integer lo = z - (hi << 64);
    return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

inline u128 sat_add(u128 a, u128 b) { return a > kU128Max - b ? kU128Max : a + b; }

inline u128 sat_mul(u128 a, std::uint64_t n)
{
    if (n != 0 && a > kU128Max / n) {
        return kU128Max;
    }
    return a * n;
}

inline std::uint64_t uabs(long long v)
{
    return v < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

} // namespace detail

/// Rigorous fast estimate of ||n1*a1 + n2*a2|| in units of 2^-128.
///
/// The fractional parts of a1, a2 are stored as 128-bit fixed point numbers;
/// sums wrap modulo 2^128, which is reduction modulo 1. `theta` bounds the
/// per-coefficient representation error, so the true distance lies within
/// |n1|*theta1 + |n2|*theta2 units of the computed one.
class FixedPointForm {
public:
    static constexpr unsigned kFracBits = 128;

    struct Estimate {
        u128 dist = 0;
        u128 err = 0;
        u128 lower() const { return dist > err ? dist - err : 0; }
        u128 upper() const { return detail::sat_add(dist, err); }
    };

    FixedPointForm(const CertifiedReal& a1, const CertifiedReal& a2, unsigned long bits = 192)
    {
        init(a1.best_enclosure(bits), a1_, theta1_);
        init(a2.best_enclosure(bits), a2_, theta2_);
    }

    Estimate eval(long long n1, long long n2) const
    {
        const u128 s = static_cast<u128>(static_cast<__int128>(n1)) * a1_ +
                       static_cast<u128>(static_cast<__int128>(n2)) * a2_;
        const u128 neg = u128(0) - s;
        Estimate e;
        e.dist = s < neg ? s : neg;
        e.err = detail::sat_add(detail::sat_add(detail::sat_mul(theta1_, detail::uabs(n1)),
                                                detail::sat_mul(theta2_, detail::uabs(n2))),
                                2);
        return e;
    }

    /// floor(q * 2^128), clamped to [0, 2^128).
    static u128 units_floor(const Rational& q)
    {
        return detail::to_u128_saturating(detail::floor_q(detail::mul_2exp(q, kFracBits)));
    }
    static u128 units_ceil(const Rational& q)
    {
        return detail::to_u128_saturating(detail::ceil_q(detail::mul_2exp(q, kFracBits)));
    }
    static Rational to_rational(u128 units) { return detail::dyadic(detail::to_integer(units), kFracBits); }

private:
    static void init(const RationalInterval& iv, u128& frac, u128& theta)
    {
        const Integer whole = detail::floor_q(iv.lo());
        const Rational lo = iv.lo() - Rational(whole);
        const Rational hi = iv.hi() - Rational(whole);
        const Integer f = detail::floor_q(detail::mul_2exp(lo, kFracBits));
        const Integer c = detail::ceil_q(detail::mul_2exp(hi, kFracBits));
        frac = detail::to_u128_saturating(f);
        theta = detail::to_u128_saturating(Integer(c - f));
    }

    u128 a1_ = 0, a2_ = 0;
    u128 theta1_ = 0, theta2_ = 0;
};

} // namespace posapprox
