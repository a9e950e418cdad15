#pragma once

#include <mpfr.h>

#include <algorithm>

#include "posapprox/golden.hpp"

namespace posapprox {

namespace detail {

class Mpfr {
public:
    explicit Mpfr(unsigned long prec) { mpfr_init2(v_, static_cast<mpfr_prec_t>(prec)); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Rational to_rational() const
    {
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

} // namespace detail

/// Outward-rounded enclosure of base^exponent over the whole box, base > 0.
/// x^y is monotone in each argument on x > 0, so the extremes are at corners;
/// MPFR's correctly rounded pow with directed rounding makes the bounds rigorous.
inline RationalInterval pow_enclosure(const RationalInterval& base, const RationalInterval& exponent,
                                      unsigned long prec)
{
    if (sgn(base.lo()) <= 0) {
        throw InvalidArgument("pow_enclosure needs a positive base");
    }
    prec = std::max<unsigned long>(prec, 64);
    detail::Mpfr bl(prec), bh(prec), el(prec), eh(prec), t(prec);
    mpfr_set_q(bl.get(), base.lo().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(bh.get(), base.hi().get_mpq_t(), MPFR_RNDU);
    mpfr_set_q(el.get(), exponent.lo().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(eh.get(), exponent.hi().get_mpq_t(), MPFR_RNDU);
    if (mpfr_sgn(bl.get()) <= 0) {
        throw InvalidArgument("pow_enclosure base underflow");
    }
    Rational lo, hi;
    bool first = true;
    for (mpfr_srcptr b : {bl.get(), bh.get()}) {
        for (mpfr_srcptr e : {el.get(), eh.get()}) {
            mpfr_pow(t.get(), b, e, MPFR_RNDD);
            const Rational down = t.to_rational();
            mpfr_pow(t.get(), b, e, MPFR_RNDU);
            const Rational up = t.to_rational();
            if (first) {
                lo = down;
                hi = up;
                first = false;
            } else {
                lo = std::min(lo, down);
                hi = std::max(hi, up);
            }
        }
    }
    return {lo, hi};
}

/// base^exponent for a positive rational base and an exponent in Q(tau). The
/// enclosure width shrinks to zero as `bits` grows.
inline RationalInterval power(const Rational& base, const GoldenNumber& exponent, unsigned long bits)
{
    if (exponent.is_rational() && exponent.rational_part().get_den() == 1) {
        const Integer& e = exponent.rational_part().get_num();
        if (!e.fits_slong_p()) {
            throw InvalidArgument("exponent out of range");
        }
        const long k = e.get_si();
        const unsigned long u = static_cast<unsigned long>(k < 0 ? -k : k);
        Integer num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), u);
        mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), u);
        Rational r = k < 0 ? Rational(den, num) : Rational(num, den);
        r.canonicalize();
        return RationalInterval(r);
    }
    const unsigned long mag = detail::bit_length(detail::ceil_q(base)) + 8;
    return pow_enclosure(RationalInterval(base), exponent.enclose(bits + mag), bits + 2 * mag)
        .rounded_outward(bits + 2 * mag);
}

inline RationalInterval power(const Integer& base, const GoldenNumber& exponent, unsigned long bits)
{
    return power(Rational(base), exponent, bits);
}

} // namespace posapprox
