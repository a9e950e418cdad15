#pragma once

#include "posapprox/certified_real.hpp"

namespace posapprox {

/// Exact element a + b*tau of Q(tau), tau = (1 + sqrt 5) / 2, with tau^2 = tau + 1.
class GoldenNumber {
public:
    GoldenNumber() = default;
    GoldenNumber(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}
    GoldenNumber(long a) : a_(a), b_(0) {}

    static GoldenNumber tau() { return {Rational(0), Rational(1)}; }

    const Rational& rational_part() const { return a_; }
    const Rational& tau_part() const { return b_; }
    bool is_rational() const { return sgn(b_) == 0; }

    friend GoldenNumber operator+(const GoldenNumber& x, const GoldenNumber& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
    friend GoldenNumber operator-(const GoldenNumber& x, const GoldenNumber& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
    friend GoldenNumber operator-(const GoldenNumber& x) { return {-x.a_, -x.b_}; }
    friend GoldenNumber operator*(const GoldenNumber& x, const GoldenNumber& y)
    {
        const Rational bd = x.b_ * y.b_;
        return {x.a_ * y.a_ + bd, x.a_ * y.b_ + x.b_ * y.a_ + bd};
    }

    /// Field norm a^2 + ab - b^2; zero only for zero.
    Rational norm() const { return a_ * a_ + a_ * b_ - b_ * b_; }
    /// Image under tau -> 1 - tau.
    GoldenNumber conjugate() const { return {a_ + b_, -b_}; }

    GoldenNumber inverse() const
    {
        const Rational n = norm();
        if (sgn(n) == 0) {
            throw InvalidArgument("inverse of zero in Q(tau)");
        }
        const GoldenNumber c = conjugate();
        return {c.a_ / n, c.b_ / n};
    }
    friend GoldenNumber operator/(const GoldenNumber& x, const GoldenNumber& y) { return x * y.inverse(); }

    friend bool operator==(const GoldenNumber& x, const GoldenNumber& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

    /// Enclosure of width <= 2^-bits.
    RationalInterval enclose(unsigned long bits) const
    {
        if (is_rational()) {
            return RationalInterval(a_);
        }
        // |b| * width(tau) <= 2^-bits
        const unsigned long extra = detail::bit_length(detail::ceil_q(Rational(detail::iabs(b_.get_num()), b_.get_den()))) + 1;
        return golden_ratio().enclosure(bits + extra) * b_ + a_;
    }

private:
    Rational a_{0};
    Rational b_{0};
};

} // namespace posapprox
