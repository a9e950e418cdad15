#pragma once

#include <vector>

#include "posapprox/interval.hpp"

namespace posapprox {

/// Dense univariate polynomial over Q, coefficients in increasing degree.
/// The zero polynomial is the empty vector.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial from_integers(const std::vector<Integer>& coeffs)
    {
        std::vector<Rational> c;
        c.reserve(coeffs.size());
        for (const auto& z : coeffs) {
            c.emplace_back(z);
        }
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const { return c_.back(); }

    Rational operator()(const Rational& x) const
    {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

    int sign_at(const Rational& x) const { return sgn((*this)(x)); }

    Polynomial derivative() const
    {
        if (c_.size() <= 1) {
            return {};
        }
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) {
            d[i - 1] = c_[i] * static_cast<long>(i);
        }
        return Polynomial(std::move(d));
    }

    /// Euclidean division: *this = q * div + r.
    void divmod(const Polynomial& div, Polynomial& q, Polynomial& r) const
    {
        if (div.is_zero()) {
            throw InvalidArgument("polynomial division by zero");
        }
        std::vector<Rational> rem = c_;
        const int dd = div.degree();
        std::vector<Rational> quo(degree() >= dd ? static_cast<std::size_t>(degree() - dd + 1) : 0);
        for (int k = degree(); k >= dd; --k) {
            const Rational f = rem[static_cast<std::size_t>(k)] / div.leading();
            quo[static_cast<std::size_t>(k - dd)] = f;
            for (int j = 0; j <= dd; ++j) {
                rem[static_cast<std::size_t>(k - dd + j)] -= f * div.c_[static_cast<std::size_t>(j)];
            }
        }
        q = Polynomial(std::move(quo));
        r = Polynomial(std::move(rem));
    }

    Polynomial operator%(const Polynomial& div) const
    {
        Polynomial q, r;
        divmod(div, q, r);
        return r;
    }

    Polynomial operator/(const Polynomial& div) const
    {
        Polynomial q, r;
        divmod(div, q, r);
        return q;
    }

    Polynomial operator-() const
    {
        std::vector<Rational> n = c_;
        for (auto& x : n) {
            x = -x;
        }
        return Polynomial(std::move(n));
    }

    Polynomial monic() const
    {
        std::vector<Rational> n = c_;
        for (auto& x : n) {
            x /= leading();
        }
        return Polynomial(std::move(n));
    }

    friend Polynomial gcd(Polynomial a, Polynomial b)
    {
        while (!b.is_zero()) {
            Polynomial r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.is_zero() ? a : a.monic();
    }

    /// P / gcd(P, P'): same roots, all simple.
    Polynomial squarefree_part() const
    {
        const Polynomial g = gcd(*this, derivative());
        if (g.degree() <= 0) {
            return *this;
        }
        return *this / g;
    }

    /// Number of distinct real roots in (a, b], by Sturm's theorem.
    /// Requires P(a) != 0 and P(b) != 0.
    int count_roots(const Rational& a, const Rational& b) const
    {
        std::vector<Polynomial> seq{*this, derivative()};
        while (!seq.back().is_zero()) {
            Polynomial r = -(seq[seq.size() - 2] % seq.back());
            if (r.is_zero()) {
                break;
            }
            seq.push_back(std::move(r));
        }
        auto variations = [&](const Rational& x) {
            int v = 0, prev = 0;
            for (const auto& p : seq) {
                const int s = p.sign_at(x);
                if (s != 0) {
                    if (prev != 0 && s != prev) {
                        ++v;
                    }
                    prev = s;
                }
            }
            return v;
        };
        return variations(a) - variations(b);
    }

private:
    void trim()
    {
        while (!c_.empty() && sgn(c_.back()) == 0) {
            c_.pop_back();
        }
    }

    std::vector<Rational> c_;
};

} // namespace posapprox
