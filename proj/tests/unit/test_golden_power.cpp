#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "posapprox/fixed_form.hpp"
#include "posapprox/real_power.hpp"

using namespace posapprox;
using fixtures::to_real;

TEST(GoldenNumber, FieldIdentities)
{
    const GoldenNumber t = GoldenNumber::tau();
    EXPECT_EQ(t * t, t + 1);
    EXPECT_EQ(t * (t - 1), GoldenNumber(1));
    EXPECT_EQ(t.inverse(), t - 1);
    EXPECT_EQ(t.norm(), Rational(-1));
    EXPECT_THROW(GoldenNumber(0).inverse(), InvalidArgument);

    std::mt19937_64 rng(3);
    auto small = [&] {
        Rational q(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9));
        q.canonicalize();
        return q;
    };
    for (int i = 0; i < 100; ++i) {
        const GoldenNumber x(small(), small());
        if (sgn(x.norm()) == 0) {
            continue;
        }
        EXPECT_EQ(x * x.inverse(), GoldenNumber(1));
        EXPECT_EQ((x * t) / x, t);
    }
}

TEST(GoldenNumber, EnclosureMatchesOracle)
{
    const GoldenNumber x(Rational(-7, 3), Rational(5, 2));
    const RationalInterval v = x.enclose(100);
    EXPECT_TRUE(v.width_at_most_2exp(100));
    const oracle::Real exact = oracle::Real(-7) / 3 + oracle::Real(5) / 2 * oracle::tau();
    EXPECT_LE(to_real(v.lo()), exact);
    EXPECT_GE(to_real(v.hi()), exact);
    EXPECT_TRUE(GoldenNumber(Rational(3, 4)).enclose(10).is_point());
}

TEST(Power, IntegerExponentIsExact)
{
    EXPECT_EQ(power(Rational(2, 3), GoldenNumber(3), 64), RationalInterval(Rational(8, 27)));
    EXPECT_EQ(power(Rational(2, 3), GoldenNumber(-2), 64), RationalInterval(Rational(9, 4)));
    EXPECT_EQ(power(Integer(7), GoldenNumber(0), 64), RationalInterval(Rational(1)));
}

TEST(Power, GoldenExponentsAgainstOracle)
{
    using boost::multiprecision::pow;
    const GoldenNumber t = GoldenNumber::tau();
    const std::vector<std::pair<Rational, GoldenNumber>> cases{
        {Rational(2), t},
        {Rational(1000), t},
        {Rational(1, 7), t - 2},
        {Rational(123456789), 1 - t},
        {Rational(5, 3), GoldenNumber(Rational(1, 2), Rational(-3, 4))},
    };
    for (const auto& [b, e] : cases) {
        for (unsigned long bits : {32UL, 64UL, 200UL}) {
            const RationalInterval v = power(b, e, bits);
            const oracle::Real exact =
                pow(to_real(b), to_real(e.rational_part()) + to_real(e.tau_part()) * oracle::tau());
            EXPECT_LE(to_real(v.lo()), exact) << b << " @" << bits;
            EXPECT_GE(to_real(v.hi()), exact) << b << " @" << bits;
            const RationalInterval rel = v / RationalInterval(v.midpoint());
            EXPECT_TRUE((rel - Rational(1)).width_at_most_2exp(bits - 16)) << b << " @" << bits;
        }
    }
}

TEST(Power, EnclosureIsMonotoneInBox)
{
    const RationalInterval base(Rational(3, 2), Rational(5, 2));
    const RationalInterval expo(Rational(1, 3), Rational(2, 3));
    const RationalInterval v = pow_enclosure(base, expo, 128);
    // corners 1.5^(1/3) and 2.5^(2/3)
    EXPECT_LE(to_real(v.lo()), boost::multiprecision::pow(oracle::Real(1.5), oracle::Real(1) / 3));
    EXPECT_GE(to_real(v.hi()), boost::multiprecision::pow(oracle::Real(2.5), oracle::Real(2) / 3));
    EXPECT_THROW(pow_enclosure(RationalInterval(Rational(0), Rational(1)), expo, 64), InvalidArgument);
}

TEST(FixedPointForm, BoundsContainTrueDistance)
{
    const auto pair = fixtures::cubic_pair();
    const FixedPointForm f(pair.alpha1(), pair.alpha2());
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const long long n1 = static_cast<long long>(rng() % 2000001) - 1000000;
        const long long n2 = static_cast<long long>(rng() % 2000001) - 1000000;
        const auto e = f.eval(n1, n2);
        const oracle::Real d = oracle::dist(oracle::Real(n1) * pair.a1 + oracle::Real(n2) * pair.a2);
        EXPECT_LE(to_real(FixedPointForm::to_rational(e.lower())), d);
        EXPECT_GE(to_real(FixedPointForm::to_rational(e.upper())), d);
        EXPECT_LT(e.err, u128(1) << 64);
    }
}
