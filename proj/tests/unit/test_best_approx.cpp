#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "posapprox/report.hpp"

using namespace posapprox;
using fixtures::to_real;

namespace {

void expect_matches_oracle(const fixtures::Pair& p, long long H)
{
    const auto& seq = fixtures::sequence(p, H);
    const auto expect = oracle::best_approximations(p.a1, p.a2, H);
    ASSERT_EQ(seq.size(), expect.size()) << p.name;
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const auto& b = seq.items[i];
        EXPECT_EQ(b.nu, i + 1);
        EXPECT_EQ(b.m0, detail::big(expect[i].m0)) << p.name << " nu=" << i + 1;
        EXPECT_EQ(b.m1, detail::big(expect[i].m1)) << p.name << " nu=" << i + 1;
        EXPECT_EQ(b.m2, detail::big(expect[i].m2)) << p.name << " nu=" << i + 1;
        EXPECT_EQ(b.height, detail::big(expect[i].height)) << p.name << " nu=" << i + 1;
        EXPECT_LE(to_real(b.zeta.lo()), expect[i].zeta);
        EXPECT_GE(to_real(b.zeta.hi()), expect[i].zeta);
    }
}

} // namespace

TEST(Enumerate, HeightOne)
{
    const auto& seq = fixtures::sequence(fixtures::sqrt_pair(), 1);
    ASSERT_EQ(seq.size(), 1U);
    // (1,0): 0.414, (0,1): 0.268, (1,-1): 0.318, (1,1): 0.146
    EXPECT_EQ(seq.at(1).m1, 1);
    EXPECT_EQ(seq.at(1).m2, 1);
    EXPECT_EQ(seq.at(1).m0, -3);
    EXPECT_EQ(seq.at(1).height, 1);
}

TEST(Enumerate, MatchesOracleSqrtPair) { expect_matches_oracle(fixtures::sqrt_pair(), 100); }
TEST(Enumerate, MatchesOracleCubicPair) { expect_matches_oracle(fixtures::cubic_pair(), 100); }

TEST(Enumerate, MatchesOracleNearRationalPairs)
{
    const auto pairs = fixtures::near_rational_pairs();
    for (std::size_t i = 0; i < pairs.size(); i += 7) {
        expect_matches_oracle(pairs[i], 60);
    }
}

TEST(Enumerate, RationallyDependentInputExhaustsPrecision)
{
    const auto third = CertifiedReal::parse("rat:1/3");
    const auto s2 = CertifiedReal::parse(fixtures::kSqrt2);
    EXPECT_THROW(enumerate_best_approximations(third, s2, 10, PrecisionSchedule{128, 1024}), PrecisionExhausted);
    EXPECT_THROW(enumerate_best_approximations(s2, s2, 0), InvalidArgument);
}

TEST(Enumerate, StrictlyMonotone)
{
    for (const auto& p : {fixtures::sqrt_pair(), fixtures::cubic_pair()}) {
        const auto& seq = fixtures::sequence(p, 2000);
        ASSERT_GE(seq.size(), 5U);
        for (std::size_t nu = 1; nu < seq.size(); ++nu) {
            EXPECT_LT(seq.at(nu).height, seq.at(nu + 1).height);
            EXPECT_TRUE(seq.at(nu + 1).zeta.strictly_below(seq.at(nu).zeta)) << p.name << " nu=" << nu;
        }
        for (const auto& b : seq.items) {
            EXPECT_TRUE(b.m1 > 0 || (b.m1 == 0 && b.m2 > 0));
        }
    }
}

TEST(Enumerate, PrefixStable)
{
    const auto p = fixtures::cubic_pair();
    const auto& small = fixtures::sequence(p, 300);
    const auto& large = fixtures::sequence(p, 2000);
    ASSERT_LE(small.size(), large.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        EXPECT_TRUE(small.items[i].same_vector(large.items[i]));
    }
}

TEST(Minkowski, HoldsForBothPairs)
{
    for (const auto& p : {fixtures::sqrt_pair(), fixtures::cubic_pair()}) {
        const auto& seq = fixtures::sequence(p, 2000);
        const auto res = minkowski_check(seq);
        ASSERT_EQ(res.size(), seq.size() - 1);
        for (const auto& r : res) {
            EXPECT_TRUE(r.holds) << p.name << " nu=" << r.nu;
        }
    }
}

TEST(Minkowski, SingleItemGivesNoChecks)
{
    EXPECT_TRUE(minkowski_check(fixtures::sequence(fixtures::sqrt_pair(), 1)).empty());
}

TEST(Determinant, Examples)
{
    BestApproximation a, b, c;
    a.m0 = 1, a.m1 = 0, a.m2 = 0;
    b.m0 = 0, b.m1 = 1, b.m2 = 0;
    c.m0 = 0, c.m1 = 0, c.m2 = 1;
    EXPECT_EQ(determinant3(a, b, c), 1);
    EXPECT_EQ(determinant3(b, a, c), -1);
    EXPECT_TRUE(det_condition(a, b, c));
    c.m0 = 2, c.m1 = 3, c.m2 = 0;
    EXPECT_FALSE(det_condition(a, b, c));

    b.m1 = 3, b.m2 = -2;
    c.m1 = 5, c.m2 = 7;
    EXPECT_EQ(d_nu(b, c), 31);
    EXPECT_EQ(d_nu(c, b), 31);
}

TEST(Determinant, FirstIndependentTripleMatchesOracle)
{
    for (const auto& p : {fixtures::sqrt_pair(), fixtures::cubic_pair()}) {
        const auto& seq = fixtures::sequence(p, 2000);
        const auto expect = oracle::best_approximations(p.a1, p.a2, 300);
        std::optional<long long> oracle_det;
        for (std::size_t i = 0; i + 2 < expect.size() && !oracle_det; ++i) {
            const auto& x = expect[i];
            const auto& y = expect[i + 1];
            const auto& z = expect[i + 2];
            const long long d = x.m0 * (y.m1 * z.m2 - y.m2 * z.m1) - x.m1 * (y.m0 * z.m2 - y.m2 * z.m0) +
                                x.m2 * (y.m0 * z.m1 - y.m1 * z.m0);
            if (d != 0) {
                oracle_det = d;
            }
        }
        ASSERT_TRUE(oracle_det.has_value()) << p.name;
        std::optional<Integer> got;
        for (std::size_t nu = 2; nu + 1 <= seq.size() && !got; ++nu) {
            if (det_condition(seq.at(nu - 1), seq.at(nu), seq.at(nu + 1))) {
                got = determinant3(seq.at(nu - 1), seq.at(nu), seq.at(nu + 1));
            }
        }
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, detail::big(*oracle_det)) << p.name;
    }
}

TEST(Symmetry, SwappingInputsSwapsCoefficients)
{
    const auto p = fixtures::cubic_pair();
    const auto& seq = fixtures::sequence(p, 500);
    const auto swapped = enumerate_best_approximations(p.alpha2(), p.alpha1(), 500);
    ASSERT_EQ(seq.size(), swapped.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& a = seq.items[i];
        const auto& b = swapped.items[i];
        const int s = b.m2 == a.m1 ? 1 : -1;
        EXPECT_EQ(b.m2, s * a.m1);
        EXPECT_EQ(b.m1, s * a.m2);
        EXPECT_EQ(b.m0, s * a.m0);
        EXPECT_EQ(a.height, b.height);
    }
}

TEST(Export, JsonLine)
{
    const auto& seq = fixtures::sequence(fixtures::sqrt_pair(), 1);
    const ojson j = to_json(seq.at(1));
    EXPECT_EQ(j["nu"], 1);
    EXPECT_EQ(j["m"], ojson::parse("[-3,1,1]"));
    EXPECT_EQ(j["M"], 1);
    EXPECT_EQ(j.dump().substr(0, 30), R"({"nu":1,"m":[-3,1,1],"M":1,"ze)");
    EXPECT_EQ(std::string(j["zeta_lo"]).substr(0, 12), "1.4626436994");
}
