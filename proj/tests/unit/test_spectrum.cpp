#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "posapprox/report.hpp"

using namespace posapprox;
using fixtures::to_real;

namespace {

oracle::Real g_oracle(const oracle::Real& gamma)
{
    const oracle::Real t = oracle::tau();
    return t + (2 * t - 2) / (t * t * gamma - 2);
}

oracle::Real c_oracle(const oracle::Real& big_gamma, const oracle::Real& gamma)
{
    const oracle::Real t = oracle::tau();
    return 262144 * boost::multiprecision::pow(big_gamma, -1 / (t * t * gamma - 2));
}

struct ScanResult {
    oracle::Real min;
    long long m1, m2;
    std::vector<std::pair<long long, long long>> below;
};

// min over 0 < max(|m1|,|m2|) <= H of ||a1 m1 + a2 m2|| * height^gamma, one
// representative per +-pair.
ScanResult scan(const fixtures::Pair& p, long long H, int gamma, const oracle::Real& threshold)
{
    ScanResult out{oracle::Real(10), 0, 0, {}};
    for (long long m1 = 0; m1 <= H; ++m1) {
        for (long long m2 = -H; m2 <= H; ++m2) {
            if (m1 == 0 && m2 <= 0) {
                continue;
            }
            const long long h = oracle::height_of(m1, m2);
            const oracle::Real v = oracle::dist(m1, m2, p.a1, p.a2) * boost::multiprecision::pow(oracle::Real(h), gamma);
            if (v < out.min) {
                out = {v, m1, m2, std::move(out.below)};
            }
            if (v < threshold) {
                out.below.emplace_back(m1, m2);
            }
        }
    }
    return out;
}

Rational q(long n, long d)
{
    Rational r(n, d);
    r.canonicalize();
    return r;
}

} // namespace

TEST(GOfGamma, ExactAtTwo)
{
    EXPECT_EQ(g_exact(2), GoldenNumber(2));
    const RationalInterval v = g_of_gamma(2, 64);
    EXPECT_TRUE(v.is_point());
    EXPECT_EQ(v.lo(), 2);
}

TEST(GOfGamma, MatchesOracle)
{
    for (const auto& gamma : {q(3, 1), q(5, 2), q(7, 3), q(1000000, 1)}) {
        const RationalInterval v = g_of_gamma(gamma, 100);
        EXPECT_TRUE(v.width_at_most_2exp(100));
        const oracle::Real exact = g_oracle(to_real(gamma));
        EXPECT_LE(to_real(v.lo()), exact);
        EXPECT_GE(to_real(v.hi()), exact);
    }
    EXPECT_NEAR(g_of_gamma(3, 64).lo().get_d(), 1.8291796, 1e-7);
    EXPECT_NEAR(g_of_gamma(1000000, 64).lo().get_d(), 1.61803446, 1e-8);
}

TEST(GOfGamma, DecreasingTowardTau)
{
    const RationalInterval tau = golden_ratio().enclosure(128);
    RationalInterval prev = g_of_gamma(2, 128);
    for (long k = 1; k <= 60; ++k) {
        const RationalInterval cur = g_of_gamma(Rational(2) + q(k * k, 4), 128);
        EXPECT_TRUE(cur.strictly_below(prev)) << k;
        EXPECT_TRUE(tau.strictly_below(cur)) << k;
        prev = cur;
    }
}

TEST(GOfGamma, RejectsSmallGamma)
{
    EXPECT_THROW(g_of_gamma(q(19, 10), 64), InvalidArgument);
    EXPECT_THROW(c_of_gamma(q(1, 2), 1, 64), InvalidArgument);
}

TEST(COfGamma, MatchesOracle)
{
    for (const auto& [G, gamma] : std::vector<std::pair<Rational, Rational>>{
             {q(1, 2), 2}, {q(1, 100), 2}, {q(9, 10), 3}, {q(1, 13), q(5, 2)}}) {
        const RationalInterval c = c_of_gamma(G, gamma, 64);
        EXPECT_TRUE(c.width_at_most_2exp(64));
        const oracle::Real exact = c_oracle(to_real(G), to_real(gamma));
        EXPECT_LE(to_real(c.lo()), exact);
        EXPECT_GE(to_real(c.hi()), exact);
        EXPECT_GE(c.lo(), Rational(262144));
    }
    EXPECT_NEAR(c_of_gamma(q(1, 2), 2, 64).lo().get_d(), 324760.58, 0.01);
}

TEST(COfGamma, RejectsGammaOutsideUnitInterval)
{
    EXPECT_THROW(c_of_gamma(0, 2, 64), InvalidArgument);
    EXPECT_THROW(c_of_gamma(1, 2, 64), InvalidArgument);
    EXPECT_THROW(c_of_gamma(q(-1, 2), 2, 64), InvalidArgument);
}

TEST(BadlyApprox, MatchesOracleScan)
{
    for (const auto& p : {fixtures::sqrt_pair(), fixtures::cubic_pair()}) {
        const auto expect = scan(p, 80, 2, 0);
        const auto got = badly_approx_check(p.alpha1(), p.alpha2(), 2, 80);
        EXPECT_LE(to_real(got.gamma_h.lo()), expect.min) << p.name;
        EXPECT_GE(to_real(got.gamma_h.hi()), expect.min) << p.name;
        EXPECT_EQ(std::abs(got.gamma_h_m1), expect.m1) << p.name;
        EXPECT_EQ(std::abs(got.gamma_h_m2), std::abs(expect.m2)) << p.name;
        EXPECT_LE(got.certified_gamma_h, got.gamma_h.lo());
        EXPECT_GT(got.certified_gamma_h, 0);
        EXPECT_TRUE(got.violations.empty());
    }
}

TEST(BadlyApprox, NonIncreasingInHeight)
{
    const auto p = fixtures::cubic_pair();
    Rational prev(1);
    for (long long H : {10, 50, 200, 1000}) {
        const auto r = badly_approx_check(p.alpha1(), p.alpha2(), 2, H);
        EXPECT_LE(r.certified_gamma_h, prev) << H;
        prev = r.certified_gamma_h;
    }
    EXPECT_NEAR(prev.get_d(), 0.0759254, 1e-6);
}

TEST(BadlyApprox, ReportsViolationsOfSuppliedGamma)
{
    const auto p = fixtures::sqrt_pair();
    const Rational G = q(3, 10);
    const auto expect = scan(p, 60, 2, to_real(G));
    const auto got = badly_approx_check(p.alpha1(), p.alpha2(), 2, 60, G);
    ASSERT_FALSE(expect.below.empty());
    EXPECT_EQ(got.violations.size(), expect.below.size());
    EXPECT_FALSE(got.violations_truncated);
    for (const auto& v : got.violations) {
        EXPECT_TRUE(v.product.lo() < G);
    }
}

TEST(Theorem2Run, CubicPairEndToEnd)
{
    const auto p = fixtures::cubic_pair();
    Theorem2Options opt;
    opt.height_bound = 3000;
    opt.gamma_height = 500;
    const RunReport r = theorem2_run(p.alpha1(), p.alpha2(), opt);
    EXPECT_EQ(r.status, "ok");
    EXPECT_EQ(r.gamma_mode, GammaMode::Empirical);
    EXPECT_TRUE(r.failures.empty());
    ASSERT_FALSE(r.entries.empty());
    EXPECT_TRUE(r.params.g_enclosure.is_point());
    const oracle::Real C = c_oracle(to_real(r.params.Gamma), 2);
    for (const auto& e : r.entries) {
        EXPECT_TRUE(e.holds) << e.nu;
        EXPECT_TRUE(e.case_argument) << e.nu;
        const oracle::Real mx = e.witness.max().get_d();
        const oracle::Real lhs = oracle::dist(e.witness.x1.get_si(), e.witness.x2.get_si(), p.a1, p.a2) * mx * mx;
        EXPECT_LE(lhs, C) << e.nu;
        EXPECT_LE(to_real(e.lhs.lo()), lhs);
        EXPECT_GE(to_real(e.lhs.hi()), lhs);
    }
}

TEST(Theorem2Run, ParallelMatchesSequential)
{
    const auto p = fixtures::sqrt_pair();
    Theorem2Options opt;
    opt.height_bound = 1500;
    opt.Gamma = q(1, 20);
    const std::string a = to_json(theorem2_run(p.alpha1(), p.alpha2(), opt)).dump();
    opt.parallel = false;
    const std::string b = to_json(theorem2_run(p.alpha1(), p.alpha2(), opt)).dump();
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find(R"("gamma_mode":"supplied")"), std::string::npos);
}

TEST(Theorem2Run, NoApplicableIndex)
{
    const auto p = fixtures::sqrt_pair();
    Theorem2Options opt;
    opt.height_bound = 2;
    const RunReport r = theorem2_run(p.alpha1(), p.alpha2(), opt);
    EXPECT_EQ(r.status, "no_applicable_nu");
    EXPECT_TRUE(r.entries.empty());
}

TEST(Theorem2Run, HypothesisViolated)
{
    const auto p = fixtures::sqrt_pair();
    Theorem2Options opt;
    opt.height_bound = 200;
    opt.Gamma = q(1, 2);
    const RunReport r = theorem2_run(p.alpha1(), p.alpha2(), opt);
    EXPECT_EQ(r.status, "hypothesis_violated");
    EXPECT_FALSE(r.badly_approx.violations.empty());
}

TEST(Theorem2Run, RejectsInvalidParameters)
{
    const auto p = fixtures::sqrt_pair();
    Theorem2Options opt;
    opt.height_bound = 50;
    opt.Gamma = Rational(1);
    EXPECT_THROW(theorem2_run(p.alpha1(), p.alpha2(), opt), InvalidArgument);
    opt.Gamma = std::nullopt;
    opt.gamma = q(3, 2);
    EXPECT_THROW(theorem2_run(p.alpha1(), p.alpha2(), opt), InvalidArgument);
}
