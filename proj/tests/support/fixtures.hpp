#pragma once

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "oracle.hpp"
#include "posapprox/best_approx.hpp"

namespace fixtures {

using posapprox::BestApproxSequence;
using posapprox::CertifiedReal;
using posapprox::Integer;
using posapprox::Rational;

inline const std::string kSqrt2 = "alg:-2,0,1@[1,2]";
inline const std::string kSqrt3 = "alg:-3,0,1@[1,2]";
inline const std::string kCbrt2 = "alg:-2,0,0,1@[1,2]";
inline const std::string kCbrt4 = "alg:-4,0,0,1@[1,2]";
inline const std::string kTau = "alg:-1,-1,1@[1,2]";

struct Pair {
    std::string name;
    std::string d1, d2;
    oracle::Real a1, a2;

    CertifiedReal alpha1() const { return CertifiedReal::parse(d1); }
    CertifiedReal alpha2() const { return CertifiedReal::parse(d2); }
};

inline Pair sqrt_pair() { return {"sqrt2_sqrt3", kSqrt2, kSqrt3, oracle::sqrt_of(2), oracle::sqrt_of(3)}; }
inline Pair cubic_pair() { return {"cbrt2_cbrt4", kCbrt2, kCbrt4, oracle::cbrt_of(2), oracle::cbrt_of(4)}; }

// p/q + 10^-k sqrt(s), the larger root of (q x - p)^2 = q^2 s 10^-2k.
inline std::string near_rational_descriptor(long p, long q, long s, int k)
{
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(2 * k));
    const Integer c2 = Integer(q * q) * t;
    const Integer c1 = Integer(-2 * p * q) * t;
    const Integer c0 = Integer(p * p) * t - Integer(q * q * s);
    Rational lo(p, q);
    lo.canonicalize();
    const Rational hi = lo + Rational(1, 2 * q);
    return "alg:" + c0.get_str() + "," + c1.get_str() + "," + c2.get_str() + "@[" + lo.get_str() + "," +
           hi.get_str() + "]";
}

inline oracle::Real near_rational_value(long p, long q, long s, int k)
{
    return oracle::Real(p) / q + oracle::sqrt_of(static_cast<int>(s)) / boost::multiprecision::pow(oracle::Real(10), k);
}

inline Pair near_pair(long p1, long q1, long s1, long p2, long q2, long s2, int k)
{
    return {"near_" + std::to_string(p1) + "_" + std::to_string(q1) + "_" + std::to_string(s1) + "__" +
                std::to_string(p2) + "_" + std::to_string(q2) + "_" + std::to_string(s2) + "_k" + std::to_string(k),
            near_rational_descriptor(p1, q1, s1, k), near_rational_descriptor(p2, q2, s2, k),
            near_rational_value(p1, q1, s1, k), near_rational_value(p2, q2, s2, k)};
}

/// Pairs of the form (p1/q1 + eps sqrt s1, p2/q2 + eps sqrt s2). Their best
/// approximations reach every branch of the case analysis at small heights.
inline std::vector<Pair> near_rational_pairs()
{
    std::vector<Pair> out;
    for (int k : {2, 3, 4}) {
        for (auto [p1, q1, p2, q2] : std::vector<std::array<long, 4>>{{1, 3, 2, 3}, {1, 2, 1, 3}, {1, 5, 2, 5},
                                                                      {2, 7, 3, 7}, {1, 4, 3, 4}}) {
            for (auto [s1, s2] : std::vector<std::pair<long, long>>{{2, 3}, {5, 7}, {3, 2}}) {
                out.push_back(near_pair(p1, q1, s1, p2, q2, s2, k));
            }
        }
    }
    return out;
}

inline oracle::Real to_real(const Rational& q)
{
    return oracle::Real(q.get_num().get_str()) / oracle::Real(q.get_den().get_str());
}

/// Enumerations are shared between tests of one binary.
inline const BestApproxSequence& sequence(const Pair& p, long long height)
{
    static std::mutex m;
    static std::map<std::tuple<std::string, std::string, long long>, BestApproxSequence> cache;
    std::lock_guard lock(m);
    const auto key = std::tuple{p.d1, p.d2, height};
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, posapprox::enumerate_best_approximations(p.alpha1(), p.alpha2(), height)).first;
    }
    return it->second;
}

} // namespace fixtures
