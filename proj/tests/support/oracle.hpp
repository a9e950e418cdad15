#pragma once

// Reference computations in 100-digit binary floating point, written without
// any of the library's code.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <tuple>
#include <vector>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_100;

inline Real sqrt_of(int n) { return boost::multiprecision::sqrt(Real(n)); }
inline Real cbrt_of(int n) { return boost::multiprecision::cbrt(Real(n)); }
inline Real tau() { return (1 + sqrt_of(5)) / 2; }

inline Real dist(const Real& x) { return boost::multiprecision::abs(x - boost::multiprecision::round(x)); }

inline Real dist(long long n1, long long n2, const Real& a1, const Real& a2) { return dist(a1 * n1 + a2 * n2); }

struct Best {
    long long m0, m1, m2, height;
    Real zeta;
};

inline long long height_of(long long a, long long b) { return std::max(std::llabs(a), std::llabs(b)); }

/// Literal definition: for each height h scan every (n1, n2) with max = h and
/// keep a running record of the smallest distance.
inline std::vector<Best> best_approximations(const Real& a1, const Real& a2, long long H)
{
    std::vector<Best> out;
    std::optional<Real> record;
    for (long long h = 1; h <= H; ++h) {
        std::optional<std::tuple<Real, long long, long long>> shell;
        for (long long n1 = -h; n1 <= h; ++n1) {
            for (long long n2 = -h; n2 <= h; ++n2) {
                if (height_of(n1, n2) != h) {
                    continue;
                }
                const Real d = dist(n1, n2, a1, a2);
                if (!shell || d < std::get<0>(*shell)) {
                    shell = std::tuple{d, n1, n2};
                }
            }
        }
        auto [d, n1, n2] = *shell;
        if (record && !(d < *record)) {
            continue;
        }
        record = d;
        if (n1 < 0 || (n1 == 0 && n2 < 0)) {
            n1 = -n1;
            n2 = -n2;
        }
        const Real v = a1 * n1 + a2 * n2;
        const auto m0 = static_cast<long long>(-boost::multiprecision::round(v));
        out.push_back({m0, n1, n2, h, d});
    }
    return out;
}

struct Point {
    long long x1, x2;
    Real value;
};

inline bool better(const Point& a, const Point& b)
{
    const long long ma = std::max(a.x1, a.x2), mb = std::max(b.x1, b.x2);
    if (ma != mb) {
        return ma < mb;
    }
    if (a.value != b.value) {
        return a.value < b.value;
    }
    return std::tie(a.x1, a.x2) < std::tie(b.x1, b.x2);
}

/// Exhaustive scan of |x1 - x2| <= M, |x1 + x2| <= R for points with
/// ||a1 x1 + a2 x2|| < zeta, sign-normalized, mixed signs rejected.
inline std::optional<Point> lemma1(const Real& a1, const Real& a2, const Real& zeta, long long M, const Real& R)
{
    const auto ur = static_cast<long long>(boost::multiprecision::floor(R));
    std::optional<Point> best;
    for (long long u = -ur; u <= ur; ++u) {
        for (long long v = -M; v <= M; ++v) {
            if ((u - v) % 2 != 0) {
                continue;
            }
            long long x1 = (u + v) / 2, x2 = (u - v) / 2;
            if (x1 < 0 && x2 < 0) {
                x1 = -x1;
                x2 = -x2;
            }
            if (x1 <= 0 || x2 <= 0) {
                continue;
            }
            const Real d = dist(x1, x2, a1, a2);
            if (!(d < zeta)) {
                continue;
            }
            const Point p{x1, x2, d};
            if (!best || better(p, *best)) {
                best = p;
            }
        }
    }
    return best;
}

struct DiscPoint {
    long long x1, x2, l_xi, l_eta;
};

/// Points of the lattice spanned by xi, eta inside the closed disc of radius
/// 4D/M about (5D/M, 5D/M), found by scanning the integer bounding box and
/// testing lattice membership with Cramer's rule.
inline std::vector<DiscPoint> disc_points(long long p1, long long p2, long long q1, long long q2)
{
    const long long det = p1 * q2 - p2 * q1;
    const long long D = std::llabs(det);
    const long long M = height_of(p1, p2);
    const long long lo = (D + M - 1) / M - 1, hi = (9 * D) / M + 1;
    std::vector<DiscPoint> out;
    for (long long x1 = lo; x1 <= hi; ++x1) {
        for (long long x2 = lo; x2 <= hi; ++x2) {
            const __int128 d1 = __int128(M) * x1 - 5 * __int128(D);
            const __int128 d2 = __int128(M) * x2 - 5 * __int128(D);
            if (d1 * d1 + d2 * d2 > 16 * __int128(D) * D) {
                continue;
            }
            const long long nx = x1 * q2 - x2 * q1;
            const long long ne = p1 * x2 - p2 * x1;
            if (nx % det != 0 || ne % det != 0) {
                continue;
            }
            out.push_back({x1, x2, nx / det, ne / det});
        }
    }
    return out;
}

} // namespace oracle
