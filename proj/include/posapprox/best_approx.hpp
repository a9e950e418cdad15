#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "posapprox/certified_real.hpp"
#include "posapprox/fixed_form.hpp"

namespace posapprox {

/// Certified enclosure of ||n1*a1 + n2*a2||.
inline RationalInterval dist_form(const Integer& n1, const Integer& n2, const CertifiedReal& a1,
                                  const CertifiedReal& a2, unsigned long bits)
{
    return dist_nearest_int(eval_linear_form(0, n1, n2, a1, a2, bits));
}

/// One best approximation m = (m0, m1, m2) of the linear form
/// m0 + m1*a1 + m2*a2. (m1, m2) is oriented so that its first nonzero entry is
/// positive and m0 is the integer nearest to -(m1*a1 + m2*a2).
struct BestApproximation {
    Integer m0, m1, m2;
    Integer height;          // max(|m1|, |m2|)
    RationalInterval zeta;   // enclosure of |m0 + m1*a1 + m2*a2|
    std::size_t nu = 0;      // 1-based position in the sequence

    long long height_ll() const { return height.get_si(); }
    long long m1_ll() const { return m1.get_si(); }
    long long m2_ll() const { return m2.get_si(); }

    /// Enclosure of |zeta(m)| refined to `bits`.
    RationalInterval zeta_at(const CertifiedReal& a1, const CertifiedReal& a2, unsigned long bits) const
    {
        return abs(eval_linear_form(m0, m1, m2, a1, a2, bits));
    }

    bool same_vector(const BestApproximation& o) const { return m0 == o.m0 && m1 == o.m1 && m2 == o.m2; }
};

/// The best approximations with height up to `height_bound`, in increasing height.
struct BestApproxSequence {
    CertifiedReal alpha1, alpha2;
    std::vector<BestApproximation> items;
    long long height_bound = 0;
    PrecisionSchedule schedule;

    std::size_t size() const { return items.size(); }
    /// 1-based access, matching the index nu.
    const BestApproximation& at(std::size_t nu) const { return items.at(nu - 1); }
};

namespace detail {

struct Candidate {
    long long n1, n2;
    FixedPointForm::Estimate est;
};

// Canonical (first nonzero positive) vectors with max(|n1|, |n2|) == h.
template <typename F>
void for_each_shell_vector(long long h, F&& f)
{
    for (long long n2 = -h; n2 <= h; ++n2) {
        f(h, n2);
    }
    f(0, h);
    for (long long n1 = 1; n1 < h; ++n1) {
        f(n1, h);
        f(n1, -h);
    }
}

inline BestApproximation make_best(long long n1, long long n2, const CertifiedReal& a1, const CertifiedReal& a2,
                                   const PrecisionSchedule& schedule, std::size_t nu)
{
    BestApproximation b;
    b.m1 = big(n1);
    b.m2 = big(n2);
    b.height = std::max(uabs(n1), uabs(n2));
    const RationalInterval v = eval_linear_form(0, b.m1, b.m2, a1, a2, schedule.start);
    // The nearest integer is unique: the distance is certified to be < 1/2 below.
    const Integer k = floor_q(v.midpoint() + Rational(1, 2));
    if (!(v.lo() > Rational(k) - Rational(1, 2) && v.hi() < Rational(k) + Rational(1, 2))) {
        throw PrecisionExhausted("nearest integer of the linear form is not certified");
    }
    b.m0 = -k;
    b.zeta = abs(v - Rational(k));
    b.nu = nu;
    if (certified_sign([&](unsigned long bits) { return b.zeta_at(a1, a2, bits); }, schedule) <= 0) {
        throw PrecisionExhausted("linear form vanishes");
    }
    return b;
}

} // namespace detail

/// Every best approximation with height <= height_bound, by an incremental
/// record scan over height shells. A fixed point filter discards the bulk of
/// the candidates; the survivors are ranked by certified comparison.
inline BestApproxSequence enumerate_best_approximations(const CertifiedReal& a1, const CertifiedReal& a2,
                                                        long long height_bound,
                                                        const PrecisionSchedule& schedule = {})
{
    if (height_bound < 1) {
        throw InvalidArgument("height_bound must be >= 1");
    }
    BestApproxSequence seq{a1, a2, {}, height_bound, schedule};
    const FixedPointForm form(a1, a2);

    std::optional<detail::Candidate> record;
    std::vector<detail::Candidate> contenders;
    for (long long h = 1; h <= height_bound; ++h) {
        const u128 record_upper = record ? record->est.upper() : detail::kU128Max;
        u128 shell_upper = detail::kU128Max;
        contenders.clear();
        detail::for_each_shell_vector(h, [&](long long n1, long long n2) {
            const auto est = form.eval(n1, n2);
            const u128 lo = est.lower();
            if (lo > record_upper || lo > shell_upper) {
                return;
            }
            shell_upper = std::min(shell_upper, est.upper());
            contenders.push_back({n1, n2, est});
        });
        std::erase_if(contenders, [&](const detail::Candidate& c) { return c.est.lower() > shell_upper; });
        if (contenders.empty()) {
            continue;
        }
        // The record competes as the last entry; if it wins, the shell holds no
        // best approximation.
        std::vector<detail::Candidate> field = contenders;
        if (record) {
            field.push_back(*record);
        }
        const std::size_t w = certified_argmin(
            field.size(),
            [&](std::size_t i, unsigned long bits) {
                return dist_form(detail::big(field[i].n1), detail::big(field[i].n2), a1, a2, bits);
            },
            schedule);
        if (record && w == field.size() - 1) {
            continue;
        }
        record = field[w];
        seq.items.push_back(detail::make_best(record->n1, record->n2, a1, a2, schedule, seq.items.size() + 1));
    }
    return seq;
}

struct MinkowskiResult {
    std::size_t nu;
    bool holds;
};

/// Certifies zeta_nu * M_{nu+1}^2 <= 1 for every consecutive pair.
inline std::vector<MinkowskiResult> minkowski_check(const BestApproxSequence& seq)
{
    std::vector<MinkowskiResult> out;
    for (std::size_t nu = 1; nu < seq.size(); ++nu) {
        const BestApproximation& cur = seq.at(nu);
        const Rational m2(seq.at(nu + 1).height * seq.at(nu + 1).height);
        bool holds = false;
        try {
            holds = certified_compare(
                        [&](unsigned long bits) { return cur.zeta_at(seq.alpha1, seq.alpha2, bits) * m2; },
                        Rational(1), seq.schedule) == Ordering::Less;
        } catch (const PrecisionExhausted&) {
            holds = false;
        }
        out.push_back({nu, holds});
    }
    return out;
}

/// Exact determinant of the 3x3 matrix with rows a, b, c.
inline Integer determinant3(const BestApproximation& a, const BestApproximation& b, const BestApproximation& c)
{
    return a.m0 * (b.m1 * c.m2 - b.m2 * c.m1) - a.m1 * (b.m0 * c.m2 - b.m2 * c.m0) +
           a.m2 * (b.m0 * c.m1 - b.m1 * c.m0);
}

/// True iff the rows m_{nu-1}, m_nu, m_{nu+1} are linearly independent.
inline bool det_condition(const BestApproximation& bm1, const BestApproximation& bm2, const BestApproximation& bm3)
{
    return determinant3(bm1, bm2, bm3) != 0;
}

/// |m_{1,nu} m_{2,nu+1} - m_{2,nu} m_{1,nu+1}|: covolume of the projected lattice.
inline Integer d_nu(const BestApproximation& bm2, const BestApproximation& bm3)
{
    return detail::iabs(Integer(bm2.m1 * bm3.m2 - bm2.m2 * bm3.m1));
}

} // namespace posapprox
