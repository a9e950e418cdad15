#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "posapprox/witness.hpp"

namespace posapprox {

/// g(gamma) = tau + (2 tau - 2) / (tau^2 gamma - 2) as an exact element of Q(tau).
inline GoldenNumber g_exact(const Rational& gamma)
{
    const GoldenNumber t = GoldenNumber::tau();
    return t + (GoldenNumber(2) * t - GoldenNumber(2)) / (t * t * GoldenNumber(gamma) - GoldenNumber(2));
}

/// Exponent of Gamma in C(Gamma): (tau - tau^2) / (tau^2 gamma - 2) = -1 / (tau^2 gamma - 2).
inline GoldenNumber c_exponent(const Rational& gamma)
{
    const GoldenNumber t = GoldenNumber::tau();
    return (t - t * t) / (t * t * GoldenNumber(gamma) - GoldenNumber(2));
}

namespace detail {

inline void require_gamma(const Rational& gamma)
{
    if (gamma < 2) {
        throw InvalidArgument("gamma must be >= 2");
    }
}

inline void require_big_gamma(const Rational& big_gamma)
{
    if (sgn(big_gamma) <= 0 || big_gamma >= 1) {
        throw InvalidArgument("Gamma must lie in (0, 1)");
    }
}

} // namespace detail

/// Enclosure of g(gamma) of width <= 2^-bits.
inline RationalInterval g_of_gamma(const Rational& gamma, unsigned long bits)
{
    detail::require_gamma(gamma);
    return g_exact(gamma).enclose(bits);
}

/// Enclosure of C(Gamma) = 2^18 Gamma^(-1/(tau^2 gamma - 2)) of width <= 2^-bits.
inline RationalInterval c_of_gamma(const Rational& big_gamma, const Rational& gamma, unsigned long bits)
{
    detail::require_gamma(gamma);
    detail::require_big_gamma(big_gamma);
    const GoldenNumber e = c_exponent(gamma);
    const Rational scale(detail::pow2(18));
    for (unsigned long b = bits + 32;; b *= 2) {
        const RationalInterval c = power(big_gamma, e, b) * scale;
        if (c.width_at_most_2exp(bits)) {
            return c;
        }
    }
}

struct SpectrumParams {
    Rational Gamma;
    Rational gamma;
    RationalInterval g_enclosure;
    RationalInterval C_enclosure;

    static SpectrumParams make(const Rational& big_gamma, const Rational& gamma, unsigned long bits = 128)
    {
        return {big_gamma, gamma, g_of_gamma(gamma, bits), c_of_gamma(big_gamma, gamma, bits)};
    }
};

/// A vector (m1, m2) with ||a1 m1 + a2 m2|| * max(|m1|, |m2|)^gamma < Gamma.
struct LowerBoundViolation {
    long long m1, m2;
    RationalInterval product;
};

struct BadlyApproxResult {
    RationalInterval gamma_h;   // enclosure of Gamma_H
    Rational certified_gamma_h; // lower bound of Gamma_H on the 2^-80 grid
    long long gamma_h_m1 = 0, gamma_h_m2 = 0;
    std::vector<LowerBoundViolation> violations;
    bool violations_truncated = false;
};

inline constexpr std::size_t kMaxReportedViolations = 10000;
inline constexpr unsigned long kGammaGridBits = 80;

/// Gamma_H = min ||a1 m1 + a2 m2|| * max(|m1|, |m2|)^gamma over 0 < height <= H, by
/// an exhaustive shell scan; with a supplied Gamma also lists the certified
/// violations of ||.|| * height^gamma >= Gamma.
inline BadlyApproxResult badly_approx_check(const CertifiedReal& a1, const CertifiedReal& a2, const Rational& gamma,
                                            long long height_bound,
                                            const std::optional<Rational>& big_gamma = std::nullopt,
                                            const PrecisionSchedule& schedule = {})
{
    detail::require_gamma(gamma);
    if (height_bound < 1) {
        throw InvalidArgument("height_bound must be >= 1");
    }
    const FixedPointForm form(a1, a2);
    const GoldenNumber g(gamma);
    auto product = [&](long long n1, long long n2, long long h, unsigned long bits) {
        return dist_form(detail::big(n1), detail::big(n2), a1, a2, bits) * power(detail::big(h), g, bits);
    };

    BadlyApproxResult out;
    std::optional<RationalInterval> best;
    for (long long h = 1; h <= height_bound; ++h) {
        // Shell-wide bounds on the distance part: anything above both can be skipped.
        const RationalInterval hg = power(detail::big(h), g, schedule.start);
        const u128 best_cut = best ? FixedPointForm::units_ceil(best->hi() / hg.lo()) : detail::kU128Max;
        const u128 gamma_cut = big_gamma ? FixedPointForm::units_ceil(*big_gamma / hg.lo()) : 0;
        detail::for_each_shell_vector(h, [&](long long n1, long long n2) {
            const u128 lo = form.eval(n1, n2).lower();
            const bool maybe_min = lo <= best_cut;
            const bool maybe_violation = big_gamma && lo < gamma_cut;
            if (!maybe_min && !maybe_violation) {
                return;
            }
            const RationalInterval p = product(n1, n2, h, schedule.start);
            if (maybe_min && (!best || p.lo() < best->hi())) {
                if (!best || p.hi() < best->hi()) {
                    out.gamma_h_m1 = n1;
                    out.gamma_h_m2 = n2;
                }
                best = best ? RationalInterval(std::min(best->lo(), p.lo()), std::min(best->hi(), p.hi())) : p;
            }
            if (maybe_violation && p.lo() < *big_gamma) {
                const Ordering o = certified_compare([&](unsigned long bits) { return product(n1, n2, h, bits); },
                                                     *big_gamma, schedule);
                if (o == Ordering::Less) {
                    if (out.violations.size() < kMaxReportedViolations) {
                        out.violations.push_back({n1, n2, p});
                    } else {
                        out.violations_truncated = true;
                    }
                }
            }
        });
    }
    out.gamma_h = *best;
    if (sgn(best->lo()) <= 0) {
        throw PrecisionExhausted("Gamma_H lower bound is not positive");
    }
    out.certified_gamma_h = detail::dyadic(detail::floor_q(detail::mul_2exp(best->lo(), kGammaGridBits)), kGammaGridBits);
    if (sgn(out.certified_gamma_h) <= 0) {
        throw PrecisionExhausted("Gamma_H is below the 2^-80 grid");
    }
    return out;
}

/// One dispatched witness checked against ||.|| max^g(gamma) <= C(Gamma).
struct Theorem2Entry {
    std::size_t nu = 0;
    WitnessPoint witness;
    RationalInterval lhs;         // ||.|| * max^g(gamma)
    bool holds = false;           // lhs <= C(Gamma), certified
    bool case_argument = false;   // CASE_I: C >= 16 and g <= 2; CASE_II: substitution chain <= M_nu
    RationalInterval tau_product; // ||.|| * max^tau
};

struct RunFailure {
    std::size_t nu = 0;
    std::string kind;
    std::string message;
};

enum class GammaMode { Supplied, Empirical };

struct RunReport {
    std::string alpha1, alpha2;
    SpectrumParams params;
    GammaMode gamma_mode = GammaMode::Empirical;
    long long gamma_height = 0;
    long long height_bound = 0;
    BadlyApproxResult badly_approx;
    std::vector<BestApproximation> best_approximations;
    std::vector<std::size_t> chain_failures; // nu with Gamma M_nu^-gamma <= M_{nu+1}^-2 not certified
    std::vector<Theorem2Entry> entries;
    std::vector<RunFailure> failures;
    std::string status;
};

namespace detail {

inline bool chain_holds(const BestApproximation& cur, const BestApproximation& nxt, const Rational& big_gamma,
                        const Rational& gamma, const PrecisionSchedule& schedule)
{
    // Gamma M_nu^-gamma <= M_{nu+1}^-2  <=>  Gamma M_{nu+1}^2 <= M_nu^gamma
    const Rational lhs = big_gamma * Rational(nxt.height * nxt.height);
    try {
        return certified_compare(
                   [&](unsigned long bits) { return power(cur.height, GoldenNumber(gamma), bits) - lhs; },
                   Rational(0), schedule) == Ordering::Greater;
    } catch (const PrecisionExhausted&) {
        return false;
    }
}

inline bool certified_le(const std::function<RationalInterval(unsigned long)>& diff, const PrecisionSchedule& schedule)
{
    try {
        return certified_compare(diff, Rational(0), schedule) == Ordering::Less;
    } catch (const PrecisionExhausted&) {
        return false;
    }
}

inline Theorem2Entry check_entry(std::size_t nu, WitnessPoint w, const NuContext& ctx, const SpectrumParams& params,
                                 const PrecisionSchedule& schedule)
{
    Theorem2Entry e;
    e.nu = nu;
    const Integer mx = w.max();
    const GoldenNumber g = g_exact(params.gamma);
    const GoldenNumber ce = c_exponent(params.gamma);
    const GoldenNumber t = GoldenNumber::tau();
    const CertifiedReal& a1 = ctx.alpha1();
    const CertifiedReal& a2 = ctx.alpha2();
    auto value = [&](unsigned long bits) { return dist_form(w.x1, w.x2, a1, a2, bits); };
    auto c_at = [&](unsigned long bits) { return power(params.Gamma, ce, bits) * Rational(pow2(18)); };
    auto lhs = [&](unsigned long bits) { return value(bits) * power(mx, g, bits); };

    e.lhs = lhs(schedule.start);
    e.tau_product = value(schedule.start) * power(mx, t, schedule.start);
    e.holds = certified_le([&](unsigned long bits) { return lhs(bits) - c_at(bits); }, schedule);
    if (w.certificate.bound_kind == BoundKind::CaseI) {
        e.case_argument = params.C_enclosure.lo() >= 16 && params.g_enclosure.hi() <= 2;
    } else {
        // 240^(-2 tau / d) Gamma^(tau^2 / d) max^(2 tau / d) <= M_nu with d = tau^2 gamma - 2
        const GoldenNumber d = t * t * GoldenNumber(params.gamma) - GoldenNumber(2);
        const GoldenNumber p = GoldenNumber(2) * t / d;
        const Rational m_nu(ctx.height(nu));
        e.case_argument = certified_le(
            [&](unsigned long bits) {
                return power(Integer(240), -p, bits) * power(params.Gamma, t * t / d, bits) * power(mx, p, bits) -
                       m_nu;
            },
            schedule);
    }
    e.witness = std::move(w);
    return e;
}

} // namespace detail

struct Theorem2Options {
    std::optional<Rational> Gamma; // supplied mode when set
    Rational gamma{2};
    long long height_bound = 1000;
    long long gamma_height = 0; // height used for Gamma_H; 0 means height_bound
    PrecisionSchedule schedule;
    bool parallel = true;
};

/// Best approximations up to the height bound, theorem3_dispatch for every
/// nu with det(m_{nu-1}, m_nu, m_{nu+1}) != 0 and m_{nu+2} in range, and a
/// certified check of ||.|| max^g(gamma) <= C(Gamma) for each witness.
inline RunReport theorem2_run(const CertifiedReal& a1, const CertifiedReal& a2, const Theorem2Options& opt)
{
    detail::require_gamma(opt.gamma);
    RunReport r;
    r.alpha1 = a1.to_string();
    r.alpha2 = a2.to_string();
    r.height_bound = opt.height_bound;
    r.gamma_height = opt.gamma_height > 0 ? opt.gamma_height : opt.height_bound;
    r.gamma_mode = opt.Gamma ? GammaMode::Supplied : GammaMode::Empirical;

    r.badly_approx = badly_approx_check(a1, a2, opt.gamma, r.gamma_height, opt.Gamma, opt.schedule);
    const Rational big_gamma = opt.Gamma ? *opt.Gamma : r.badly_approx.certified_gamma_h;
    r.params = SpectrumParams::make(big_gamma, opt.gamma, opt.schedule.start);
    if (opt.Gamma && !r.badly_approx.violations.empty()) {
        r.status = "hypothesis_violated";
        return r;
    }

    const BestApproxSequence seq = enumerate_best_approximations(a1, a2, opt.height_bound, opt.schedule);
    r.best_approximations = seq.items;
    for (std::size_t nu = 1; nu < seq.size(); ++nu) {
        if (!detail::chain_holds(seq.at(nu), seq.at(nu + 1), big_gamma, opt.gamma, opt.schedule)) {
            r.chain_failures.push_back(nu);
        }
    }

    std::vector<std::size_t> applicable;
    for (std::size_t nu = 2; nu + 2 <= seq.size(); ++nu) {
        if (det_condition(seq.at(nu - 1), seq.at(nu), seq.at(nu + 1))) {
            applicable.push_back(nu);
        }
    }
    if (applicable.empty()) {
        r.status = "no_applicable_nu";
        return r;
    }

    struct Outcome {
        std::optional<Theorem2Entry> entry;
        std::optional<RunFailure> failure;
    };
    auto work = [&](std::size_t nu) {
        Outcome o;
        const NuContext ctx = NuContext::from_sequence(seq, nu);
        try {
            o.entry = detail::check_entry(nu, theorem3_dispatch(ctx), ctx, r.params, opt.schedule);
        } catch (const error& e) {
            o.failure = RunFailure{nu, e.kind(), e.what()};
        }
        return o;
    };
    std::vector<Outcome> outcomes;
    if (opt.parallel) {
        std::vector<std::future<Outcome>> futures;
        for (std::size_t nu : applicable) {
            futures.push_back(std::async(std::launch::async, work, nu));
        }
        for (auto& f : futures) {
            outcomes.push_back(f.get());
        }
    } else {
        for (std::size_t nu : applicable) {
            outcomes.push_back(work(nu));
        }
    }
    for (auto& o : outcomes) {
        if (o.entry) {
            if (!o.entry->holds) {
                r.failures.push_back({o.entry->nu, "BoundNotCertified", "||.|| max^g <= C(Gamma) not certified"});
            }
            r.entries.push_back(std::move(*o.entry));
        } else {
            r.failures.push_back(std::move(*o.failure));
        }
    }
    r.status = r.failures.empty() ? "ok" : "failures";
    return r;
}

} // namespace posapprox
