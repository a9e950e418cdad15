#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posapprox/best_approx.hpp"
#include "posapprox/real_power.hpp"

namespace posapprox {

enum class WitnessSource { Lemma1, Cor1, Cor2, Lemma2, Cor3 };
enum class BoundKind { Lemma, CaseI, CaseII };

inline const char* to_string(WitnessSource s)
{
    switch (s) {
    case WitnessSource::Lemma1: return "LEMMA1";
    case WitnessSource::Cor1: return "COR1";
    case WitnessSource::Cor2: return "COR2";
    case WitnessSource::Lemma2: return "LEMMA2";
    case WitnessSource::Cor3: return "COR3";
    }
    return "?";
}

inline const char* to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::Lemma: return "LEMMA";
    case BoundKind::CaseI: return "I";
    case BoundKind::CaseII: return "II";
    }
    return "?";
}

/// coeff * prod(base_i ^ exponent_i) * |zeta(m)|^zeta_power, exponents in Q(tau).
/// Kept symbolic so a bound can be re-enclosed at any precision.
struct BoundExpr {
    Rational coeff{1};
    std::vector<std::pair<Integer, GoldenNumber>> powers;
    std::optional<std::array<Integer, 3>> zeta_vector;
    int zeta_power = 0;

    bool is_exact() const
    {
        if (zeta_power != 0) {
            return false;
        }
        return std::all_of(powers.begin(), powers.end(), [](const auto& p) {
            return p.second.is_rational() && p.second.rational_part().get_den() == 1;
        });
    }

    RationalInterval enclose(const CertifiedReal& a1, const CertifiedReal& a2, unsigned long bits) const
    {
        RationalInterval v(coeff);
        for (const auto& [base, e] : powers) {
            v = v * power(base, e, bits);
        }
        if (zeta_power != 0 && zeta_vector) {
            const auto& m = *zeta_vector;
            const RationalInterval z = abs(eval_linear_form(m[0], m[1], m[2], a1, a2, bits));
            if (sgn(z.lo()) <= 0) {
                throw PrecisionExhausted("zeta enclosure touches zero");
            }
            v = zeta_power > 0 ? v * z : v / z;
        }
        return v;
    }
};

/// The inequalities a witness claims: max_lower <= max{x1,x2} <= max_upper and
/// ||a1 x1 + a2 x2|| <= rhs (< rhs when strict).
struct BoundCertificate {
    BoundKind bound_kind = BoundKind::Lemma;
    Integer max_lower{1};
    BoundExpr max_upper;
    BoundExpr rhs;
    bool strict = false;
    bool holds = false;
    RationalInterval max_upper_enclosure;
    RationalInterval rhs_enclosure;

    /// Re-derives every inequality with certified arithmetic along `schedule`.
    bool check(const Integer& x1, const Integer& x2, const CertifiedReal& a1, const CertifiedReal& a2,
               const PrecisionSchedule& schedule)
    {
        max_upper_enclosure = max_upper.enclose(a1, a2, schedule.start);
        rhs_enclosure = rhs.enclose(a1, a2, schedule.start);
        holds = verify(x1, x2, a1, a2, schedule);
        return holds;
    }

    bool verify(const Integer& x1, const Integer& x2, const CertifiedReal& a1, const CertifiedReal& a2,
                const PrecisionSchedule& schedule) const
    {
        if (sgn(x1) <= 0 || sgn(x2) <= 0) {
            return false;
        }
        const Integer mx = std::max(x1, x2);
        if (mx < max_lower) {
            return false;
        }
        try {
            if (max_upper.is_exact()) {
                if (Rational(mx) > max_upper.enclose(a1, a2, schedule.start).lo()) {
                    return false;
                }
            } else if (certified_compare([&](unsigned long b) { return max_upper.enclose(a1, a2, b); },
                                         Rational(mx), schedule) != Ordering::Greater) {
                return false;
            }
            return certified_compare(
                       [&](unsigned long b) {
                           return dist_form(x1, x2, a1, a2, b) - rhs.enclose(a1, a2, b);
                       },
                       Rational(0), schedule) == Ordering::Less;
        } catch (const PrecisionExhausted&) {
            return false;
        }
    }
};

/// A positive integer point with a certified small value of ||a1 x1 + a2 x2||.
struct WitnessPoint {
    Integer x1, x2;
    RationalInterval value;
    WitnessSource source = WitnessSource::Lemma1;
    std::size_t nu = 0; // best approximation the construction started from
    BoundCertificate certificate;
    std::optional<std::array<Integer, 2>> lambda; // coefficients on xi_nu, xi_{nu+1} (lemma2_search)
    bool case1_fallback = false; // theorem3_dispatch: CASE_I certificate failed, CASE_II used

    Integer max() const { return std::max(x1, x2); }
};

/// Re-runs the certificate at twice the starting precision.
inline bool revalidate(const WitnessPoint& w, const CertifiedReal& a1, const CertifiedReal& a2,
                       const PrecisionSchedule& schedule = {})
{
    const PrecisionSchedule doubled{schedule.start * 2, schedule.cap * 2};
    return w.certificate.verify(w.x1, w.x2, a1, a2, doubled);
}

/// Consecutive best approximations around index nu, with the input reals.
class NuContext {
public:
    NuContext(CertifiedReal a1, CertifiedReal a2, std::vector<BestApproximation> window, std::size_t nu,
              PrecisionSchedule schedule = {})
        : a1_(std::move(a1)), a2_(std::move(a2)), window_(std::move(window)), nu_(nu), schedule_(schedule)
    {
    }

    /// Items nu-1 .. nu+2 of the sequence, as far as they exist.
    static NuContext from_sequence(const BestApproxSequence& seq, std::size_t nu)
    {
        std::vector<BestApproximation> w;
        for (std::size_t j = nu > 1 ? nu - 1 : 1; j <= nu + 2 && j <= seq.size(); ++j) {
            w.push_back(seq.at(j));
        }
        return {seq.alpha1, seq.alpha2, std::move(w), nu, seq.schedule};
    }

    NuContext at(std::size_t nu) const { return {a1_, a2_, window_, nu, schedule_}; }

    std::size_t nu() const { return nu_; }
    const CertifiedReal& alpha1() const { return a1_; }
    const CertifiedReal& alpha2() const { return a2_; }
    const PrecisionSchedule& schedule() const { return schedule_; }

    bool has(std::size_t j) const { return find(j) != nullptr; }

    const BestApproximation& m(std::size_t j) const
    {
        if (const auto* b = find(j)) {
            return *b;
        }
        throw InvalidArgument("context has no best approximation with index " + std::to_string(j));
    }

    const Integer& height(std::size_t j) const { return m(j).height; }

    RationalInterval zeta(std::size_t j, unsigned long bits) const { return m(j).zeta_at(a1_, a2_, bits); }

    BoundExpr zeta_expr(std::size_t j, int power_of_zeta, Rational coeff = 1) const
    {
        const auto& b = m(j);
        BoundExpr e;
        e.coeff = std::move(coeff);
        e.zeta_vector = std::array<Integer, 3>{b.m0, b.m1, b.m2};
        e.zeta_power = power_of_zeta;
        return e;
    }

    RationalInterval value(const Integer& x1, const Integer& x2, unsigned long bits) const
    {
        return dist_form(x1, x2, a1_, a2_, bits);
    }

private:
    const BestApproximation* find(std::size_t j) const
    {
        for (const auto& b : window_) {
            if (b.nu == j) {
                return &b;
            }
        }
        return nullptr;
    }

    CertifiedReal a1_, a2_;
    std::vector<BestApproximation> window_;
    std::size_t nu_;
    PrecisionSchedule schedule_;
};

namespace detail {

inline const GoldenNumber& tau_n() { static const GoldenNumber t = GoldenNumber::tau(); return t; }

template <typename Source>
Integer certified_floor(Source&& source, const PrecisionSchedule& schedule)
{
    std::optional<Integer> out;
    schedule.for_each([&](unsigned long bits) {
        const RationalInterval v = source(bits);
        const Integer fl = floor_q(v.lo());
        if (fl == floor_q(v.hi())) {
            out = fl;
        }
        return out.has_value();
    });
    if (!out) {
        throw PrecisionExhausted("floor of a bound is not decidable up to the precision cap");
    }
    return *out;
}

// Certified x < y (Less) or x > y (Greater), x - y given by `diff`.
template <typename Source>
Ordering compare_zero(Source&& diff, const PrecisionSchedule& schedule)
{
    return certified_compare(std::forward<Source>(diff), Rational(0), schedule);
}

// Throws PreconditionNotCertified unless `diff` is certified to have the wanted sign.
template <typename Source>
void require(Source&& diff, Ordering wanted, const std::string& what, const PrecisionSchedule& schedule)
{
    Ordering got;
    try {
        got = compare_zero(std::forward<Source>(diff), schedule);
    } catch (const PrecisionExhausted& e) {
        throw PreconditionNotCertified(what + " is undecided: " + e.what());
    }
    if (got != wanted) {
        throw PreconditionNotCertified(what + " does not hold");
    }
}

// Positive representative of +-(v1, v2), if both coordinates share a sign.
inline std::optional<std::pair<long long, long long>> positive_projection(const BestApproximation& b)
{
    const long long v1 = b.m1_ll(), v2 = b.m2_ll();
    if (v1 > 0 && v2 > 0) {
        return std::pair{v1, v2};
    }
    if (v1 < 0 && v2 < 0) {
        return std::pair{-v1, -v2};
    }
    return std::nullopt;
}

// Among equally tall points, pick the certified smallest value, then the
// lexicographically smallest point.
inline std::size_t pick_smallest_value(const std::vector<std::pair<long long, long long>>& pts,
                                       const NuContext& ctx)
{
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    const std::size_t w = certified_argmin(
        order.size(),
        [&](std::size_t i, unsigned long bits) {
            return ctx.value(big(pts[order[i]].first), big(pts[order[i]].second), bits);
        },
        ctx.schedule());
    return order[w];
}

inline WitnessPoint make_witness(long long x1, long long x2, WitnessSource source, const NuContext& ctx)
{
    WitnessPoint w;
    w.x1 = big(x1);
    w.x2 = big(x2);
    w.value = ctx.value(w.x1, w.x2, ctx.schedule().start);
    w.source = source;
    w.nu = ctx.nu();
    return w;
}

inline void certify_or_throw(WitnessPoint& w, const NuContext& ctx, const char* what)
{
    if (!w.certificate.check(w.x1, w.x2, ctx.alpha1(), ctx.alpha2(), ctx.schedule())) {
        throw CertificateFailed(std::string(what) + ": certificate for (" + w.x1.get_str() + ", " +
                                w.x2.get_str() + ") at nu=" + std::to_string(ctx.nu()) + " does not hold");
    }
}

} // namespace detail

/// R_nu = 2 / (M_{nu+1} zeta_nu), certified to exceed M_{nu+1}.
inline RationalInterval r_nu(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    const Rational next(ctx.height(nu + 1));
    auto source = [&](unsigned long bits) {
        const RationalInterval z = ctx.zeta(nu, bits);
        if (sgn(z.lo()) <= 0) {
            throw PrecisionExhausted("zeta_nu enclosure touches zero");
        }
        return RationalInterval(2 / next) / z;
    };
    const RationalInterval r = source(ctx.schedule().start);
    if (certified_compare(source, next, ctx.schedule()) != Ordering::Greater) {
        throw CertificateFailed("R_nu <= M_{nu+1}: the input sequence violates zeta_nu M_{nu+1}^2 <= 1");
    }
    return r;
}

/// A_nu = M_nu^(1/tau) / 120.
inline RationalInterval a_nu(const NuContext& ctx, unsigned long bits)
{
    return power(ctx.height(ctx.nu()), detail::tau_n() - GoldenNumber(1), bits) / Rational(120);
}

/// Searches the parallelepiped |a1 x1 + a2 x2 + y| <= zeta_nu, |x1 - x2| <= M_{nu+1},
/// |x1 + x2| <= R_nu for a positive point with value strictly below zeta_nu.
/// Scans max{x1, x2} upward, so the returned point has the smallest maximum;
/// ties go to the smaller value, then to the lexicographically smaller point.
inline WitnessPoint lemma1_search(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    const auto& sched = ctx.schedule();
    const long long next = ctx.height(nu + 1).get_si();
    r_nu(ctx);
    const Integer bound_z = detail::certified_floor(
        [&](unsigned long bits) { return RationalInterval(Rational(2, 1) / Rational(ctx.height(nu + 1))) / ctx.zeta(nu, bits); },
        sched);
    if (!bound_z.fits_slong_p()) {
        throw SearchFailed("R_nu exceeds the supported search range");
    }
    const long long bound = bound_z.get_si();

    const FixedPointForm form(ctx.alpha1(), ctx.alpha2());
    const RationalInterval z0 = ctx.zeta(nu, sched.start);
    const u128 zl = FixedPointForm::units_floor(z0.lo());
    const u128 zh = FixedPointForm::units_ceil(z0.hi());
    // +-xi_nu sits on the boundary of the body with value exactly zeta_nu.
    const auto excluded = detail::positive_projection(ctx.m(nu));

    auto inside = [&](long long x1, long long x2) {
        if (excluded && excluded->first == x1 && excluded->second == x2) {
            return false;
        }
        const auto est = form.eval(x1, x2);
        if (est.upper() < zl) {
            return true;
        }
        if (est.lower() > zh) {
            return false;
        }
        const Integer b1 = detail::big(x1), b2 = detail::big(x2);
        return detail::compare_zero(
                   [&](unsigned long bits) { return ctx.value(b1, b2, bits) - ctx.zeta(nu, bits); }, sched) ==
               Ordering::Less;
    };

    std::vector<std::pair<long long, long long>> hits;
    for (long long k = 1; k <= bound && hits.empty(); ++k) {
        for (long long j = std::max<long long>(1, k - next); j <= k; ++j) {
            if (k + j > bound) {
                break;
            }
            if (inside(k, j)) {
                hits.emplace_back(k, j);
            }
            if (j < k && inside(j, k)) {
                hits.emplace_back(j, k);
            }
        }
    }
    if (hits.empty()) {
        throw SearchFailed("no admissible point in the lemma1_search parallelepiped at nu=" + std::to_string(nu));
    }
    const auto [x1, x2] = hits[detail::pick_smallest_value(hits, ctx)];

    WitnessPoint w = detail::make_witness(x1, x2, WitnessSource::Lemma1, ctx);
    auto& c = w.certificate;
    c.bound_kind = BoundKind::Lemma;
    c.max_lower = ctx.height(nu + 1);
    c.max_upper = ctx.zeta_expr(nu, -1, Rational(2) / Rational(ctx.height(nu + 1)));
    c.rhs = ctx.zeta_expr(nu, 1);
    c.strict = true;
    detail::certify_or_throw(w, ctx, "lemma1_search");
    return w;
}

/// Case zeta_nu >= (8 M_{nu+1}^2)^-1: the lemma1_search point satisfies
/// M_{nu+1} <= max <= 4 M_{nu+1} and ||.|| <= 16 max^-2.
inline WitnessPoint corollary1_point(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    const Integer next = ctx.height(nu + 1);
    const Rational threshold(1, Integer(8 * next * next));
    detail::require([&](unsigned long bits) { return ctx.zeta(nu, bits) - threshold; }, Ordering::Greater,
                    "zeta_nu >= (8 M_{nu+1}^2)^-1", ctx.schedule());
    WitnessPoint w = lemma1_search(ctx);
    w.source = WitnessSource::Cor1;
    auto& c = w.certificate;
    c.bound_kind = BoundKind::CaseI;
    c.max_lower = next;
    c.max_upper = BoundExpr{Rational(4 * next), {}, std::nullopt, 0};
    c.rhs = BoundExpr{Rational(16), {{w.max(), GoldenNumber(-2)}}, std::nullopt, 0};
    c.strict = false;
    detail::certify_or_throw(w, ctx, "corollary1_point");
    return w;
}

namespace detail {

// 240 M_{nu+1}^tau M_nu^(-1/tau), which equals 2 M_{nu+1}^tau / A_nu.
inline BoundExpr case2_max_bound(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    return BoundExpr{Rational(240),
                     {{ctx.height(nu + 1), tau_n()}, {ctx.height(nu), GoldenNumber(1) - tau_n()}},
                     std::nullopt,
                     0};
}

// 24^tau M_nu^((1-tau)/tau) max^-tau; (1 - tau)/tau = tau - 2.
inline BoundExpr case2_value_bound(const NuContext& ctx, const Integer& mx)
{
    return BoundExpr{Rational(1),
                     {{Integer(24), tau_n()}, {ctx.height(ctx.nu()), tau_n() - GoldenNumber(2)}, {mx, -tau_n()}},
                     std::nullopt,
                     0};
}

// zeta_nu - A_nu M_{nu+1}^(-tau/(tau-1)), with tau/(tau-1) = tau^2 = tau + 1.
inline RationalInterval case2_margin(const NuContext& ctx, unsigned long bits)
{
    const std::size_t nu = ctx.nu();
    const RationalInterval rhs = a_nu(ctx, bits) * power(ctx.height(nu + 1), -(tau_n() + GoldenNumber(1)), bits);
    return ctx.zeta(nu, bits) - rhs;
}

} // namespace detail

/// Case zeta_nu >= A_nu M_{nu+1}^-tau^2: the lemma1_search point satisfies
/// M_{nu+1} <= max <= 2 M_{nu+1}^tau / A_nu and ||.|| <= 24^tau M_nu^((1-tau)/tau) max^-tau.
inline WitnessPoint corollary2_point(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    detail::require([&](unsigned long bits) { return detail::case2_margin(ctx, bits); }, Ordering::Greater,
                    "zeta_nu >= A_nu M_{nu+1}^(-tau^2)", ctx.schedule());
    WitnessPoint w = lemma1_search(ctx);
    w.source = WitnessSource::Cor2;
    auto& c = w.certificate;
    c.bound_kind = BoundKind::CaseII;
    c.max_lower = ctx.height(nu + 1);
    c.max_upper = detail::case2_max_bound(ctx);
    c.rhs = detail::case2_value_bound(ctx, w.max());
    c.strict = false;
    detail::certify_or_throw(w, ctx, "corollary2_point");
    return w;
}

/// A point of the lattice generated by xi = (x1, x2) and eta = (y1, y2) with
/// its coefficients: point = l_xi * xi + l_eta * eta.
struct LatticePoint {
    long long x1, x2;
    long long l_xi, l_eta;
};

/// All points of <xi, eta> in the closed disc of radius 4D/M centred at
/// (5D/M, 5D/M), where D = |det(xi, eta)| and M = max|xi_j|. Enumerates the box
/// |l_eta| <= 20, |l_xi| <= ceil(20 M_eta / M), which contains every such point
/// whenever D >= M^2 / 2.
inline std::vector<LatticePoint> lemma2_disc_points(long long x1, long long x2, long long y1, long long y2)
{
    using i128 = __int128;
    const long long m = std::max(std::llabs(x1), std::llabs(x2));
    const long long mn = std::max(std::llabs(y1), std::llabs(y2));
    const long long det = std::llabs(x1 * y2 - x2 * y1);
    if (m == 0 || det == 0) {
        throw InvalidArgument("lemma2_disc_points needs two independent vectors");
    }
    const long long lim = (20 * mn + m - 1) / m;
    const i128 r2 = i128(16) * det * det;
    std::vector<LatticePoint> out;
    for (long long le = -20; le <= 20; ++le) {
        for (long long lx = -lim; lx <= lim; ++lx) {
            const long long p1 = lx * x1 + le * y1;
            const long long p2 = lx * x2 + le * y2;
            const i128 d1 = i128(m) * p1 - i128(5) * det;
            const i128 d2 = i128(m) * p2 - i128(5) * det;
            if (d1 * d1 + d2 * d2 <= r2) {
                out.push_back({p1, p2, lx, le});
            }
        }
    }
    return out;
}

namespace detail {

inline void require_lemma2_hypotheses(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    if (nu < 2 || !ctx.has(nu - 1) || !ctx.has(nu + 1)) {
        throw PreconditionNotCertified("lemma2_search needs m_{nu-1}, m_nu, m_{nu+1}");
    }
    if (!det_condition(ctx.m(nu - 1), ctx.m(nu), ctx.m(nu + 1))) {
        throw PreconditionNotCertified("det(m_{nu-1}, m_nu, m_{nu+1}) = 0");
    }
    const Integer& prev = ctx.height(nu - 1);
    const Rational first(1, Integer(8 * prev * ctx.height(nu + 1)));
    const Rational second(1, Integer(8 * prev * ctx.height(nu)));
    require([&](unsigned long bits) { return ctx.zeta(nu, bits) - first; }, Ordering::Less,
            "zeta_nu <= (8 M_{nu-1} M_{nu+1})^-1", ctx.schedule());
    require([&](unsigned long bits) { return ctx.zeta(nu + 1, bits) - second; }, Ordering::Less,
            "zeta_{nu+1} <= (8 M_{nu-1} M_nu)^-1", ctx.schedule());
}

} // namespace detail

/// Point of the lattice spanned by the projections xi_nu, xi_{nu+1} inside the
/// disc of radius 4 D_nu / M_nu centred at (5 D_nu / M_nu, 5 D_nu / M_nu):
/// max <= 20 M_{nu+1} and ||.|| < 40 M_{nu+1} M_nu^-1 zeta_nu.
inline WitnessPoint lemma2_search(const NuContext& ctx)
{
    detail::require_lemma2_hypotheses(ctx);
    const std::size_t nu = ctx.nu();
    const BestApproximation& cur = ctx.m(nu);
    const BestApproximation& nxt = ctx.m(nu + 1);
    const Integer dn = d_nu(cur, nxt);
    if (2 * dn < cur.height * cur.height) {
        throw CertificateFailed("D_nu < M_nu^2 / 2 although the lemma2_search hypotheses hold");
    }
    const auto pts = lemma2_disc_points(cur.m1_ll(), cur.m2_ll(), nxt.m1_ll(), nxt.m2_ll());
    if (pts.empty()) {
        throw SearchFailed("no lattice point in the lemma2_search disc at nu=" + std::to_string(nu));
    }
    long long best_max = -1;
    for (const auto& p : pts) {
        const long long mx = std::max(p.x1, p.x2);
        best_max = best_max < 0 ? mx : std::min(best_max, mx);
    }
    std::vector<std::pair<long long, long long>> tallest;
    std::vector<const LatticePoint*> refs;
    for (const auto& p : pts) {
        if (std::max(p.x1, p.x2) == best_max) {
            tallest.emplace_back(p.x1, p.x2);
            refs.push_back(&p);
        }
    }
    const LatticePoint& chosen = *refs[detail::pick_smallest_value(tallest, ctx)];
    if (chosen.x1 <= 0 || chosen.x2 <= 0) {
        throw SearchFailed("lemma2_search disc point is not positive");
    }

    WitnessPoint w = detail::make_witness(chosen.x1, chosen.x2, WitnessSource::Lemma2, ctx);
    w.lambda = std::array<Integer, 2>{detail::big(chosen.l_xi), detail::big(chosen.l_eta)};
    auto& c = w.certificate;
    c.bound_kind = BoundKind::Lemma;
    c.max_lower = 1;
    c.max_upper = BoundExpr{Rational(20 * nxt.height), {}, std::nullopt, 0};
    Rational ratio(Integer(40 * nxt.height), cur.height);
    ratio.canonicalize();
    c.rhs = ctx.zeta_expr(nu, 1, ratio);
    c.strict = true;
    detail::certify_or_throw(w, ctx, "lemma2_search");
    return w;
}

/// Case zeta_nu < A_nu M_{nu+1}^-tau^2 with both lemma2_search inequalities: the
/// lemma2_search point satisfies max <= 20 M_{nu+1} and ||.|| < 24^tau M_nu^((1-tau)/tau) max^-tau.
inline WitnessPoint corollary3_point(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    if (nu < 2 || !ctx.has(nu - 1) || !det_condition(ctx.m(nu - 1), ctx.m(nu), ctx.m(nu + 1))) {
        throw PreconditionNotCertified("det(m_{nu-1}, m_nu, m_{nu+1}) = 0 or m_{nu-1} missing");
    }
    detail::require([&](unsigned long bits) { return detail::case2_margin(ctx, bits); }, Ordering::Less,
                    "zeta_nu < A_nu M_{nu+1}^(-tau^2)", ctx.schedule());
    WitnessPoint w = lemma2_search(ctx);
    w.source = WitnessSource::Cor3;
    auto& c = w.certificate;
    c.bound_kind = BoundKind::CaseII;
    c.max_lower = 1;
    c.max_upper = BoundExpr{Rational(20 * ctx.height(nu + 1)), {}, std::nullopt, 0};
    c.rhs = detail::case2_value_bound(ctx, w.max());
    c.strict = true;
    detail::certify_or_throw(w, ctx, "corollary3_point");
    return w;
}

/// The case analysis behind the two alternatives for consecutive best
/// approximations with det(m_{nu-1}, m_nu, m_{nu+1}) != 0. Returns a CASE_I
/// witness (M_{nu+2} <= max <= 4 M_{nu+2}, ||.|| <= 16 max^-2) or a CASE_II
/// witness (max <= 240 M_{nu+1}^tau M_nu^-1/tau, ||.|| <= 24^tau M_nu^((1-tau)/tau) max^-tau).
inline WitnessPoint theorem3_dispatch(const NuContext& ctx)
{
    const std::size_t nu = ctx.nu();
    if (nu < 2 || !ctx.has(nu - 1) || !ctx.has(nu) || !ctx.has(nu + 1) || !ctx.has(nu + 2)) {
        throw Inapplicable("dispatch needs m_{nu-1} .. m_{nu+2}");
    }
    if (!det_condition(ctx.m(nu - 1), ctx.m(nu), ctx.m(nu + 1))) {
        throw DetConditionFailed("det(m_{nu-1}, m_nu, m_{nu+1}) = 0 at nu=" + std::to_string(nu));
    }
    const auto& sched = ctx.schedule();
    const Integer& far = ctx.height(nu + 2);
    const Rational case1_threshold(1, Integer(8 * far * far));
    const Ordering split = detail::compare_zero(
        [&](unsigned long bits) { return ctx.zeta(nu + 1, bits) - case1_threshold; }, sched);
    std::optional<std::string> case1_failure;
    if (split == Ordering::Greater) {
        try {
            return corollary1_point(ctx.at(nu + 1));
        } catch (const CertificateFailed& e) {
            // The lemma1_search point can exceed 4 M_{nu+2}: the radius is only
            // bounded by 16 M_{nu+2} here. Try the CASE_II route instead.
            case1_failure = e.what();
        }
    } else {
        // zeta_{nu+1} < (8 M_{nu+2}^2)^-1 <= (8 M_{nu-1} M_nu)^-1; certified directly.
        const Rational second(1, Integer(8 * ctx.height(nu - 1) * ctx.height(nu)));
        if (detail::compare_zero([&](unsigned long bits) { return ctx.zeta(nu + 1, bits) - second; }, sched) !=
            Ordering::Less) {
            throw Inapplicable("zeta_{nu+1} <= (8 M_{nu-1} M_nu)^-1 fails at nu=" + std::to_string(nu));
        }
    }
    auto give_up = [&](const std::string& why) -> WitnessPoint {
        if (case1_failure) {
            throw CertificateFailed(*case1_failure + "; CASE_II fallback: " + why);
        }
        throw Inapplicable(why);
    };
    WitnessPoint w;
    if (detail::compare_zero([&](unsigned long bits) { return detail::case2_margin(ctx, bits); }, sched) ==
        Ordering::Greater) {
        try {
            w = corollary2_point(ctx);
        } catch (const CertificateFailed& e) {
            if (!case1_failure) {
                throw;
            }
            return give_up(e.what());
        }
    } else {
        try {
            w = corollary3_point(ctx);
        } catch (const PreconditionNotCertified& e) {
            return give_up(std::string("corollary3_point branch at nu=") + std::to_string(nu) + ": " + e.what());
        } catch (const CertificateFailed& e) {
            if (!case1_failure) {
                throw;
            }
            return give_up(e.what());
        }
    }
    w.case1_fallback = case1_failure.has_value();
    auto& c = w.certificate;
    c.bound_kind = BoundKind::CaseII;
    c.max_lower = 1;
    c.max_upper = detail::case2_max_bound(ctx);
    c.rhs = detail::case2_value_bound(ctx, w.max());
    c.strict = false;
    if (!c.check(w.x1, w.x2, ctx.alpha1(), ctx.alpha2(), sched)) {
        return give_up("CASE_II certificate for (" + w.x1.get_str() + ", " + w.x2.get_str() + ") does not hold");
    }
    return w;
}

} // namespace posapprox
