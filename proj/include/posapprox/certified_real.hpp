#pragma once

#include <bit>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "posapprox/interval.hpp"
#include "posapprox/polynomial.hpp"

namespace posapprox {

/// Refinement schedule shared by every certified decision: start at `start`
/// bits and double until `cap`.
struct PrecisionSchedule {
    unsigned long start = 128;
    unsigned long cap = 65536;

    template <typename F>
    void for_each(F&& f) const
    {
        for (unsigned long p = start; p <= cap; p *= 2) {
            if (f(p)) {
                return;
            }
        }
    }
};

inline constexpr unsigned long kDefaultPrecisionCap = 65536;

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline Integer parse_integer(std::string_view s)
{
    s = trim(s);
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        i = 1;
    }
    if (i == s.size()) {
        throw ParseError("expected an integer, got '" + std::string(s) + "'");
    }
    for (std::size_t j = i; j < s.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
            throw ParseError("expected an integer, got '" + std::string(s) + "'");
        }
    }
    std::string str(s[0] == '+' ? s.substr(1) : s);
    return Integer(str, 10);
}

/// Accepts "p", "p/q" and plain decimals "-1.25".
inline Rational parse_rational(std::string_view s)
{
    s = trim(s);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const Integer p = parse_integer(s.substr(0, slash));
        const Integer q = parse_integer(s.substr(slash + 1));
        if (q == 0) {
            throw ParseError("zero denominator in '" + std::string(s) + "'");
        }
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        bool neg = false;
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) {
            neg = ip[0] == '-';
            ip.remove_prefix(1);
        }
        if (ip.empty() && fp.empty()) {
            throw ParseError("malformed decimal '" + std::string(s) + "'");
        }
        const Integer whole = ip.empty() ? Integer(0) : parse_integer(ip);
        if (whole < 0 || (!fp.empty() && (fp[0] == '-' || fp[0] == '+'))) {
            throw ParseError("malformed decimal '" + std::string(s) + "'");
        }
        const Integer frac = fp.empty() ? Integer(0) : parse_integer(fp);
        Rational r = Rational(whole) + Rational(frac, pow10(fp.size()));
        r.canonicalize();
        return neg ? Rational(-r) : r;
    }
    return Rational(parse_integer(s));
}

inline std::string rational_str(const Rational& q)
{
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

} // namespace detail

/// A real number that can be enclosed in rational intervals of any requested
/// width. Immutable; copies share the refinement cache.
class CertifiedReal {
public:
    enum class Kind { Rational, Algebraic, Decimal };

    struct RationalValue {
        posapprox::Rational value;
    };
    /// Root of `poly` (integer coefficients, increasing degree) isolated in (lo, hi).
    struct AlgebraicRoot {
        std::vector<Integer> coeffs;
        posapprox::Rational lo, hi;
    };
    /// Known only up to |x - value| <= error.
    struct DecimalLiteral {
        posapprox::Rational value, error;
        std::string digits;
        long error_exponent = 0;
    };
    using Descriptor = std::variant<RationalValue, AlgebraicRoot, DecimalLiteral>;

    static CertifiedReal rational(const posapprox::Rational& q) { return CertifiedReal(RationalValue{q}); }

    static CertifiedReal algebraic(std::vector<Integer> coeffs, const posapprox::Rational& lo,
                                   const posapprox::Rational& hi)
    {
        return CertifiedReal(AlgebraicRoot{std::move(coeffs), lo, hi});
    }

    /// Value given by a decimal string with error bound 10^error_exponent.
    static CertifiedReal decimal(const std::string& digits, long error_exponent)
    {
        DecimalLiteral d;
        d.digits = digits;
        d.error_exponent = error_exponent;
        d.value = detail::parse_rational(digits);
        const Integer p = detail::pow10(static_cast<unsigned long>(error_exponent < 0 ? -error_exponent : error_exponent));
        d.error = error_exponent < 0 ? posapprox::Rational(1, p) : posapprox::Rational(p);
        d.error.canonicalize();
        return CertifiedReal(std::move(d));
    }

    /// Parses `rat:<p>/<q>`, `alg:<c0,...,cn>@[<lo>,<hi>]` or `dec:<digits>e<err_exp>`.
    static CertifiedReal parse(std::string_view text)
    {
        text = detail::trim(text);
        auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("descriptor '" + std::string(text) + "' has no kind prefix (rat:, alg:, dec:)");
        }
        const std::string_view kind = text.substr(0, colon);
        std::string_view body = text.substr(colon + 1);
        if (kind == "rat") {
            return rational(detail::parse_rational(body));
        }
        if (kind == "dec") {
            auto e = body.find_last_of("eE");
            if (e == std::string_view::npos) {
                throw ParseError("decimal descriptor needs an error exponent: '" + std::string(text) + "'");
            }
            const Integer ex = detail::parse_integer(body.substr(e + 1));
            if (!ex.fits_slong_p()) {
                throw ParseError("error exponent out of range");
            }
            detail::parse_rational(body.substr(0, e));
            return decimal(std::string(detail::trim(body.substr(0, e))), ex.get_si());
        }
        if (kind == "alg") {
            auto at = body.find('@');
            if (at == std::string_view::npos) {
                throw ParseError("algebraic descriptor needs '@[lo,hi]': '" + std::string(text) + "'");
            }
            std::string_view cs = detail::trim(body.substr(0, at));
            if (cs.size() >= 2 && cs.front() == '<' && cs.back() == '>') {
                cs = cs.substr(1, cs.size() - 2);
            }
            std::vector<Integer> coeffs;
            std::size_t pos = 0;
            while (pos <= cs.size()) {
                auto comma = cs.find(',', pos);
                if (comma == std::string_view::npos) {
                    comma = cs.size();
                }
                coeffs.push_back(detail::parse_integer(cs.substr(pos, comma - pos)));
                pos = comma + 1;
            }
            std::string_view iv = detail::trim(body.substr(at + 1));
            if (iv.size() < 2 || iv.front() != '[' || iv.back() != ']') {
                throw ParseError("isolating interval must be written [lo,hi]");
            }
            iv = iv.substr(1, iv.size() - 2);
            auto comma = iv.find(',');
            if (comma == std::string_view::npos) {
                throw ParseError("isolating interval must be written [lo,hi]");
            }
            return algebraic(std::move(coeffs), detail::parse_rational(iv.substr(0, comma)),
                             detail::parse_rational(iv.substr(comma + 1)));
        }
        throw ParseError("unknown descriptor kind '" + std::string(kind) + "'");
    }

    Kind kind() const { return static_cast<Kind>(impl_->desc.index()); }
    const Descriptor& descriptor() const { return impl_->desc; }

    /// Canonical descriptor text; parse(to_string()) reproduces the value.
    std::string to_string() const
    {
        std::ostringstream os;
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, RationalValue>) {
                    os << "rat:" << d.value.get_num() << '/' << d.value.get_den();
                } else if constexpr (std::is_same_v<T, AlgebraicRoot>) {
                    os << "alg:";
                    for (std::size_t i = 0; i < d.coeffs.size(); ++i) {
                        os << (i ? "," : "") << d.coeffs[i];
                    }
                    os << "@[" << detail::rational_str(d.lo) << ',' << detail::rational_str(d.hi) << ']';
                } else {
                    os << "dec:" << d.digits << 'e' << d.error_exponent;
                }
            },
            impl_->desc);
        return os.str();
    }

    /// The a-priori enclosure: the point, the isolating interval, or the error ball.
    RationalInterval coarse_enclosure() const
    {
        return std::visit(
            [](const auto& d) -> RationalInterval {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, RationalValue>) {
                    return RationalInterval(d.value);
                } else if constexpr (std::is_same_v<T, AlgebraicRoot>) {
                    return {d.lo, d.hi};
                } else {
                    return {d.value - d.error, d.value + d.error};
                }
            },
            impl_->desc);
    }

    /// Interval of width <= 2^-bits containing the value. Deterministic: the
    /// result depends only on the descriptor and `bits`.
    RationalInterval enclosure(unsigned long bits) const
    {
        switch (kind()) {
        case Kind::Rational:
            return RationalInterval(std::get<RationalValue>(impl_->desc).value);
        case Kind::Decimal: {
            const auto& d = std::get<DecimalLiteral>(impl_->desc);
            RationalInterval iv(d.value - d.error, d.value + d.error);
            if (!iv.width_at_most_2exp(bits)) {
                throw PrecisionExhausted("decimal literal '" + d.digits + "' is only known to 1e" +
                                         std::to_string(d.error_exponent) + ", cannot reach 2^-" +
                                         std::to_string(bits));
            }
            return iv;
        }
        case Kind::Algebraic:
            return algebraic_level(level_for(bits));
        }
        throw InvalidArgument("unreachable descriptor kind");
    }

    /// Tightest enclosure available at or below `bits` without throwing.
    RationalInterval best_enclosure(unsigned long bits) const
    {
        if (kind() == Kind::Decimal) {
            return coarse_enclosure();
        }
        return enclosure(bits);
    }

private:
    struct Impl {
        Descriptor desc;
        Polynomial refine_poly; // squarefree part, algebraic only
        mutable std::mutex mutex;
        mutable std::map<unsigned long, RationalInterval> levels;
    };

    explicit CertifiedReal(Descriptor d) : impl_(std::make_shared<Impl>())
    {
        impl_->desc = std::move(d);
        validate();
    }

    void validate()
    {
        if (auto* a = std::get_if<AlgebraicRoot>(&impl_->desc)) {
            const Polynomial p = Polynomial::from_integers(a->coeffs);
            if (p.degree() < 1) {
                throw InvalidArgument("algebraic descriptor needs a polynomial of degree >= 1");
            }
            if (!(a->lo < a->hi)) {
                throw InvalidArgument("isolating interval must satisfy lo < hi");
            }
            const int slo = p.sign_at(a->lo), shi = p.sign_at(a->hi);
            if (slo == 0 || shi == 0 || slo == shi) {
                throw InvalidArgument("polynomial has no sign change across the isolating interval");
            }
            if (p.count_roots(a->lo, a->hi) != 1) {
                throw InvalidArgument("isolating interval contains more than one real root");
            }
            impl_->refine_poly = p.squarefree_part();
        } else if (auto* d = std::get_if<DecimalLiteral>(&impl_->desc)) {
            if (sgn(d->error) <= 0) {
                throw InvalidArgument("decimal error bound must be positive");
            }
        }
    }

    static unsigned long level_for(unsigned long bits)
    {
        return std::bit_ceil(std::max<unsigned long>(bits, 64));
    }

    RationalInterval algebraic_level(unsigned long level) const
    {
        {
            std::lock_guard lock(impl_->mutex);
            if (auto it = impl_->levels.find(level); it != impl_->levels.end()) {
                return it->second;
            }
        }
        RationalInterval start = level == 64 ? coarse_enclosure() : algebraic_level(level / 2);
        RationalInterval refined = refine(start, level);
        std::lock_guard lock(impl_->mutex);
        return impl_->levels.emplace(level, std::move(refined)).first->second;
    }

    // Shrinks a bracket of the root to width <= 2^-bits: Newton steps verified
    // by a sign change, bisection when a step cannot be verified.
    RationalInterval refine(RationalInterval bracket, unsigned long bits) const
    {
        const Polynomial& p = impl_->refine_poly;
        const Polynomial dp = p.derivative();
        Rational lo = bracket.lo(), hi = bracket.hi();
        if (lo == hi) {
            return bracket;
        }
        const int slo = p.sign_at(lo);
        const auto grid = static_cast<long>(bits + 2);
        const Rational eps = detail::dyadic(1, bits + 1);
        while (detail::mul_2exp(hi - lo, static_cast<long>(bits)) > 1) {
            const Rational mid = (lo + hi) / 2;
            const Rational pm = p(mid);
            if (sgn(pm) == 0) {
                return RationalInterval(mid);
            }
            const Rational dm = dp(mid);
            if (sgn(dm) != 0) {
                Rational x = mid - pm / dm;
                x = detail::dyadic(detail::floor_q(detail::mul_2exp(x, grid)), static_cast<unsigned long>(grid));
                const Rational a = x - eps, b = x + eps;
                if (lo <= a && b <= hi) {
                    const int sa = p.sign_at(a), sb = p.sign_at(b);
                    if (sa == 0) {
                        return RationalInterval(a);
                    }
                    if (sb == 0) {
                        return RationalInterval(b);
                    }
                    if (sa != sb) {
                        lo = a;
                        hi = b;
                        continue;
                    }
                }
            }
            if (sgn(pm) == slo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return {lo, hi};
    }

    std::shared_ptr<Impl> impl_;
};

/// The golden ratio (1 + sqrt 5) / 2 as the root of x^2 - x - 1 in [1, 2].
inline const CertifiedReal& golden_ratio()
{
    static const CertifiedReal tau = CertifiedReal::algebraic({Integer(-1), Integer(-1), Integer(1)}, 1, 2);
    return tau;
}

/// Enclosure with the cap enforced.
inline RationalInterval enclosure(const CertifiedReal& x, unsigned long precision_bits,
                                  unsigned long cap = kDefaultPrecisionCap)
{
    if (precision_bits == 0) {
        throw InvalidArgument("precision must be positive");
    }
    if (precision_bits > cap) {
        throw PrecisionExhausted("requested " + std::to_string(precision_bits) + " bits, cap is " +
                                 std::to_string(cap));
    }
    return x.enclosure(precision_bits);
}

/// Enclosure of the distance to the nearest integer over every point of v.
inline RationalInterval dist_nearest_int(const RationalInterval& v)
{
    if (v.width() >= Rational(1, 4)) {
        throw IntervalTooWide("dist_nearest_int needs an interval narrower than 1/4");
    }
    auto dist = [](const Rational& x) {
        const Rational frac = x - Rational(detail::floor_q(x));
        return std::min(frac, Rational(1 - frac));
    };
    const Rational dl = dist(v.lo()), dh = dist(v.hi());
    Rational lo = std::min(dl, dh), hi = std::max(dl, dh);
    // Kinks: an integer inside v gives minimum 0, a half-integer gives maximum 1/2.
    if (Rational(detail::ceil_q(v.lo())) <= v.hi()) {
        lo = 0;
    }
    const Rational two_lo = v.lo() * 2 - 1, two_hi = v.hi() * 2 - 1;
    // A half-integer h = k + 1/2 lies in v iff 2v - 1 contains an even integer.
    Integer k = detail::ceil_q(two_lo);
    if (k % 2 != 0) {
        ++k;
    }
    if (Rational(k) <= two_hi) {
        hi = Rational(1, 2);
    }
    return {lo, hi};
}

namespace detail {

inline unsigned long bit_length(const Integer& z)
{
    return sgn(z) == 0 ? 0 : static_cast<unsigned long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

} // namespace detail

/// Enclosure of m0 + m1*a1 + m2*a2 of width <= 2^-precision_bits.
inline RationalInterval eval_linear_form(const Integer& m0, const Integer& m1, const Integer& m2,
                                         const CertifiedReal& a1, const CertifiedReal& a2,
                                         unsigned long precision_bits)
{
    RationalInterval v{Rational(m0)};
    if (sgn(m1) != 0) {
        v = v + a1.enclosure(precision_bits + detail::bit_length(m1) + 1) * Rational(m1);
    }
    if (sgn(m2) != 0) {
        v = v + a2.enclosure(precision_bits + detail::bit_length(m2) + 1) * Rational(m2);
    }
    return v;
}

enum class Ordering { Less, Greater };

/// Decides value < threshold by refining `source(bits)` along the schedule.
/// Throws PrecisionExhausted when no enclosure separates the two, which is
/// what happens on exact equality.
template <typename Source>
Ordering certified_compare(Source&& source, const Rational& threshold, const PrecisionSchedule& schedule = {})
{
    std::optional<Ordering> out;
    RationalInterval last;
    schedule.for_each([&](unsigned long bits) {
        last = source(bits);
        if (last.strictly_below(threshold)) {
            out = Ordering::Less;
        } else if (last.strictly_above(threshold)) {
            out = Ordering::Greater;
        } else if (last.is_point()) {
            return true; // exact equality, refinement cannot help
        }
        return out.has_value();
    });
    if (!out) {
        std::ostringstream os;
        os << "cannot separate value " << last << " from threshold "
           << decimal_string(threshold, 20, Rounding::Down) << " up to " << schedule.cap << " bits";
        throw PrecisionExhausted(os.str());
    }
    return *out;
}

/// Index of the strictly smallest of n values given by `source(i, bits)`,
/// certified by interval separation.
template <typename Source>
std::size_t certified_argmin(std::size_t n, Source&& source, const PrecisionSchedule& schedule = {})
{
    if (n == 0) {
        throw InvalidArgument("certified_argmin of an empty set");
    }
    if (n == 1) {
        return 0;
    }
    std::optional<std::size_t> out;
    std::vector<RationalInterval> iv(n);
    schedule.for_each([&](unsigned long bits) {
        bool all_points = true;
        for (std::size_t i = 0; i < n; ++i) {
            iv[i] = source(i, bits);
            all_points = all_points && iv[i].is_point();
        }
        std::size_t w = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (iv[i].hi() < iv[w].hi()) {
                w = i;
            }
        }
        bool separated = true;
        for (std::size_t i = 0; i < n && separated; ++i) {
            separated = i == w || iv[w].strictly_below(iv[i]);
        }
        if (separated) {
            out = w;
        }
        return separated || all_points;
    });
    if (!out) {
        throw PrecisionExhausted("two candidate values coincide up to " + std::to_string(schedule.cap) +
                                 " bits; 1, a1, a2 look rationally dependent");
    }
    return *out;
}

/// Certified sign of a nonzero quantity.
template <typename Source>
int certified_sign(Source&& source, const PrecisionSchedule& schedule = {})
{
    return certified_compare(std::forward<Source>(source), Rational(0), schedule) == Ordering::Less ? -1 : 1;
}

} // namespace posapprox
