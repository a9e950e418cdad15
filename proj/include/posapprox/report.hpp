#pragma once

#include <json.hpp>

#include <ostream>
#include <sstream>
#include <string>

#include "posapprox/spectrum.hpp"

namespace posapprox {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "posapprox.run_report/1";
inline constexpr int kDecimalDigits = 30;

namespace detail {

inline std::string dec_lo(const Rational& q) { return decimal_string(q, kDecimalDigits, Rounding::Down); }
inline std::string dec_hi(const Rational& q) { return decimal_string(q, kDecimalDigits, Rounding::Up); }

inline ojson integer_json(const Integer& z)
{
    if (z.fits_slong_p()) {
        return z.get_si();
    }
    return z.get_str();
}

inline std::string golden_str(const GoldenNumber& g)
{
    return rational_str(g.rational_part()) + " + " + rational_str(g.tau_part()) + "*tau";
}

} // namespace detail

/// {"nu", "m": [m0, m1, m2], "M", "zeta_lo", "zeta_hi"}
inline ojson to_json(const BestApproximation& b)
{
    return ojson{{"nu", b.nu},
                 {"m", {detail::integer_json(b.m0), detail::integer_json(b.m1), detail::integer_json(b.m2)}},
                 {"M", detail::integer_json(b.height)},
                 {"zeta_lo", detail::dec_lo(b.zeta.lo())},
                 {"zeta_hi", detail::dec_hi(b.zeta.hi())}};
}

/// Witness export line. `nu` is the index the dispatch ran at; `source_nu` the
/// best approximation the point was built from.
inline ojson to_json(std::size_t nu, const WitnessPoint& w)
{
    return ojson{{"nu", nu},
                 {"case", to_string(w.certificate.bound_kind)},
                 {"source", to_string(w.source)},
                 {"source_nu", w.nu},
                 {"x", {detail::integer_json(w.x1), detail::integer_json(w.x2)}},
                 {"value_hi", detail::dec_hi(w.value.hi())},
                 {"bound_rhs", detail::dec_lo(w.certificate.rhs_enclosure.lo())},
                 {"holds", w.certificate.holds}};
}

inline ojson to_json(const RunReport& r)
{
    const auto& p = r.params;
    ojson params{{"Gamma", detail::rational_str(p.Gamma)},
                 {"Gamma_decimal", detail::dec_lo(p.Gamma)},
                 {"gamma", detail::rational_str(p.gamma)},
                 {"g_exact", detail::golden_str(g_exact(p.gamma))},
                 {"g_lo", detail::dec_lo(p.g_enclosure.lo())},
                 {"g_hi", detail::dec_hi(p.g_enclosure.hi())},
                 {"C_lo", detail::dec_lo(p.C_enclosure.lo())},
                 {"C_hi", detail::dec_hi(p.C_enclosure.hi())}};

    const auto& ba = r.badly_approx;
    ojson violations = ojson::array();
    for (const auto& v : ba.violations) {
        violations.push_back({{"m", {v.m1, v.m2}}, {"product_hi", detail::dec_hi(v.product.hi())}});
    }
    ojson gamma_h{{"height", r.gamma_height},
                  {"Gamma_H_lo", detail::dec_lo(ba.gamma_h.lo())},
                  {"Gamma_H_hi", detail::dec_hi(ba.gamma_h.hi())},
                  {"certified_Gamma_H", detail::rational_str(ba.certified_gamma_h)},
                  {"argmin", {ba.gamma_h_m1, ba.gamma_h_m2}},
                  {"violations", violations},
                  {"violations_truncated", ba.violations_truncated}};

    ojson seq = ojson::array();
    for (const auto& b : r.best_approximations) {
        seq.push_back(to_json(b));
    }
    ojson witnesses = ojson::array();
    for (const auto& e : r.entries) {
        ojson w = to_json(e.nu, e.witness);
        w["value_lo"] = detail::dec_lo(e.witness.value.lo());
        w["lhs_lo"] = detail::dec_lo(e.lhs.lo());
        w["lhs_hi"] = detail::dec_hi(e.lhs.hi());
        w["C_lo"] = detail::dec_lo(p.C_enclosure.lo());
        w["c_bound_holds"] = e.holds;
        w["case_argument"] = e.case_argument;
        w["case1_fallback"] = e.witness.case1_fallback;
        w["tau_product_hi"] = detail::dec_hi(e.tau_product.hi());
        witnesses.push_back(std::move(w));
    }
    ojson failures = ojson::array();
    for (const auto& f : r.failures) {
        failures.push_back({{"nu", f.nu}, {"kind", f.kind}, {"message", f.message}});
    }
    return ojson{{"schema", kReportSchema},
                 {"alpha1", r.alpha1},
                 {"alpha2", r.alpha2},
                 {"height_bound", r.height_bound},
                 {"params", params},
                 {"gamma_mode", r.gamma_mode == GammaMode::Supplied ? "supplied" : "empirical"},
                 {"gamma_verified_height", r.gamma_height},
                 {"gamma_h", gamma_h},
                 {"best_approx_count", r.best_approximations.size()},
                 {"best_approximations", seq},
                 {"chain_failures", r.chain_failures},
                 {"witnesses", witnesses},
                 {"failures", failures},
                 {"status", r.status}};
}

inline std::string best_approx_csv_header() { return "nu,m0,m1,m2,M,zeta_lo,zeta_hi"; }

inline std::string to_csv(const BestApproximation& b)
{
    std::ostringstream os;
    os << b.nu << ',' << b.m0 << ',' << b.m1 << ',' << b.m2 << ',' << b.height << ',' << detail::dec_lo(b.zeta.lo())
       << ',' << detail::dec_hi(b.zeta.hi());
    return os.str();
}

inline std::string witness_csv_header() { return "nu,case,source,source_nu,x1,x2,value_hi,bound_rhs,holds"; }

inline std::string to_csv(std::size_t nu, const WitnessPoint& w)
{
    std::ostringstream os;
    os << nu << ',' << to_string(w.certificate.bound_kind) << ',' << to_string(w.source) << ',' << w.nu << ','
       << w.x1 << ',' << w.x2 << ',' << detail::dec_hi(w.value.hi()) << ','
       << detail::dec_lo(w.certificate.rhs_enclosure.lo()) << ',' << (w.certificate.holds ? "true" : "false");
    return os.str();
}

inline void write_csv(std::ostream& os, const RunReport& r)
{
    os << "nu,case,x1,x2,value_hi,lhs_hi,C_lo,holds\n";
    for (const auto& e : r.entries) {
        os << e.nu << ',' << to_string(e.witness.certificate.bound_kind) << ',' << e.witness.x1 << ','
           << e.witness.x2 << ',' << detail::dec_hi(e.witness.value.hi()) << ',' << detail::dec_hi(e.lhs.hi())
           << ',' << detail::dec_lo(r.params.C_enclosure.lo()) << ',' << (e.holds ? "true" : "false") << '\n';
    }
}

} // namespace posapprox
