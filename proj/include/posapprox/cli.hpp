#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "posapprox/report.hpp"

namespace posapprox::cli {

enum class Subcommand { BestApprox, Witness, Verify };
enum class OutputFormat { Json, Csv };

inline constexpr const char* kPrecisionCapEnv = "POSAPPROX_PRECISION_CAP";

struct CliConfig {
    Subcommand subcommand = Subcommand::BestApprox;
    std::string alpha1, alpha2;
    long long height = 1000;
    Rational gamma{2};
    std::optional<Rational> Gamma;
    std::optional<long long> gamma_height;
    unsigned long precision_cap = kDefaultPrecisionCap;
    OutputFormat format = OutputFormat::Json;
    std::string output; // empty: standard output

    friend bool operator==(const CliConfig& a, const CliConfig& b)
    {
        return a.subcommand == b.subcommand && a.alpha1 == b.alpha1 && a.alpha2 == b.alpha2 &&
               a.height == b.height && a.gamma == b.gamma && a.Gamma == b.Gamma &&
               a.gamma_height == b.gamma_height && a.precision_cap == b.precision_cap && a.format == b.format &&
               a.output == b.output;
    }
};

inline const char* to_string(Subcommand s)
{
    switch (s) {
    case Subcommand::BestApprox: return "best-approx";
    case Subcommand::Witness: return "witness";
    case Subcommand::Verify: return "verify";
    }
    return "?";
}

namespace detail {

inline Rational parse_flag_rational(const std::string& flag, const std::string& text)
{
    try {
        return posapprox::detail::parse_rational(text);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

inline unsigned long parse_cap(const std::string& origin, const std::string& text)
{
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(text, &used);
        if (used == text.size() && v >= 128) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError(origin + ": expected an integer >= 128, got '" + text + "'");
}

} // namespace detail

/// Parses the arguments after the program name.
inline CliConfig parse_args(const std::vector<std::string>& args)
{
    CLI::App app{"Certified positive-integer approximations of linear forms", "posapprox"};
    app.require_subcommand(1);
    app.set_help_flag();

    struct Raw {
        std::string alpha1, alpha2, gamma = "2", big_gamma, format = "json", output, cap;
        long long height = 1000, gamma_height = 0;
    };
    Raw raw;
    std::vector<std::pair<Subcommand, CLI::App*>> subs;
    for (Subcommand s : {Subcommand::BestApprox, Subcommand::Witness, Subcommand::Verify}) {
        CLI::App* sub = app.add_subcommand(to_string(s));
        sub->add_option("--alpha1", raw.alpha1, "first real, as a descriptor")->required();
        sub->add_option("--alpha2", raw.alpha2, "second real, as a descriptor")->required();
        sub->add_option("--height", raw.height, "height bound H >= 1");
        sub->add_option("--gamma", raw.gamma, "exponent gamma >= 2");
        sub->add_option("--Gamma", raw.big_gamma, "constant Gamma in (0, 1); empirical Gamma_H when absent");
        sub->add_option("--gamma-height", raw.gamma_height, "height used for the empirical Gamma_H");
        sub->add_option("--precision-cap", raw.cap, "largest working precision in bits");
        sub->add_option("--format", raw.format, "json or csv");
        sub->add_option("--output", raw.output, "output file (default: standard output)");
        subs.emplace_back(s, sub);
    }

    std::vector<std::string> argv_store{"posapprox"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CliConfig c;
    for (const auto& [s, sub] : subs) {
        if (sub->parsed()) {
            c.subcommand = s;
        }
    }
    for (const auto* flag : {"--alpha1", "--alpha2"}) {
        const std::string& text = std::string(flag) == "--alpha1" ? raw.alpha1 : raw.alpha2;
        try {
            CertifiedReal::parse(text);
        } catch (const error& e) {
            throw UsageError(std::string(flag) + ": " + e.what());
        }
    }
    c.alpha1 = raw.alpha1;
    c.alpha2 = raw.alpha2;
    if (raw.height < 1) {
        throw UsageError("--height: must be >= 1");
    }
    c.height = raw.height;
    c.gamma = detail::parse_flag_rational("--gamma", raw.gamma);
    if (c.gamma < 2) {
        throw UsageError("--gamma: must be >= 2");
    }
    if (!raw.big_gamma.empty()) {
        c.Gamma = detail::parse_flag_rational("--Gamma", raw.big_gamma);
        if (sgn(*c.Gamma) <= 0 || *c.Gamma >= 1) {
            throw UsageError("--Gamma: must lie in (0, 1)");
        }
    }
    if (raw.gamma_height < 0) {
        throw UsageError("--gamma-height: must be >= 1");
    }
    if (raw.gamma_height > 0) {
        c.gamma_height = raw.gamma_height;
    }
    if (!raw.cap.empty()) {
        c.precision_cap = detail::parse_cap("--precision-cap", raw.cap);
    } else if (const char* env = std::getenv(kPrecisionCapEnv)) {
        c.precision_cap = detail::parse_cap(kPrecisionCapEnv, env);
    }
    if (raw.format == "json") {
        c.format = OutputFormat::Json;
    } else if (raw.format == "csv") {
        c.format = OutputFormat::Csv;
    } else {
        throw UsageError("--format: expected json or csv, got '" + raw.format + "'");
    }
    c.output = raw.output;
    return c;
}

inline CliConfig parse_args(int argc, const char* const* argv)
{
    return parse_args(std::vector<std::string>(argv + 1, argv + argc));
}

/// Arguments that parse back to `c`.
inline std::vector<std::string> render(const CliConfig& c)
{
    std::vector<std::string> out{to_string(c.subcommand), "--alpha1", c.alpha1, "--alpha2", c.alpha2,
                                 "--height", std::to_string(c.height), "--gamma",
                                 posapprox::detail::rational_str(c.gamma)};
    if (c.Gamma) {
        out.insert(out.end(), {"--Gamma", posapprox::detail::rational_str(*c.Gamma)});
    }
    if (c.gamma_height) {
        out.insert(out.end(), {"--gamma-height", std::to_string(*c.gamma_height)});
    }
    out.insert(out.end(), {"--precision-cap", std::to_string(c.precision_cap), "--format",
                           c.format == OutputFormat::Json ? "json" : "csv"});
    if (!c.output.empty()) {
        out.insert(out.end(), {"--output", c.output});
    }
    return out;
}

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kPrecision = 3, kNoApplicableNu = 4 };

inline int exit_code_for(const error& e)
{
    if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
        dynamic_cast<const InvalidArgument*>(&e)) {
        return kUsage;
    }
    if (dynamic_cast<const PrecisionExhausted*>(&e)) {
        return kPrecision;
    }
    if (dynamic_cast<const NoApplicableNu*>(&e)) {
        return kNoApplicableNu;
    }
    return kFailure;
}

inline void diagnostic(std::ostream& err, const std::string& kind, const std::string& message, int code,
                       std::optional<std::size_t> nu = std::nullopt)
{
    ojson d{{"error", kind}, {"message", message}};
    if (nu) {
        d["nu"] = *nu;
    }
    d["exit"] = code;
    err << d.dump() << '\n';
}

namespace detail {

inline std::vector<std::size_t> applicable_nu(const BestApproxSequence& seq)
{
    std::vector<std::size_t> out;
    for (std::size_t nu = 2; nu + 2 <= seq.size(); ++nu) {
        if (det_condition(seq.at(nu - 1), seq.at(nu), seq.at(nu + 1))) {
            out.push_back(nu);
        }
    }
    return out;
}

inline int run_best_approx(const CliConfig& c, const CertifiedReal& a1, const CertifiedReal& a2,
                           const PrecisionSchedule& sched, std::ostream& out)
{
    const BestApproxSequence seq = enumerate_best_approximations(a1, a2, c.height, sched);
    if (c.format == OutputFormat::Csv) {
        out << best_approx_csv_header() << '\n';
    }
    for (const auto& b : seq.items) {
        out << (c.format == OutputFormat::Json ? to_json(b).dump() : to_csv(b)) << '\n';
    }
    return kOk;
}

inline int run_witness(const CliConfig& c, const CertifiedReal& a1, const CertifiedReal& a2,
                       const PrecisionSchedule& sched, std::ostream& out, std::ostream& err)
{
    const BestApproxSequence seq = enumerate_best_approximations(a1, a2, c.height, sched);
    const auto nus = applicable_nu(seq);
    if (nus.empty()) {
        throw NoApplicableNu("no nu with det(m_{nu-1}, m_nu, m_{nu+1}) != 0 and m_{nu+2} within height " +
                             std::to_string(c.height));
    }
    if (c.format == OutputFormat::Csv) {
        out << witness_csv_header() << '\n';
    }
    for (std::size_t nu : nus) {
        try {
            const WitnessPoint w = theorem3_dispatch(NuContext::from_sequence(seq, nu));
            out << (c.format == OutputFormat::Json ? to_json(nu, w).dump() : to_csv(nu, w)) << '\n';
        } catch (const error& e) {
            diagnostic(err, e.kind(), e.what(), kOk, nu);
        }
    }
    return kOk;
}

inline int run_verify(const CliConfig& c, const CertifiedReal& a1, const CertifiedReal& a2,
                      const PrecisionSchedule& sched, std::ostream& out, std::ostream& err)
{
    Theorem2Options opt;
    opt.Gamma = c.Gamma;
    opt.gamma = c.gamma;
    opt.height_bound = c.height;
    opt.gamma_height = c.gamma_height.value_or(0);
    opt.schedule = sched;
    const RunReport r = theorem2_run(a1, a2, opt);
    if (c.format == OutputFormat::Json) {
        out << to_json(r).dump(2) << '\n';
    } else {
        write_csv(out, r);
    }
    if (r.status == "no_applicable_nu") {
        diagnostic(err, "NoApplicableNu", "no nu satisfies the determinant condition within range",
                   kNoApplicableNu);
        return kNoApplicableNu;
    }
    if (r.status == "hypothesis_violated") {
        diagnostic(err, "HypothesisViolated", "the supplied Gamma is violated below the height cutoff", kFailure);
        return kFailure;
    }
    return kOk;
}

} // namespace detail

/// Executes a parsed configuration. Errors are reported as one JSON object per
/// line on `err`; the return value is the process exit status.
inline int run(const CliConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        std::ofstream file;
        std::ostream* os = &out;
        if (!c.output.empty()) {
            file.open(c.output, std::ios::binary);
            if (!file) {
                throw InvalidArgument("cannot open output file '" + c.output + "'");
            }
            os = &file;
        }
        const CertifiedReal a1 = CertifiedReal::parse(c.alpha1);
        const CertifiedReal a2 = CertifiedReal::parse(c.alpha2);
        const PrecisionSchedule sched{std::min<unsigned long>(128, c.precision_cap), c.precision_cap};
        switch (c.subcommand) {
        case Subcommand::BestApprox: return detail::run_best_approx(c, a1, a2, sched, *os);
        case Subcommand::Witness: return detail::run_witness(c, a1, a2, sched, *os, err);
        case Subcommand::Verify: return detail::run_verify(c, a1, a2, sched, *os, err);
        }
        return kFailure;
    } catch (const error& e) {
        const int code = exit_code_for(e);
        diagnostic(err, e.kind(), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        diagnostic(err, "Error", e.what(), kFailure);
        return kFailure;
    }
}

/// parse_args + run, with usage errors mapped to exit status 2.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CliConfig c;
    try {
        c = parse_args(argc, argv);
    } catch (const error& e) {
        diagnostic(err, e.kind(), e.what(), kUsage);
        return kUsage;
    }
    return run(c, out, err);
}

} // namespace posapprox::cli
