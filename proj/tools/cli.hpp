#pragma once

// Command dispatch for the gaussdil tool. run() never throws; every outcome
// maps to an exit code:
//   0 ok, 2 invalid channel or state, 3 parse or usage error,
//   4 tolerance or verification failure.

#include "report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace gaussdil::cli {

enum ExitCode : int { exit_ok = 0, exit_invalid = 2, exit_usage = 3, exit_tolerance = 4 };

enum class Status { ok, invalid_channel, tolerance_warning };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::ok:
        return "ok";
    case Status::invalid_channel:
        return "invalid_channel";
    case Status::tolerance_warning:
        return "tolerance_warning";
    }
    return "ok";
}

inline int exit_code(Status s) {
    switch (s) {
    case Status::ok:
        return exit_ok;
    case Status::invalid_channel:
        return exit_invalid;
    case Status::tolerance_warning:
        return exit_tolerance;
    }
    return exit_tolerance;
}

struct Report {
    std::string command;
    std::string input_digest;
    Tolerance tolerance;
    Json payload = Json::object();
    Status status = Status::ok;
};

inline Json to_json(const Report& r) {
    return {{"command", r.command},
            {"input_digest", r.input_digest},
            {"tolerance", to_json(r.tolerance)},
            {"payload", r.payload},
            {"status", to_string(r.status)}};
}

inline std::string emit_report(const Report& r, const std::string& format) {
    return format == "text" ? text_report(to_json(r)) : canonical_json(to_json(r));
}

namespace detail {

struct Options {
    double tol_rank = Tolerance{}.rank_rel;
    double tol_psd = Tolerance{}.psd_abs;
    double tol_res = Tolerance{}.residual;
    std::string format = "json";

    std::string file;
    std::string second_file;
    bool mixed = false;
    double theta = 8.0;
    Index n = 1;
    Index env = 0;
    bool mixed_env = false;
    std::uint64_t seed = 0;

    Tolerance tolerance() const {
        Tolerance t;
        t.rank_rel = tol_rank;
        t.psd_abs = tol_psd;
        t.residual = tol_res;
        return t;
    }
};

/// Reads a path, or all of `in` for "-".
inline std::string slurp(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ParseError("cannot open " + path);
    }
    buf << file.rdbuf();
    return buf.str();
}

inline Json mode_count_json(const ModeCountReport& m) {
    return {{"k", m.k}, {"r", m.r}, {"r_prime", m.r_prime}, {"ell_pure", m.ell_pure}, {"ell_mix", m.ell_mix}};
}

inline Json cp_json(const CpReport& cp) {
    return {{"valid", cp.valid}, {"min_eig", cp.min_eig}, {"status", to_string(cp.status)}};
}

/// Fills the CP section; false when the channel is rejected.
inline bool check_cp(const GaussianChannel& ch, const Tolerance& tol, Report& rep) {
    const CpReport cp = validate_cp(ch, tol);
    rep.payload["cp"] = cp_json(cp);
    if (!cp.valid) {
        rep.status = Status::invalid_channel;
    }
    return cp.valid;
}

inline void analyze(const GaussianChannel& ch, const Tolerance& tol, Report& rep) {
    rep.payload["n"] = ch.n();
    if (!check_cp(ch, tol, rep)) {
        return;
    }
    const ModeCountReport counts = mode_counts(ch, tol);
    const Json fields = mode_count_json(counts);
    for (const auto& [key, value] : fields.items()) {
        rep.payload[key] = value;
    }
    const KernelReport ker = kernel_checks(ch, tol);
    rep.payload["kernels"] = {{"inclusions_ok", ker.inclusions_ok},
                              {"ker_y_in_ker_sigma", ker.ker_y_in_ker_sigma},
                              {"ker_y_in_ker_pair", ker.ker_y_in_ker_pair},
                              {"meet_in_ker_y", ker.meet_in_ker_y},
                              {"kernel_identity", ker.kernel_identity}};
    if (!ker.inclusions_ok) {
        rep.status = Status::tolerance_warning;
    }
}

inline void dilate(const GaussianChannel& ch, bool mixed, const Tolerance& tol, Report& rep) {
    if (!check_cp(ch, tol, rep)) {
        return;
    }
    const Dilation d = mixed ? mixed_dilation(ch, tol) : pure_dilation(ch, tol);
    rep.payload["dilation"] = dilation_to_json(d);
    const VerificationReport v = verify_dilation(ch, d, 20, 0, tol);
    rep.payload["verification"] = verification_to_json(v);
    if (!v.passed) {
        rep.status = Status::tolerance_warning;
    }
}

inline void verify(const GaussianChannel& ch, const Dilation& d, const Tolerance& tol, Report& rep) {
    if (!check_cp(ch, tol, rep)) {
        return;
    }
    const VerificationReport v = verify_dilation(ch, d, 20, 0, tol);
    rep.payload["verification"] = verification_to_json(v);
    if (!v.passed) {
        rep.status = Status::tolerance_warning;
    }
}

inline void choi(const GaussianChannel& ch, double theta, const Tolerance& tol, Report& rep) {
    if (!check_cp(ch, tol, rep)) {
        return;
    }
    const ChoiConstruction c = choi_covariance(ch, theta, tol);
    const Index q_min = qmin_via_choi(ch, theta, tol);
    const Index ell_pure = hermitian_pair_rank(ch.Y(), sigma_of(ch, tol), tol, channel_scale(ch));
    rep.payload["theta"] = theta;
    rep.payload["gamma_prime"] = to_json(c.gamma_prime);
    rep.payload["sigma_AB"] = to_json(c.sigma_AB);
    rep.payload["q_min"] = q_min;
    rep.payload["ell_pure"] = ell_pure;
    rep.payload["agree"] = q_min == ell_pure;
    if (q_min != ell_pure) {
        rep.status = Status::tolerance_warning;
    }
}

inline void purify(const Matrix& gamma, const Tolerance& tol, Report& rep) {
    const Index n = gamma.rows() / 2;
    const Matrix sigma = symplectic_form(n);
    const double min_eig = hermitian_pair_min_eig(gamma, sigma, tol);
    rep.payload["n"] = n;
    rep.payload["min_eig"] = min_eig;
    if (!hermitian_pair_psd(gamma, sigma, tol)) {
        rep.status = Status::invalid_channel;
        return;
    }
    const Purification p = minimal_purification(gamma, tol);
    const Index by_rank = purification_modes_by_rank(gamma, tol);
    rep.payload["q"] = p.q;
    rep.payload["q_by_rank"] = by_rank;
    rep.payload["unit_count"] = p.unit_count;
    rep.payload["D"] = to_json(p.D);
    rep.payload["Gamma"] = to_json(p.Gamma);
    rep.payload["sigma"] = to_json(p.sigma);
    rep.payload["S_back"] = to_json(p.S_back);
    rep.payload["marginal_residual"] = max_abs(p.Gamma.topLeftCorner(2 * n, 2 * n) - gamma);
    const PurityReport purity = purity_test(p.Gamma, p.sigma, tol);
    rep.payload["pure"] = purity.pure;
    rep.payload["sympl_spectrum"] = to_json(purity.sympl_spectrum);
    if (by_rank != p.q || !purity.pure) {
        rep.status = Status::tolerance_warning;
    }
}

inline void random(const Options& o, const Tolerance& tol, Report& rep) {
    if (o.n < 1 || o.env < 0) {
        throw ParseError("random: need --n >= 1 and --env >= 0");
    }
    const GaussianChannel ch = random_channel(o.n, o.env, !o.mixed_env, o.seed);
    rep.payload["channel"] = channel_to_json(ch);
    rep.payload["env_modes"] = o.env;
    rep.payload["env_pure"] = !o.mixed_env;
    rep.payload["seed"] = o.seed;
    rep.payload["cp"] = cp_json(validate_cp(ch, tol));
}

}  // namespace detail

/// Parses `args` (without the program name), runs one subcommand and writes
/// its report to `out`. Diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    detail::Options o;
    CLI::App app{"Minimal unitary dilations of bosonic Gaussian channels", "gaussdil"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol-rank", o.tol_rank, "Relative rank threshold");
    app.add_option("--tol-psd", o.tol_psd, "Absolute PSD / unit-eigenvalue window");
    app.add_option("--tol-res", o.tol_res, "Verification residual bound");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));

    auto* analyze = app.add_subcommand("analyze", "CP check, kernel relations and minimal mode counts");
    analyze->add_option("file", o.file, "Channel file or - for stdin")->required();
    auto* dilate = app.add_subcommand("dilate", "Construct and verify a minimal dilation");
    dilate->add_option("file", o.file, "Channel file or - for stdin")->required();
    dilate->add_flag("--mixed", o.mixed, "Mixed environment instead of pure");
    auto* purify = app.add_subcommand("purify", "Minimal Gaussian purification of a covariance");
    purify->add_option("covfile", o.file, "Covariance file or - for stdin")->required();
    auto* verify = app.add_subcommand("verify", "Check a dilation file against a channel file");
    verify->add_option("file", o.file, "Channel file or - for stdin")->required();
    verify->add_option("dilationfile", o.second_file, "Dilation file")->required();
    auto* choi = app.add_subcommand("choi", "Choi covariance and the mode count it implies");
    choi->add_option("file", o.file, "Channel file or - for stdin")->required();
    choi->add_option("--theta", o.theta, "Reference-state parameter, > 1");
    auto* random = app.add_subcommand("random", "Seeded random channel");
    random->add_option("--n", o.n, "Input modes")->required();
    random->add_option("--env", o.env, "Generator environment modes")->required();
    random->add_flag("--mixed-env", o.mixed_env, "Thermal generator environment");
    random->add_option("--seed", o.seed, "Generator seed")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "gaussdil: " << e.what() << "\n";
        return exit_usage;
    }

    Report rep;
    rep.tolerance = o.tolerance();
    try {
        rep.tolerance.validate();
        const Tolerance& tol = rep.tolerance;
        if (analyze->parsed() || dilate->parsed() || choi->parsed()) {
            const std::string text = detail::slurp(o.file, in);
            rep.input_digest = sha256_hex(text);
            const GaussianChannel ch = parse_channel(text, tol);
            if (analyze->parsed()) {
                rep.command = "analyze";
                detail::analyze(ch, tol, rep);
            } else if (dilate->parsed()) {
                rep.command = "dilate";
                detail::dilate(ch, o.mixed, tol, rep);
            } else {
                rep.command = "choi";
                if (!(o.theta > 1.0)) {
                    throw ParseError("--theta must exceed 1");
                }
                detail::choi(ch, o.theta, tol, rep);
            }
        } else if (verify->parsed()) {
            rep.command = "verify";
            const std::string text = detail::slurp(o.file, in);
            const std::string dil = detail::slurp(o.second_file, in);
            rep.input_digest = sha256_hex(text + dil);
            const GaussianChannel ch = parse_channel(text, tol);
            detail::verify(ch, parse_dilation(dil, ch.n()), tol, rep);
        } else if (purify->parsed()) {
            rep.command = "purify";
            const std::string text = detail::slurp(o.file, in);
            rep.input_digest = sha256_hex(text);
            detail::purify(parse_covariance(text, tol), tol, rep);
        } else {
            rep.command = "random";
            std::ostringstream params;
            params << "random n=" << o.n << " env=" << o.env << " mixed_env=" << o.mixed_env << " seed=" << o.seed;
            rep.input_digest = sha256_hex(params.str());
            detail::random(o, tol, rep);
        }
    } catch (const ParseError& e) {
        err << "gaussdil: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvalidArgument& e) {
        err << "gaussdil: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        // construction or tolerance failure: still report
        rep.status = Status::tolerance_warning;
        rep.payload["error"] = e.what();
    } catch (const std::exception& e) {
        err << "gaussdil: internal error: " << e.what() << "\n";
        return exit_tolerance;
    }
    out << emit_report(rep, o.format);
    return exit_code(rep.status);
}

}  // namespace gaussdil::cli
