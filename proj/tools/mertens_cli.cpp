// Command-line front end: sieving, zero tables, residues, line scans, bound
// certificates, verification sweeps, square-free constants and certificates,
// leading-constant experiments, and approximant plot data.
//
// Exit codes: 0 success, 1 verification failure (an envelope or inequality
// failed), 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mertens/approximant.hpp"
#include "mertens/explicit_formula.hpp"
#include "mertens/io.hpp"
#include "mertens/sieve.hpp"
#include "mertens/squarefree.hpp"
#include "mertens/tightness.hpp"
#include "mertens/zeros.hpp"

using namespace mertens;

namespace {

struct RangeSpec {
    double lo = 0, hi = 0;
    int n = 0;
};

RangeSpec parse_range(const std::string& s) {
    RangeSpec r;
    char c1 = 0, c2 = 0;
    std::istringstream ss(s);
    if (!(ss >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':')
        throw invalid_parameter("expected lo:hi:n, got '" + s + "'");
    return r;
}

sieve::ScanKind parse_scan_kind(const std::string& s) {
    if (s == "M_over_sqrt") return sieve::ScanKind::M_over_sqrt;
    if (s == "m_times_sqrt") return sieve::ScanKind::m_times_sqrt;
    if (s == "R_over_qtr") return sieve::ScanKind::R_over_qtr;
    if (s == "R_over_sqrt") return sieve::ScanKind::R_over_sqrt;
    throw invalid_parameter("unknown scan kind '" + s + "'");
}

const char* scan_kind_name(sieve::ScanKind k) {
    switch (k) {
        case sieve::ScanKind::M_over_sqrt: return "M_over_sqrt";
        case sieve::ScanKind::m_times_sqrt: return "m_times_sqrt";
        case sieve::ScanKind::R_over_qtr: return "R_over_qtr";
        case sieve::ScanKind::R_over_sqrt: return "R_over_sqrt";
    }
    return "?";
}

sqf::BoundHypothesis preset_by_name(const std::string& name) {
    if (name == "nopgik") return sqf::preset_nopgik();
    if (name == "gopnik") return sqf::preset_gopnik();
    if (name == "coda") return sqf::preset_coda();
    throw invalid_parameter("unknown preset: " + name);
}

// Certificate rows shared by `bound` and `verify cor-mertens`.
struct SweepOutcome {
    std::string csv;
    int violations = 0;
    int samples = 0;
};

SweepOutcome run_cor_sweep(double T, const std::vector<double>& sigmas, const RangeSpec& xr,
                           const std::string& mertens_path, const std::string& residues_path,
                           std::optional<double> sqfree_c, unsigned workers) {
    auto table_full = io::import_residue_table(residues_path);
    if (!table_full.complete)
        throw std::runtime_error("residue table is not complete against the counting formula");
    if (table_full.height_T + 1e-9 < T)
        throw std::runtime_error("residue table height below requested T");
    auto table = table_full.truncated(T);

    const auto rows = io::import_checkpoints(mertens_path);
    const auto samples = io::log_spaced_samples(xr.lo, xr.hi, xr.n);

    const double line_max = zeta::inv_zeta_line_max(T, -1.0 / 64.0, 1.0, {}, workers);
    const auto variant =
        sqfree_c ? ef::VariantSpec::squarefree(*sqfree_c) : ef::VariantSpec::generic();

    std::ostringstream out;
    out << "x,sigma,T,zero_sum,sigma_term,envelope,observed,slack\n";
    SweepOutcome res;
    std::size_t ri = 0;
    for (auto x : samples) {
        while (ri < rows.size() && rows[ri].x < x) ++ri;
        if (ri >= rows.size() || rows[ri].x != x)
            throw std::runtime_error("mertens file lacks checkpoint at x=" + std::to_string(x) +
                                     "; run `sieve` with the same --x-range");
        const auto& cp = rows[ri];
        for (double sigma : sigmas) {
            const double xd = static_cast<double>(x);
            if (sqfree_c) {
                const double c = *sqfree_c;
                if (xd < std::max(std::exp(3.0) * (c * T) * (c * T), 4.0 * T)) continue;
            }
            if (xd < num::e * num::e * T) continue;
            approx::WeightParams wp(T, sigma);
            const auto ev = ef::evaluate_formula(xd, sigma, wp, table, variant, line_max);
            const double observed = sigma == 0.0 ? static_cast<double>(cp.M) : cp.m;
            const double predicted = ev.zero_sum.real() + ev.sigma_term;
            const double slack = ev.envelope - std::abs(observed - predicted);
            ++res.samples;
            if (slack < 0) ++res.violations;
            out << x << "," << fmt_g15(sigma) << "," << fmt_g15(T) << ","
                << fmt_g15(ev.zero_sum.real()) << "," << fmt_g15(ev.sigma_term) << ","
                << fmt_g15(ev.envelope) << "," << fmt_g15(observed) << "," << fmt_g15(slack)
                << "\n";
        }
    }
    res.csv = out.str();
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit-formula toolkit for Mertens-function bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file overriding flags");
    unsigned workers = default_workers();
    app.add_option("--workers", workers, "worker thread count (default: env MERTENS_WORKERS)");
    bool deterministic = true;
    app.add_flag("--deterministic,!--no-deterministic", deterministic,
                 "fixed reduction order regardless of worker count (always on)");

    // --- sieve -----------------------------------------------------------
    auto* sieve_cmd = app.add_subcommand("sieve", "segmented Mobius/Mertens/square-free pipeline");
    double sv_limit = 1e6;
    std::uint64_t sv_stride = 0;
    std::string sv_out, sv_xrange;
    std::vector<std::string> sv_scans;
    bool sv_resume = false;
    std::uint64_t sv_segment = sieve::default_segment_size;
    sieve_cmd->add_option("--limit", sv_limit, "sieve up to this x")->required();
    sieve_cmd->add_option("--stride", sv_stride, "checkpoint stride (0 = none)");
    sieve_cmd->add_option("--out", sv_out, "checkpoint CSV path")->required();
    sieve_cmd->add_flag("--resume", sv_resume, "resume from the last checkpoint in --out");
    sieve_cmd->add_option("--x-range", sv_xrange, "extra log-spaced checkpoints lo:hi:n");
    sieve_cmd->add_option("--scan", sv_scans, "ratio scan kind:lo:hi (repeatable)");
    sieve_cmd->add_option("--segment-size", sv_segment, "entries per segment");

    // --- zeros -----------------------------------------------------------
    auto* zeros_cmd = app.add_subcommand("zeros", "locate critical-line zeros up to a height");
    double z_height = 100.0;
    std::string z_out;
    zeros_cmd->add_option("--height", z_height, "height T")->required();
    zeros_cmd->add_option("--out", z_out, "ordinate file path")->required();

    // --- residues ---------------------------------------------------------
    auto* res_cmd = app.add_subcommand("residues", "fill 1/zeta'(rho) for a zero table");
    std::string r_zeros, r_out;
    res_cmd->add_option("--zeros", r_zeros, "ordinate file")->required();
    res_cmd->add_option("--out", r_out, "residue CSV path")->required();

    // --- zeta-scan ---------------------------------------------------------
    auto* scan_cmd = app.add_subcommand("zeta-scan", "max of 1/|zeta| on a sigma-segment");
    double sc_T = 0, sc_lo = -1.0 / 64.0, sc_hi = 1.0;
    scan_cmd->add_option("--T", sc_T, "height")->required();
    scan_cmd->add_option("--lo", sc_lo, "left sigma endpoint");
    scan_cmd->add_option("--hi", sc_hi, "right sigma endpoint");

    // --- bound -------------------------------------------------------------
    auto* bound_cmd = app.add_subcommand("bound", "truncated-formula certificate sweep");
    std::string b_res, b_mert, b_xrange, b_out;
    double b_T = 0, b_sigma = 0;
    double b_sqc_val = 0;
    bound_cmd->add_option("--residues", b_res)->required();
    bound_cmd->add_option("--T", b_T)->required();
    bound_cmd->add_option("--sigma", b_sigma)->required();
    bound_cmd->add_option("--x-range", b_xrange, "lo:hi:n")->required();
    bound_cmd->add_option("--mertens", b_mert)->required();
    auto* b_sq_opt =
        bound_cmd->add_option("--squarefree-c", b_sqc_val, "use the square-free envelope with this c");
    bound_cmd->add_option("--out", b_out, "certificate CSV path (default stdout)");

    // --- verify -------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "verification sweeps");
    verify_cmd->require_subcommand(1);
    auto* vm = verify_cmd->add_subcommand("cor-mertens", "truncated-formula envelope vs sieved M, m");
    std::string v_res, v_mert, v_xrange, v_out;
    double v_T = 0;
    double v_sqc_val = 0;
    vm->add_option("--T", v_T)->required();
    vm->add_option("--x-range", v_xrange, "lo:hi:n")->required();
    vm->add_option("--mertens", v_mert)->required();
    vm->add_option("--residues", v_res)->required();
    auto* v_sq_opt = vm->add_option("--squarefree-c", v_sqc_val);
    vm->add_option("--out", v_out, "slack report path (default stdout)");

    // --- sqfree ---------------------------------------------------------------
    auto* sq_cmd = app.add_subcommand("sqfree", "square-free counting machinery");
    sq_cmd->require_subcommand(1);
    auto* sq_const = sq_cmd->add_subcommand("constants", "exact short-interval constants");
    int q = 5;
    bool q_long = false;
    sq_const->add_option("--q", q, "prime in {2,3,5,7,11,13}")->required();
    sq_const->add_flag("--long", q_long, "allow the q=13 period scan (~9e8 integers)");
    auto* sq_bound = sq_cmd->add_subcommand("bound", "evaluate a published bound certificate");
    std::string sq_preset = "nopgik", sq_branch = "a";
    double sq_x = 0;
    sq_bound->add_option("--preset", sq_preset, "nopgik|gopnik|coda")->required();
    sq_bound->add_option("--x", sq_x)->required();
    sq_bound->add_option("--branch", sq_branch, "a|b (linear-hypothesis presets)");
    auto* sq_verify = sq_cmd->add_subcommand("verify", "certificate vs sieved |R(x)|");
    std::string sqv_xrange, sqv_mert, sqv_preset = "nopgik";
    sq_verify->add_option("--x-range", sqv_xrange, "lo:hi:n")->required();
    sq_verify->add_option("--mertens", sqv_mert)->required();
    sq_verify->add_option("--preset", sqv_preset, "nopgik|gopnik|coda");

    // --- tightness --------------------------------------------------------------
    auto* tight_cmd = app.add_subcommand("tightness", "leading-constant experiment");
    double t_Tplus = 4.0 * num::pi;
    int t_K = 399, t_count = 3;
    std::string t_out;
    double t_xcap = 1e9;
    tight_cmd->add_option("--T-plus", t_Tplus)->required();
    tight_cmd->add_option("--K", t_K)->required();
    tight_cmd->add_option("--count", t_count, "number of largest admissible N");
    tight_cmd->add_option("--x-cap", t_xcap, "range cap for x_N");
    tight_cmd->add_option("--out", t_out, "report CSV path (default stdout)");

    // --- approx --------------------------------------------------------------
    auto* ap_cmd = app.add_subcommand("approx", "approximant utilities");
    ap_cmd->require_subcommand(1);
    auto* ap_plot = ap_cmd->add_subcommand("plot", "CSV of approximant vs target");
    double ap_lambda = 0.25;
    std::string ap_range = "-5:5:1000", ap_out;
    ap_plot->add_option("--lambda", ap_lambda)->required();
    ap_plot->add_option("--range", ap_range, "lo:hi:n");
    ap_plot->add_option("--out", ap_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!deterministic)
            throw invalid_parameter(
                "reductions are ordered by construction; a non-deterministic mode is not provided");
        if (*sieve_cmd) {
            const auto limit = static_cast<std::uint64_t>(sv_limit);
            std::vector<std::uint64_t> queries;
            if (!sv_xrange.empty()) {
                auto r = parse_range(sv_xrange);
                queries = io::log_spaced_samples(r.lo, std::min(r.hi, static_cast<double>(limit)),
                                                 r.n);
            }
            std::vector<sieve::ScanRequest> scans;
            for (const auto& s : sv_scans) {
                const auto p1 = s.find(':');
                const auto p2 = s.find(':', p1 + 1);
                if (p1 == std::string::npos || p2 == std::string::npos)
                    throw invalid_parameter("--scan expects kind:lo:hi");
                scans.push_back(
                    {parse_scan_kind(s.substr(0, p1)),
                     static_cast<std::uint64_t>(std::stod(s.substr(p1 + 1, p2 - p1 - 1))),
                     static_cast<std::uint64_t>(std::stod(s.substr(p2 + 1)))});
            }
            sieve::PipelineState state;
            std::vector<sieve::MertensCheckpoint> old_rows;
            if (sv_resume && std::filesystem::exists(sv_out)) {
                old_rows = io::import_checkpoints(sv_out);
                if (!old_rows.empty()) {
                    const auto& last = old_rows.back();
                    state = {last.x, last.M, last.m, 0.0, last.Q};
                }
            }
            auto result =
                sieve::mertens_pipeline(limit, sv_stride, queries, scans, workers, sv_segment, state);
            io::atomic_write(sv_out, [&](std::ostream& out) {
                io::write_checkpoint_header(out);
                for (const auto& cp : old_rows) io::write_checkpoint_row(out, cp);
                for (const auto& cp : result.checkpoints) io::write_checkpoint_row(out, cp);
            });
            for (std::size_t i = 0; i < scans.size(); ++i)
                std::printf("scan %s [%llu,%llu]: sup=%s argmax=%llu\n",
                            scan_kind_name(scans[i].kind),
                            static_cast<unsigned long long>(scans[i].lo),
                            static_cast<unsigned long long>(scans[i].hi),
                            fmt_g15(result.scans[i].sup).c_str(),
                            static_cast<unsigned long long>(result.scans[i].argmax));
            std::printf("sieved to %llu: M=%lld m=%s Q=%llu\n",
                        static_cast<unsigned long long>(limit),
                        static_cast<long long>(result.final_state.M),
                        fmt_g15(result.final_state.m).c_str(),
                        static_cast<unsigned long long>(result.final_state.Q));
        } else if (*zeros_cmd) {
            auto table = zeta::find_zeros(z_height, {}, workers);
            io::export_zero_ordinates(table, z_out);
            std::printf("%zu zeros up to %s (%s)\n", table.zeros.size(), fmt_g15(z_height).c_str(),
                        table.complete ? "complete" : "incomplete");
        } else if (*res_cmd) {
            auto table = io::import_zero_ordinates(r_zeros);
            table = zeta::compute_residues(table, {}, workers);
            io::export_residue_table(table, r_out);
            std::printf("%zu residues written to %s\n", table.zeros.size(), r_out.c_str());
        } else if (*scan_cmd) {
            const double m = zeta::inv_zeta_segment_max(sc_T, sc_lo, sc_hi, {}, workers);
            std::printf("max 1/|zeta(sigma + iT)| over [%s, %s] at T=%s: %s\n",
                        fmt_g15(sc_lo).c_str(), fmt_g15(sc_hi).c_str(), fmt_g15(sc_T).c_str(),
                        fmt_g15(m).c_str());
        } else if (*bound_cmd) {
            std::optional<double> c;
            if (b_sq_opt->count() > 0) c = b_sqc_val;
            auto r = parse_range(b_xrange);
            auto res = run_cor_sweep(b_T, {b_sigma}, r, b_mert, b_res, c, workers);
            if (b_out.empty())
                std::fputs(res.csv.c_str(), stdout);
            else
                io::atomic_write(b_out, [&](std::ostream& o) { o << res.csv; });
            std::fprintf(stderr, "%d/%d samples within envelope\n", res.samples - res.violations,
                         res.samples);
            return res.violations == 0 ? 0 : 1;
        } else if (verify_cmd->parsed() && vm->parsed()) {
            std::optional<double> c;
            if (v_sq_opt->count() > 0) c = v_sqc_val;
            auto r = parse_range(v_xrange);
            auto res = run_cor_sweep(v_T, {0.0, 1.0}, r, v_mert, v_res, c, workers);
            if (v_out.empty())
                std::fputs(res.csv.c_str(), stdout);
            else
                io::atomic_write(v_out, [&](std::ostream& o) { o << res.csv; });
            std::fprintf(stderr, "%d/%d samples within envelope\n", res.samples - res.violations,
                         res.samples);
            return res.violations == 0 ? 0 : 1;
        } else if (sq_const->parsed()) {
            if (q == 13 && !q_long)
                throw invalid_parameter("q=13 scans ~9e8 integers; pass --long to run it");
            auto c = sqf::short_interval_constants(q);
            std::printf("c1=%lld/%lld c2<=%lld/%lld period=%lld\n",
                        static_cast<long long>(c.c1_num), static_cast<long long>(c.c1_den),
                        static_cast<long long>(c.c2_num), static_cast<long long>(c.c2_den),
                        static_cast<long long>(c.period));
            auto p = sqf::published_pair(q);
            const double mine = static_cast<double>(c.c2_num) / static_cast<double>(c.c2_den);
            const double pub = static_cast<double>(p.c2_num) / static_cast<double>(p.c2_den);
            if (mine > pub + 1e-12) {
                std::printf("computed optimal c2 exceeds the published pair (%lld/%lld)\n",
                            static_cast<long long>(p.c2_num), static_cast<long long>(p.c2_den));
                return 1;
            }
        } else if (sq_bound->parsed()) {
            const auto hyp = preset_by_name(sq_preset);
            sqf::BoundCertificate cert;
            if (sq_preset == "nopgik")
                cert = sqf::r_bound_midrange_hyp(hyp, sq_x);
            else
                cert = sqf::r_bound_linear_hyp(
                    hyp, sq_x, sq_branch == "b" ? sqf::LinearBranch::b : sqf::LinearBranch::a);
            std::printf("|R(x)| <= ");
            for (std::size_t i = 0; i < cert.terms.size(); ++i)
                std::printf("%s%s x^(%d/%d)", i ? " + " : "", fmt_g15(cert.terms[i].coeff).c_str(),
                            cert.terms[i].exp_num, cert.terms[i].exp_den);
            std::printf("   for x in (%s, %s]\n", fmt_g15(cert.valid_from).c_str(),
                        fmt_g15(cert.valid_to).c_str());
            std::printf("value at x=%s: %s\n", fmt_g15(sq_x).c_str(),
                        fmt_g15(cert.evaluate(sq_x)).c_str());
        } else if (sq_verify->parsed()) {
            const auto hyp = preset_by_name(sqv_preset);
            auto r = parse_range(sqv_xrange);
            const auto rows = io::import_checkpoints(sqv_mert);
            const auto samples = io::log_spaced_samples(r.lo, r.hi, r.n);
            int violations = 0, used = 0;
            std::size_t ri = 0;
            for (auto x : samples) {
                while (ri < rows.size() && rows[ri].x < x) ++ri;
                if (ri >= rows.size() || rows[ri].x != x)
                    throw std::runtime_error("mertens file lacks checkpoint at x=" +
                                             std::to_string(x));
                sqf::BoundCertificate cert;
                try {
                    cert = sqv_preset == "nopgik"
                               ? sqf::r_bound_midrange_hyp(hyp, static_cast<double>(x))
                               : sqf::r_bound_linear_hyp(hyp, static_cast<double>(x),
                                                         sqf::LinearBranch::a);
                } catch (const invalid_parameter&) {
                    continue;  // outside the certificate's domain
                }
                ++used;
                const double bound = cert.evaluate(static_cast<double>(x));
                if (std::abs(rows[ri].R) > bound) {
                    ++violations;
                    std::printf("violation at x=%llu: |R|=%s > %s\n",
                                static_cast<unsigned long long>(x),
                                fmt_g15(std::abs(rows[ri].R)).c_str(), fmt_g15(bound).c_str());
                }
            }
            std::printf("%d/%d in-domain samples dominated\n", used - violations, used);
            return violations == 0 ? 0 : 1;
        } else if (*tight_cmd) {
            tight::FejerParams fp(t_K, t_Tplus);
            const auto n_max = static_cast<long long>(
                std::floor((t_Tplus * std::log(t_xcap) - num::half_pi) / num::two_pi));
            std::vector<long long> Ns;
            for (long long N = std::max(1ll, n_max - t_count + 1); N <= n_max; ++N) Ns.push_back(N);
            auto rep = tight::leading_constant_experiment(fp, Ns,
                                                          static_cast<std::uint64_t>(t_xcap), workers);
            std::ostringstream out;
            out << "N,x,S,ratio,target,envelope,within\n";
            for (const auto& row : rep.rows)
                out << row.N << "," << fmt_g15(row.x) << "," << fmt_g15(row.S) << ","
                    << fmt_g15(row.ratio) << "," << fmt_g15(row.target) << ","
                    << fmt_g15(row.envelope) << "," << (row.within ? 1 : 0) << "\n";
            if (t_out.empty())
                std::fputs(out.str().c_str(), stdout);
            else
                io::atomic_write(t_out, [&](std::ostream& o) { o << out.str(); });
            bool all = true;
            for (const auto& row : rep.rows) all = all && row.within;
            std::fprintf(stderr, "l1=%s tv<=%s harmonic-target=%s\n", fmt_g15(rep.l1_err).c_str(),
                         fmt_g15(rep.tv_bound).c_str(), fmt_g15(rep.harmonic_target).c_str());
            return all ? 0 : 1;
        } else if (ap_plot->parsed()) {
            auto r = parse_range(ap_range);
            std::ostringstream out;
            out << "u,approx,target,diff\n";
            approx::TruncationPolicy pol;
            for (int i = 0; i < r.n; ++i) {
                const double u =
                    r.lo + (r.hi - r.lo) * (r.n == 1 ? 0.0 : static_cast<double>(i) / (r.n - 1));
                const double a = approx::best_approximant(ap_lambda, u, pol).real();
                const double t = approx::truncated_exponential(ap_lambda, u);
                out << fmt_g15(u) << "," << fmt_g15(a) << "," << fmt_g15(t) << ","
                    << fmt_g15(a - t) << "\n";
            }
            if (ap_out.empty())
                std::fputs(out.str().c_str(), stdout);
            else
                io::atomic_write(ap_out, [&](std::ostream& o) { o << out.str(); });
        }
    } catch (const invalid_parameter& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
