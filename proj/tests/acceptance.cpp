// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit code is the number of failed
// criteria.
//
// The suite is sequenced so the expensive artifacts (the zero table to
// height 5000 and the 1e9 sieve pass) are built once and shared.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mertens/approximant.hpp"
#include "mertens/explicit_formula.hpp"
#include "mertens/io.hpp"
#include "mertens/sieve.hpp"
#include "mertens/squarefree.hpp"
#include "mertens/tightness.hpp"
#include "mertens/zeros.hpp"
#include "oracles.hpp"

using namespace mertens;
namespace mz = mertens::zeta;
using clock_t_ = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

void report(const std::string& id, bool pass, const std::string& detail, double secs) {
    std::printf("[%s] %-12s (%7.1fs)  %s\n", pass ? "PASS" : "FAIL", id.c_str(), secs,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void info(const std::string& id, const std::string& detail) {
    std::printf("[info] %-12s           %s\n", id.c_str(), detail.c_str());
    std::fflush(stdout);
}

// Computed coefficient reproduces the displayed (rounded-up) table value.
bool rounds_up_to(double computed, double displayed, int digits) {
    const int mag = static_cast<int>(std::floor(std::log10(std::abs(displayed))));
    const double unit = std::pow(10.0, mag - digits + 1);
    return computed <= displayed + 1e-15 * std::abs(displayed) && displayed - computed < unit;
}

double coeff_of(const sqf::BoundCertificate& c, int num, int den) {
    for (const auto& t : c.terms)
        if (t.exp_num == num && t.exp_den == den) return t.coeff;
    return -1.0;
}

}  // namespace

int main(int argc, char** argv) {
    bool skip_long = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--fast") == 0) skip_long = true;
    const unsigned workers = default_workers();

    // ----- 1. interpolation identity --------------------------------------
    {
        auto t0 = clock_t_::now();
        approx::TruncationPolicy pol{1e-12, 200000};
        double worst = 0.0;
        for (double nu : {0.25, 0.5, 1.0, 2.0})
            for (int n = -5; n <= 5; ++n) {
                const double target = approx::exp_interpolant_at_integer(nu, n);
                const double got = approx::exp_interpolant(nu, {double(n), 0.0}, pol).real();
                worst = std::max(worst, std::abs(got - target));
            }
        report("1", worst <= 1e-10,
               "interpolation |K_nu(n) - E_nu(n)| worst " + fmt_g15(worst) + " (tol 1e-10)",
               seconds_since(t0));
    }

    // ----- 2. L1 optimality -------------------------------------------------
    {
        auto t0 = clock_t_::now();
        double worst = 0.0;
        for (double lambda : {0.5, -0.5, 1.0, -1.0, 4.0, -4.0}) {
            const double quad = oracles::l1_error_quadrature(lambda);
            worst = std::max(worst, std::abs(quad - approx::min_l1_error(lambda)));
        }
        report("2", worst <= 1e-6,
               "quadratured L1 error vs tanh(lambda/4)/lambda, worst " + fmt_g15(worst) +
                   " (tol 1e-6)",
               seconds_since(t0));
    }

    // ----- 3. decay bounds and tail-envelope constants ----------------------
    {
        auto t0 = clock_t_::now();
        std::vector<double> grid;
        for (int i = 0; i < 1000; ++i) {
            const double u = 0.5 + (50.0 - 0.5) * i / 999.0;
            grid.push_back(u);
            grid.push_back(-u);
        }
        bool ok = true;
        double worst_slack = 1e300;
        for (double lambda : {1.0, -1.0, 4.0, -4.0}) {
            const auto rep = approx::decay_report(lambda, grid);
            ok = ok && rep.pass;
            worst_slack = std::min(worst_slack,
                                   std::min(rep.worst_value_slack, rep.worst_deriv_slack));
        }
        const auto ch = approx::tail_envelope_constants(0.5);
        const auto cs = approx::tail_envelope_constants(1.0 / 6.0);
        const bool consts_ok = ch.c0 < 16.0 / 21.0 && ch.c1 < 17.0 / 5.0 && ch.c2 < 2.0 / 9.0 &&
                               cs.c0 <= 2.0 / 3.0 && cs.c1 <= 2.85;
        report("3", ok && consts_ok,
               "decay bounds on 2000-point grid (worst slack " + fmt_g15(worst_slack) +
                   "), envelope constants at alpha=1/2 and 1/6",
               seconds_since(t0));
    }

    // ----- 4. zeta line-scan reproduction ------------------------------------
    {
        auto t0 = clock_t_::now();
        const double got_literal = mz::inv_zeta_segment_max(1e6 + 1.0, -1.0 / 64.0, 1.0, {}, workers);
        const bool literal_ok = std::abs(got_literal - 0.894198297) <= 1e-6;
        report("4a", literal_ok,
               "scan(T=1e6+1) = " + fmt_g15(got_literal) +
                   ", stated 0.894198297 +- 1e-6  [see notes below]",
               seconds_since(t0));
        info("4a", std::string("as an upper bound the stated constant does hold at T=1e6+1: ") +
                       fmt_g15(got_literal) + " <= 0.894198297: " +
                       (got_literal <= 0.894198297 + 1e-6 ? "yes" : "no"));
        auto t1 = clock_t_::now();
        const double got_1e6 = mz::inv_zeta_segment_max(1e6, -1.0 / 64.0, 1.0, {}, workers);
        info("4a", "the stated value is the attained maximum at T=1e6 exactly: scan(T=1e6) = " +
                       fmt_g15(got_1e6) + " (diff " + fmt_g15(got_1e6 - 0.894198297) + ", " +
                       fmt_g15(seconds_since(t1)) + "s); the evaluator is independently " +
                       "validated against the direct Dirichlet series at this height");
        if (!skip_long) {
            auto t2 = clock_t_::now();
            const double got_b = mz::inv_zeta_segment_max(1893193.5, -1.0 / 64.0, 1.0, {}, workers);
            report("4b", std::abs(got_b - 0.591342108) <= 1e-6,
                   "scan(T=1893193.5) = " + fmt_g15(got_b) + ", stated 0.591342108 +- 1e-6",
                   seconds_since(t2));
        } else {
            info("4b", "skipped (--fast)");
        }
    }

    // ----- 5. zero pipeline ----------------------------------------------------
    mz::ZeroTable table5000;
    {
        auto t0 = clock_t_::now();
        table5000 = mz::compute_residues(mz::find_zeros(5000.0, {}, workers), {}, workers);
        const auto expected = std::llround(mz::counting_main_term(5000.0));
        bool ok = table5000.complete &&
                  static_cast<long long>(table5000.zeros.size()) == expected &&
                  std::abs(table5000.zeros[0].gamma - 14.134725) <= 1e-6;
        approx::WeightParams wp(1e6 + 1.0, 0.0);
        const auto prefixes = ef::zero_sum_bound_constant_prefixes(wp, table5000);
        for (double v : prefixes) ok = ok && v < 2.66161277991001;
        report("5", ok,
               "find_zeros(5000): " + std::to_string(table5000.zeros.size()) + " zeros (count " +
                   std::to_string(expected) + "), gamma1 = " +
                   fmt_g15(table5000.zeros[0].gamma) +
                   "; coth-constant prefixes at T=1e6+1 parameters stay < 2.66161277991001 " +
                   "(last " + fmt_g15(prefixes.back()) + ")",
               seconds_since(t0));
    }

    // ----- shared sieve passes ---------------------------------------------------
    // One 1e9 pass carries the ground-truth scans (criteria 7 and 8) and the
    // envelope sample checkpoints for criteria 6 and 7.
    std::vector<std::uint64_t> samples;
    const std::vector<double> T_list{500.0, 2000.0, 5000.0};
    for (double T : T_list) {
        auto xs = io::log_spaced_samples(std::ceil(num::e * num::e * T), 1e8, 200);
        samples.insert(samples.end(), xs.begin(), xs.end());
    }
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    sieve::PipelineResult big;
    double sieve_secs = 0.0;
    {
        auto t0 = clock_t_::now();
        std::vector<sieve::ScanRequest> scans{
            {sieve::ScanKind::M_over_sqrt, 33, 1000000000ull},
            {sieve::ScanKind::R_over_qtr, 7, 1000000000ull},
            {sieve::ScanKind::R_over_sqrt, 100000000ull, 1000000000ull},
            {sieve::ScanKind::M_over_sqrt, 1, 32},
        };
        big = sieve::mertens_pipeline(1000000000ull, 0, samples, scans, workers);
        sieve_secs = seconds_since(t0);
        info("sieve", "1e9 pass in " + fmt_g15(sieve_secs) + "s; " +
                          std::to_string(big.checkpoints.size()) + " checkpoints");
    }

    // ----- 6. headline explicit-formula envelope ----------------------------------
    {
        auto t0 = clock_t_::now();
        int violations = 0, used = 0;
        std::string worst_note = "";
        double worst_ratio = 0.0;
        for (double T : T_list) {
            const auto tbl = table5000.truncated(T);
            const double line_max = mz::inv_zeta_line_max(T, -1.0 / 64.0, 1.0, {}, workers);
            auto xs = io::log_spaced_samples(std::ceil(num::e * num::e * T), 1e8, 200);
            std::size_t ci = 0;
            for (auto x : xs) {
                while (ci < big.checkpoints.size() && big.checkpoints[ci].x < x) ++ci;
                const auto& cp = big.checkpoints[ci];
                for (double sigma : {0.0, 1.0}) {
                    approx::WeightParams wp(T, sigma);
                    const auto ev = ef::evaluate_formula(static_cast<double>(x), sigma, wp, tbl,
                                                         ef::VariantSpec::generic(), line_max);
                    const double observed =
                        sigma == 0.0 ? static_cast<double>(cp.M) : cp.m;
                    const double err = std::abs(observed - (ev.zero_sum.real() + ev.sigma_term));
                    ++used;
                    if (err > ev.envelope) ++violations;
                    if (err / ev.envelope > worst_ratio) {
                        worst_ratio = err / ev.envelope;
                        worst_note = "worst err/envelope " + fmt_g15(worst_ratio) + " at x=" +
                                     std::to_string(x) + " T=" + fmt_g15(T) +
                                     " sigma=" + fmt_g15(sigma);
                    }
                }
            }
        }
        report("6", violations == 0,
               std::to_string(used) + " samples, " + std::to_string(violations) +
                   " violations; " + worst_note,
               seconds_since(t0) + sieve_secs * 0.5);
    }

    // ----- 7. square-free-improved envelope -----------------------------------------
    {
        auto t0 = clock_t_::now();
        const double c = 0.0134;
        int violations = 0, used = 0;
        double worst_ratio = 0.0;
        for (double T : T_list) {
            const auto tbl = table5000.truncated(T);
            const double line_max = mz::inv_zeta_line_max(T, -1.0 / 64.0, 1.0, {}, workers);
            auto xs = io::log_spaced_samples(std::ceil(num::e * num::e * T), 1e8, 200);
            std::size_t ci = 0;
            for (auto x : xs) {
                while (ci < big.checkpoints.size() && big.checkpoints[ci].x < x) ++ci;
                const auto& cp = big.checkpoints[ci];
                const auto xd = static_cast<double>(x);
                if (xd < std::max(std::exp(3.0) * (c * T) * (c * T), 4.0 * T)) continue;
                for (double sigma : {0.0, 1.0}) {
                    approx::WeightParams wp(T, sigma);
                    const auto ev = ef::evaluate_formula(xd, sigma, wp, tbl,
                                                         ef::VariantSpec::squarefree(c), line_max);
                    const double observed =
                        sigma == 0.0 ? static_cast<double>(cp.M) : cp.m;
                    const double err = std::abs(observed - (ev.zero_sum.real() + ev.sigma_term));
                    ++used;
                    if (err > ev.envelope) ++violations;
                    worst_ratio = std::max(worst_ratio, err / ev.envelope);
                }
            }
        }
        const double r_sup = big.scans[2].sup;
        const bool r_ok = r_sup <= 0.0134;
        report("7", violations == 0 && r_ok,
               std::to_string(used) + " samples, " + std::to_string(violations) +
                   " violations (worst err/envelope " + fmt_g15(worst_ratio) +
                   "); sup |R|/sqrt(x) on [1e8,1e9] = " + fmt_g15(r_sup) + " <= 0.0134",
               seconds_since(t0) + sieve_secs * 0.25);
    }

    // ----- 8. sieve ground truth --------------------------------------------------
    {
        auto t0 = clock_t_::now();
        std::vector<std::uint64_t> all;
        for (std::uint64_t n = 1; n <= 2400; ++n) all.push_back(n);
        auto small = sieve::mertens_pipeline(2400, 0, all);
        bool r_small_ok = true;
        for (const auto& cp : small.checkpoints)
            r_small_ok = r_small_ok &&
                         std::abs(cp.R) <= std::sqrt(static_cast<double>(cp.x)) + 1e-9;
        const double m_sup = big.scans[0].sup;
        const double rq_sup = big.scans[1].sup;
        const double m_low = big.scans[3].sup;
        const bool ok = r_small_ok && m_sup <= 0.570591 && rq_sup <= 1.12543 && m_low <= 1.0;
        report("8", ok,
               "|R(n)| <= sqrt(n) for n <= 2400; sup|M|/sqrt on [33,1e9] = " + fmt_g15(m_sup) +
                   " (argmax " + std::to_string(big.scans[0].argmax) +
                   ") <= 0.570591; sup|R|/x^(1/4) on [7,1e9] = " + fmt_g15(rq_sup) +
                   " <= 1.12543; sup|M|/sqrt on [1,32] = " + fmt_g15(m_low) + " <= 1",
               seconds_since(t0) + sieve_secs * 0.25);
    }

    // ----- 9. coefficient reproduction ----------------------------------------------
    {
        auto t0 = clock_t_::now();
        bool ok = true;
        {
            const auto cert = sqf::r_bound_midrange_hyp(sqf::preset_nopgik(), 1e20);
            ok = ok && std::abs(coeff_of(cert, 1, 2) - num::pi / 1e7) <= 1e-12;
            ok = ok && rounds_up_to(coeff_of(cert, 2, 5), 0.772103, 6);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 3), 0.860845, 6);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 4), 8.98413, 6);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 6), 0.999, 3);
        }
        {
            const auto cert = sqf::r_bound_linear_hyp(sqf::preset_gopnik(), 1e33,
                                                      sqf::LinearBranch::a);
            ok = ok && rounds_up_to(coeff_of(cert, 3, 5), 6.51e-11, 3);
            ok = ok && rounds_up_to(coeff_of(cert, 2, 5), 2.5222, 5);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 3), 1.042, 4);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 6), 1.086, 4);
            ok = ok && coeff_of(cert, 1, 4) < 0;  // x^{1/4} term omitted
        }
        {
            const auto cert = sqf::r_bound_linear_hyp(sqf::preset_gopnik(), 1e52,
                                                      sqf::LinearBranch::b);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 2), 1.99e-5, 3);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 3), 1.042, 4);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 4), 6.01e7, 3);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 6), 1.1, 2);
        }
        {
            const auto cert = sqf::r_bound_linear_hyp(sqf::preset_coda(), 1e33,
                                                      sqf::LinearBranch::a);
            ok = ok && rounds_up_to(coeff_of(cert, 3, 5), 3.9282e-11, 5);
            ok = ok && rounds_up_to(coeff_of(cert, 2, 5), 2.50422, 6);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 3), 1.446, 4);
            ok = ok && rounds_up_to(coeff_of(cert, 1, 6), 1.27, 3);
        }
        report("9", ok, "bound-certificate coefficients reproduce all four published sets",
               seconds_since(t0));
    }

    // ----- 10. short-interval constants ----------------------------------------------
    {
        auto t0 = clock_t_::now();
        bool ok = true;
        std::string note;
        std::vector<int> qs{2, 3, 5, 7, 11};
        if (!skip_long) qs.push_back(13);
        auto gen = oracles::rng(61);
        const auto mu = sieve::mu_table(60000);
        for (int q : qs) {
            const auto c = sqf::short_interval_constants(q);
            const auto p = sqf::published_pair(q);
            ok = ok && c.c1_num == p.c1_num && c.c1_den == p.c1_den;
            const double mine = static_cast<double>(c.c2_num) / static_cast<double>(c.c2_den);
            const double pub = static_cast<double>(p.c2_num) / static_cast<double>(p.c2_den);
            if (q >= 7) ok = ok && mine <= pub + 1e-15;
            note += (note.empty() ? "c2*(q)/published: " : ", ") + std::to_string(q) + ":" +
                    fmt_g15(mine / pub);
            const double c1 = static_cast<double>(c.c1_num) / static_cast<double>(c.c1_den);
            std::uniform_real_distribution<double> ut(0.0,
                                                      3.0 * static_cast<double>(c.period));
            for (int i = 0; i < 10000; ++i) {
                const double t1 = ut(gen), t2 = ut(gen);
                const auto dq = static_cast<double>(sqf::q_smooth_squarefree_count(t2, q) -
                                                    sqf::q_smooth_squarefree_count(t1, q));
                if (!(std::abs(dq) <= c1 * std::abs(t2 - t1) + mine + 1e-9)) ok = false;
                const auto dQ = static_cast<double>(
                    sieve::squarefree_count_point(static_cast<std::uint64_t>(t2), mu) -
                    sieve::squarefree_count_point(static_cast<std::uint64_t>(t1), mu));
                if (!(std::abs(dQ) <= c1 * std::abs(t2 - t1) + mine + 1e-9)) ok = false;
            }
        }
        report("10", ok,
               "exact c1 for all q; optimal c2* vs published (" + note +
                   "); 1e4 random pairs per q valid for the smooth and the true counters" +
                   (skip_long ? " [q=13 skipped: --fast]" : ""),
               seconds_since(t0));
    }

    // ----- 11. exact identities ------------------------------------------------------
    {
        auto t0 = clock_t_::now();
        bool ok = true;
        auto gen = oracles::rng(67);
        std::uniform_int_distribution<std::uint64_t> ux(2, 1000000);
        for (int i = 0; i < 50; ++i) ok = ok && sieve::check_squarefree_identity(ux(gen));
        sqf::BoundHypothesis hyp;
        hyp.c1 = 16.0 / 25.0;
        hyp.c2 = 114.0 / 25.0;
        std::uniform_int_distribution<std::int64_t> uk(0, 60);
        for (int i = 0; i < 20; ++i) {
            const std::uint64_t x = ux(gen);
            const std::int64_t K = uk(gen);
            const std::int64_t Kp = K + uk(gen);
            ok = ok && sqf::remainder_decomposition(x, K, Kp, hyp).holds;
        }
        report("11", ok,
               "square-free identity on 50 random x <= 1e6; decomposition inequality on 20 "
               "random (x, K, K') configurations",
               seconds_since(t0));
    }

    // ----- 12. tightness trend ----------------------------------------------------------
    {
        auto t0 = clock_t_::now();
        tight::FejerParams fp(399, 4.0 * num::pi);
        const auto n_max = static_cast<long long>(
            std::floor((fp.T_plus * std::log(1e9) - num::half_pi) / num::two_pi));
        std::vector<long long> Ns{n_max - 2, n_max - 1, n_max};
        const auto rep = tight::leading_constant_experiment(fp, Ns, 1000000000ull, workers);
        bool ok = true;
        double prev_env = 1e300;
        std::string note;
        for (const auto& row : rep.rows) {
            ok = ok && row.within && row.envelope < prev_env;
            prev_env = row.envelope;
            note += " N=" + std::to_string(row.N) + ": |ratio-target|=" +
                    fmt_g15(std::abs(row.ratio - row.target)) + " env=" + fmt_g15(row.envelope) +
                    ";";
        }
        ok = ok && std::abs(rep.rows[0].target - std::tanh(0.125)) < 1e-15;
        report("12", ok, "S(x_N)/x_N vs tanh(1/8):" + note, seconds_since(t0));
    }

    std::printf("%d of 12 criteria failed%s\n", g_failures,
                g_failures ? " (see the notes above and the project ledger)" : "");
    return g_failures == 0 ? 0 : 1;
}
