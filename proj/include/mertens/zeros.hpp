#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/zeta.hpp"

namespace mertens::zeta {

struct ZetaZero {
    double gamma = 0.0;            // ordinate of rho = 1/2 + i gamma, gamma > 0
    cplx inv_zeta_prime{0.0, 0.0}; // 1/zeta'(rho); zero until residues are filled
    double err = 0.0;              // estimated absolute error of both fields
};

struct ZeroTable {
    double height_T = 0.0;
    bool complete = false;      // count validated against the zero-counting main term
    bool has_residues = false;
    std::vector<ZetaZero> zeros;  // strictly increasing gamma

    void validate() const {
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            if (!(zeros[i].gamma > 0.0))
                throw invalid_parameter("ZeroTable: ordinates must be positive");
            if (i > 0 && !(zeros[i].gamma > zeros[i - 1].gamma))
                throw invalid_parameter("ZeroTable: ordinates must be strictly increasing");
            if (zeros[i].gamma > height_T + 1e-9)
                throw invalid_parameter("ZeroTable: ordinate above height_T");
        }
    }

    // Restriction to height T2 <= height_T. A restriction of a validated
    // complete table is itself complete up to T2.
    ZeroTable truncated(double T2) const {
        if (!(T2 <= height_T))
            throw invalid_parameter("ZeroTable::truncated: T2 must not exceed height_T");
        ZeroTable out;
        out.height_T = T2;
        out.complete = complete;
        out.has_residues = has_residues;
        for (const auto& z : zeros)
            if (z.gamma <= T2) out.zeros.push_back(z);
        return out;
    }
};

namespace detail {

// Bisection with a false-position step where it helps; Z is real-valued and
// the bracket carries a sign change.
template <typename F>
inline double refine_sign_change(const F& f, double a, double b, double fa, double fb,
                                 double tol) {
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double m;
        if (fb != fa) {
            m = a - fa * (b - a) / (fb - fa);  // false position
            const double lo = a + 0.25 * (b - a), hi = b - 0.25 * (b - a);
            if (!(m > lo && m < hi)) m = 0.5 * (a + b);
        } else {
            m = 0.5 * (a + b);
        }
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0) != (fm < 0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Locates every sign change of Z on (0, T] and validates the count against
// round(theta(T)/pi + 1), halving the scan grid on a mismatch. The complete
// flag is set only when the counts agree.
inline ZeroTable find_zeros(double T, const EvalAccuracy& acc_in = {},
                            unsigned workers = default_workers()) {
    if (!(T >= 15.0)) throw invalid_parameter("find_zeros: requires T >= 15");
    EvalAccuracy acc = acc_in;
    if (acc.em_terms == 0 && acc.em_multiplier < 4) acc.em_multiplier = 4;
    if (acc.bernoulli_order < 30) acc.bernoulli_order = 30;

    const auto expected = static_cast<long long>(std::llround(counting_main_term(T)));
    const double t_lo = 2.0;
    double h = 1.0 / 16.0;

    std::vector<double> ordinates;
    for (int round_i = 0; round_i < 6; ++round_i) {
        ordinates.clear();
        const auto steps = static_cast<std::size_t>(std::ceil((T - t_lo) / h));
        const std::size_t block_sz = 4096;
        const std::size_t blocks = (steps + block_sz - 1) / block_sz;

        auto do_block = [&](std::size_t b) {
            std::vector<double> found;
            const std::size_t j0 = b * block_sz;
            const std::size_t j1 = std::min(steps, j0 + block_sz);
            double t_prev = t_lo + static_cast<double>(j0) * h;
            double z_prev = hardy_z(t_prev, acc);
            for (std::size_t j = j0 + 1; j <= j1; ++j) {
                const double t = std::min(T, t_lo + static_cast<double>(j) * h);
                const double z = hardy_z(t, acc);
                if ((z_prev < 0) != (z < 0)) {
                    const double g = detail::refine_sign_change(
                        [&](double u) { return hardy_z(u, acc); }, t_prev, t, z_prev, z, 1e-11);
                    found.push_back(g);
                }
                t_prev = t;
                z_prev = z;
            }
            return found;
        };
        parallel_blocks_ordered<std::vector<double>>(
            blocks, workers, do_block,
            [&](std::size_t, std::vector<double>& r) {
                ordinates.insert(ordinates.end(), r.begin(), r.end());
            });

        if (static_cast<long long>(ordinates.size()) == expected) break;
        h *= 0.5;
        if (round_i == 5) {
            // Report the most suspicious gap (largest relative to the local
            // mean spacing) before giving up.
            double worst = 0.0, glo = t_lo, ghi = T;
            for (std::size_t i = 0; i + 1 < ordinates.size(); ++i) {
                const double gap = ordinates[i + 1] - ordinates[i];
                const double local_mean = num::two_pi / std::log(ordinates[i] / num::two_pi);
                if (gap / local_mean > worst) {
                    worst = gap / local_mean;
                    glo = ordinates[i];
                    ghi = ordinates[i + 1];
                }
            }
            throw incompleteness_error(
                "find_zeros: sign-change count " + std::to_string(ordinates.size()) +
                    " does not match counting-formula value " + std::to_string(expected),
                glo, ghi);
        }
    }

    ZeroTable table;
    table.height_T = T;
    table.complete = true;
    for (double g : ordinates) table.zeros.push_back({g, {0.0, 0.0}, 2e-9});
    table.validate();
    return table;
}

// Fills 1/zeta'(1/2 + i gamma) for every zero. err accumulates the
// evaluator's remainder plus the sensitivity to the zero location.
inline ZeroTable compute_residues(ZeroTable table, const EvalAccuracy& acc_in = {},
                                  unsigned workers = default_workers()) {
    EvalAccuracy acc = acc_in;
    if (acc.em_terms == 0 && acc.em_multiplier < 4) acc.em_multiplier = 4;
    if (acc.bernoulli_order < 30) acc.bernoulli_order = 30;
    constexpr double simplicity_floor = 1e-6;

    const std::size_t block_sz = 256;
    const std::size_t blocks = (table.zeros.size() + block_sz - 1) / block_sz;
    auto do_block = [&](std::size_t b) {
        std::vector<ZetaZero> out;
        const std::size_t i0 = b * block_sz;
        const std::size_t i1 = std::min(table.zeros.size(), i0 + block_sz);
        for (std::size_t i = i0; i < i1; ++i) {
            ZetaZero z = table.zeros[i];
            const cplx s(0.5, z.gamma);
            const auto zp = zeta_prime_with_err(s, acc);
            const double zp_abs = std::abs(zp.value);
            if (zp_abs < simplicity_floor)
                throw near_multiple_zero_error(
                    "compute_residues: |zeta'(rho)| below simplicity floor", z.gamma, zp_abs);
            // Second derivative by central differences, for the location
            // sensitivity |zeta''/zeta'| * (location error).
            const double hd = 1e-4;
            const cplx z2 =
                (zeta_prime(s + cplx(0.0, hd), acc) - zeta_prime(s - cplx(0.0, hd), acc)) /
                cplx(0.0, 2.0 * hd);
            const double loc_err = z.err > 0 ? z.err : 2e-9;
            z.inv_zeta_prime = 1.0 / zp.value;
            z.err = (zp.err_bound + std::abs(z2) * loc_err) / (zp_abs * zp_abs);
            out.push_back(z);
        }
        return out;
    };
    std::vector<ZetaZero> filled;
    filled.reserve(table.zeros.size());
    parallel_blocks_ordered<std::vector<ZetaZero>>(
        blocks, workers, do_block,
        [&](std::size_t, std::vector<ZetaZero>& r) {
            filled.insert(filled.end(), r.begin(), r.end());
        });
    table.zeros = std::move(filled);
    table.has_residues = true;
    return table;
}

// ---------------------------------------------------------------------------
// Maximum of 1/|zeta(sigma + iT)| over a sigma-segment at fixed height T.
// ---------------------------------------------------------------------------

// Fixed-height evaluator: phases n^{-iT} are precomputed once (in long double
// so the phase error stays ~1e-12 even at T ~ 2e6), after which each point on
// the segment costs one real exp per term.
class line_evaluator {
  public:
    explicit line_evaluator(double T, double sigma_min, double target_abs_err = 1e-8)
        : T_(T) {
        for (int mult = 3; mult <= 8; ++mult) {
            N_ = std::max(32, mult * static_cast<int>(std::ceil(T / num::two_pi)));
            if (remainder_bound(sigma_min) < target_abs_err) break;
        }
        lnn_.resize(N_);
        ph_re_.resize(N_);
        ph_im_.resize(N_);
        const long double twopi_l = 6.283185307179586476925286766559005768L;
        for (int n = 1; n < N_; ++n) {
            lnn_[n] = std::log(static_cast<double>(n));
            const long double phase = std::fmod(-static_cast<long double>(T) *
                                                    std::log(static_cast<long double>(n)),
                                                twopi_l);
            ph_re_[n] = static_cast<double>(std::cos(phase));
            ph_im_[n] = static_cast<double>(std::sin(phase));
        }
    }

    int terms() const { return N_; }

    cplx eval(double sigma) const {
        kahan_cplx acc;
        for (int n = 1; n < N_; ++n) {
            const double a = std::exp(-sigma * lnn_[n]);
            acc.add({a * ph_re_[n], a * ph_im_[n]});
        }
        return acc.value() + corrections(sigma);
    }

    // d/dsigma of zeta(sigma + iT) (equals zeta'(s) since dsigma = ds here).
    cplx eval_dsigma(double sigma) const {
        kahan_cplx acc;
        for (int n = 1; n < N_; ++n) {
            const double a = -lnn_[n] * std::exp(-sigma * lnn_[n]);
            acc.add({a * ph_re_[n], a * ph_im_[n]});
        }
        return acc.value() + corrections_dsigma(sigma);
    }

    // Values of zeta on the uniform grid sigma0 + j h, j = 0..count-1.
    // Main sums run n-outer with a multiplicative update in j.
    std::vector<cplx> batch(double sigma0, double h, std::size_t count,
                            unsigned workers = default_workers()) const {
        std::vector<double> sre(count, 0.0), sim(count, 0.0);
        const std::size_t block = 65536;
        const std::size_t blocks = (static_cast<std::size_t>(N_) + block - 1) / block;

        using Partial = std::pair<std::vector<double>, std::vector<double>>;
        auto do_block = [&](std::size_t b) {
            Partial p{std::vector<double>(count, 0.0), std::vector<double>(count, 0.0)};
            const int n0 = std::max<std::size_t>(1, b * block);
            const int n1 = static_cast<int>(std::min<std::size_t>(N_, (b + 1) * block));
            for (int n = n0; n < n1; ++n) {
                double a = std::exp(-sigma0 * lnn_[n]);
                const double r = std::exp(-h * lnn_[n]);
                const double cr = ph_re_[n], ci = ph_im_[n];
                double* __restrict pre = p.first.data();
                double* __restrict pim = p.second.data();
                for (std::size_t j = 0; j < count; ++j) {
                    pre[j] += a * cr;
                    pim[j] += a * ci;
                    a *= r;
                }
            }
            return p;
        };
        parallel_blocks_ordered<Partial>(blocks, workers, do_block,
                                         [&](std::size_t, Partial& p) {
                                             for (std::size_t j = 0; j < count; ++j) {
                                                 sre[j] += p.first[j];
                                                 sim[j] += p.second[j];
                                             }
                                         });
        std::vector<cplx> out(count);
        for (std::size_t j = 0; j < count; ++j) {
            const double sigma = sigma0 + static_cast<double>(j) * h;
            out[j] = cplx(sre[j], sim[j]) + corrections(sigma);
        }
        return out;
    }

    double remainder_bound(double sigma) const {
        // Bound from the first omitted Bernoulli term at the worst sigma.
        const auto N = static_cast<double>(N_);
        const double ratio = std::hypot(sigma, T_) / (num::two_pi * N);
        const double lead = 2.0 * std::pow(N, 1.0 - sigma) / std::hypot(sigma, T_);
        const double admiss = std::hypot(sigma + 2.0 * q_ + 1.0, T_) / (sigma + 2.0 * q_ + 1.0);
        return lead * std::pow(ratio, 2.0 * (q_ + 1)) * admiss;
    }

  private:
    cplx corrections(double sigma) const {
        const cplx s(sigma, T_);
        const double lnN = std::log(static_cast<double>(N_));
        const long double twopi_l = 6.283185307179586476925286766559005768L;
        const long double phase = std::fmod(-static_cast<long double>(T_) *
                                                std::log(static_cast<long double>(N_)),
                                            twopi_l);
        const cplx Ns = std::exp(-sigma * lnN) *
                        cplx(static_cast<double>(std::cos(phase)),
                             static_cast<double>(std::sin(phase)));
        cplx v = static_cast<double>(N_) * Ns / (s - 1.0) + 0.5 * Ns;
        cplx P = s;
        const double invN2 = 1.0 / (static_cast<double>(N_) * static_cast<double>(N_));
        cplx Npow = static_cast<double>(N_) * Ns * invN2;
        for (int k = 1; k <= q_; ++k) {
            v += bernoulli_over_factorial(k) * Npow * P;
            for (int j = 2 * k - 1; j <= 2 * k; ++j) P *= s + static_cast<double>(j);
            Npow *= invN2;
        }
        return v;
    }

    cplx corrections_dsigma(double sigma) const {
        const cplx s(sigma, T_);
        const double lnN = std::log(static_cast<double>(N_));
        const long double twopi_l = 6.283185307179586476925286766559005768L;
        const long double phase = std::fmod(-static_cast<long double>(T_) *
                                                std::log(static_cast<long double>(N_)),
                                            twopi_l);
        const cplx Ns = std::exp(-sigma * lnN) *
                        cplx(static_cast<double>(std::cos(phase)),
                             static_cast<double>(std::sin(phase)));
        const cplx sm1 = s - 1.0;
        cplx v = static_cast<double>(N_) * Ns * (-lnN / sm1 - 1.0 / (sm1 * sm1)) -
                 0.5 * lnN * Ns;
        cplx P = s, dP = 1.0;
        const double invN2 = 1.0 / (static_cast<double>(N_) * static_cast<double>(N_));
        cplx Npow = static_cast<double>(N_) * Ns * invN2;
        for (int k = 1; k <= q_; ++k) {
            v += bernoulli_over_factorial(k) * Npow * (dP - lnN * P);
            for (int j = 2 * k - 1; j <= 2 * k; ++j) {
                dP = dP * (s + static_cast<double>(j)) + P;
                P *= s + static_cast<double>(j);
            }
            Npow *= invN2;
        }
        return v;
    }

    double T_;
    int N_ = 0;
    int q_ = 15;
    std::vector<double> lnn_, ph_re_, ph_im_;
};

// max over sigma in [lo, hi] of 1/|zeta(sigma + iT)|: subdivide at 2^-16,
// discard subintervals that cannot contain the minimum of |zeta|, then refine
// candidates to 2^-22 and chase stationary points of |zeta| for 23 more
// bisections. Endpoints are always included.
inline double inv_zeta_segment_max(double T, double sigma_lo, double sigma_hi,
                                   const EvalAccuracy& acc = {},
                                   unsigned workers = default_workers()) {
    if (!(sigma_lo <= sigma_hi))
        throw invalid_parameter("inv_zeta_segment_max: requires sigma_lo <= sigma_hi");
    constexpr double zero_floor = 1e-6;

    line_evaluator ev(T, std::min(sigma_lo, 0.0), std::min(acc.target_abs_err, 1e-8));

    if (sigma_hi == sigma_lo) {
        const double v = std::abs(ev.eval(sigma_lo));
        if (v < zero_floor)
            throw potential_zero_on_line("inv_zeta_segment_max: |zeta| below zero floor",
                                         sigma_lo);
        return 1.0 / v;
    }

    const double len = sigma_hi - sigma_lo;
    const auto n_iv = static_cast<std::size_t>(std::ceil(len * 65536.0));
    const double h = len / static_cast<double>(n_iv);
    const auto grid = ev.batch(sigma_lo, h, n_iv + 1, workers);

    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = std::abs(grid[j]);

    double vmin = v[0];
    double max_step = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        vmin = std::min(vmin, v[j]);
        if (j > 0) max_step = std::max(max_step, std::abs(v[j] - v[j - 1]));
    }
    const double slack = 4.0 * max_step + 1e-9;

    // Candidate local minima that could still hold the global minimum.
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const bool left_ok = j == 0 || v[j] <= v[j - 1];
        const bool right_ok = j + 1 == v.size() || v[j] <= v[j + 1];
        if (left_ok && right_ok && v[j] <= vmin + slack) candidates.push_back(j);
    }

    auto abs2_deriv_sign = [&](double sigma) {
        const cplx z = ev.eval(sigma);
        const cplx dz = ev.eval_dsigma(sigma);
        const double d = 2.0 * (z.real() * dz.real() + z.imag() * dz.imag());
        return d;
    };

    double best = std::min(v.front(), v.back());
    for (std::size_t j : candidates) {
        double a = sigma_lo + (j > 0 ? (static_cast<double>(j) - 1.0) : 0.0) * h;
        double b = sigma_lo + std::min<double>(static_cast<double>(j) + 1.0,
                                               static_cast<double>(n_iv)) * h;
        // Refine to 2^-22, then 23 further bisections on the sign of
        // d|zeta|^2/dsigma.
        double da = abs2_deriv_sign(a), db = abs2_deriv_sign(b);
        const int to_2_22 = 6;  // 2^-16 interval pair -> 2^-22 after 6 halvings
        for (int it = 0; it < to_2_22 + 23 && (da < 0) != (db < 0); ++it) {
            const double m = 0.5 * (a + b);
            const double dm = abs2_deriv_sign(m);
            if ((da < 0) != (dm < 0)) {
                b = m;
                db = dm;
            } else {
                a = m;
                da = dm;
            }
        }
        for (double probe : {a, 0.5 * (a + b), b}) best = std::min(best, std::abs(ev.eval(probe)));
    }

    if (best < zero_floor)
        throw potential_zero_on_line("inv_zeta_segment_max: |zeta| below zero floor on segment",
                                     sigma_lo);
    return 1.0 / best;
}

// Combined max over the whole ray r <= hi at height T: the scanned segment
// [lo, hi] joined with the closed-form left-half-plane bound, which is
// decreasing to the left of lo for T > 2 pi e.
inline double inv_zeta_line_max(double T, double lo, double hi, const EvalAccuracy& acc = {},
                                unsigned workers = default_workers()) {
    const double scanned = inv_zeta_segment_max(T, lo, hi, acc, workers);
    const double base = num::two_pi * num::e / T;
    const double power = std::pow(base, 0.5 - lo);
    // |1/zeta(1-s)| <= zeta(1-lo)/zeta(2-2lo) for Re s <= lo < 0.
    EvalAccuracy a2;
    const double zr = zeta(cplx(1.0 - lo, 0.0), a2).real();
    const double z2r = zeta(cplx(2.0 - 2.0 * lo, 0.0), a2).real();
    const double left = power * std::sqrt(num::e) * zr / z2r;
    return std::max(scanned, left);
}

}  // namespace mertens::zeta
