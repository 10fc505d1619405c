#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/quadrature.hpp"
#include "mertens/zeta.hpp"

namespace mertens::tight {

// Fejer approximation to the square wave sgn(cos t): only odd harmonics, with
// the alternating signs of the square wave's Fourier coefficients and Fejer
// damping, so |sigma_K| <= 1 everywhere (no Gibbs overshoot).
struct FejerParams {
    int K = 0;
    double T_plus = 0.0;
    std::vector<double> c;  // c[k], k = 0..K; zero for even k

    FejerParams(int K_, double T_plus_) : K(K_), T_plus(T_plus_), c(K_ + 1, 0.0) {
        if (K < 1) throw invalid_parameter("FejerParams: K >= 1");
        if (!(T_plus > 0.0)) throw invalid_parameter("FejerParams: T_plus > 0");
        for (int k = 1; k <= K; k += 2) {
            const double sign = (k % 4 == 1) ? 1.0 : -1.0;
            c[k] = sign * 4.0 / num::pi * (1.0 / k - 1.0 / (K + 1.0));
        }
    }
};

inline double square_wave(double t) { return std::cos(t) >= 0.0 ? 1.0 : -1.0; }

// sigma_K(t) = sum_k c_k cos(k t), via the odd-harmonic three-term recurrence
// cos((k+2)t) = 2 cos(2t) cos(kt) - cos((k-2)t).
inline double fejer_square_wave(const FejerParams& p, double t) {
    const double c2 = 2.0 * std::cos(2.0 * t);
    double ckm2 = std::cos(t);      // cos(1 t)
    double ck = c2 * ckm2 - ckm2;   // cos(3 t)
    double acc = p.c[1] * ckm2;
    for (int k = 3; k <= p.K; k += 2) {
        acc += p.c[k] * ck;
        const double next = c2 * ck - ckm2;
        ckm2 = ck;
        ck = next;
    }
    return acc;
}

// ||sigma_K - sgn cos||_1 over one period, with the square-wave jumps at
// pi/2 and 3 pi/2 as panel boundaries (the integrand is smooth per panel up
// to the |.| kinks, which the adaptive rule resolves).
inline double l1_distance_to_square_wave(const FejerParams& p, double abs_tol = 1e-10) {
    auto f = [&](double t) { return std::abs(fejer_square_wave(p, t) - square_wave(t)); };
    kahan acc;
    for (auto [a, b] : {std::pair{0.0, num::half_pi},
                        std::pair{num::half_pi, 3.0 * num::half_pi},
                        std::pair{3.0 * num::half_pi, num::two_pi}})
        acc.add(integrate_adaptive(f, a, b, abs_tol / 3.0).value);
    return acc.value();
}

// sum_k 4 k |c_k|: an upper bound for the total variation of sigma_K over a
// period.
inline double total_variation_bound(const FejerParams& p) {
    double s = 0.0;
    for (int k = 1; k <= p.K; k += 2) s += 4.0 * k * std::abs(p.c[k]);
    return s;
}

struct ExperimentRow {
    long long N = 0;
    double x = 0.0;           // exp((2 pi N + pi/2) / T_plus)
    double S = 0.0;           // sum_{n<=x} sigma_K(T_plus log n)
    double ratio = 0.0;       // S / x
    double target = 0.0;      // tanh(pi / 2 T_plus)
    double envelope = 0.0;    // allowed |ratio - target|
    bool within = false;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    double l1_err = 0.0;       // ||sigma_K - sgn cos||_1
    double tv_bound = 0.0;
    double harmonic_sum = 0.0;     // sum_{n<=x_max} sigma_K(T_plus log n)/n
    double harmonic_target = 0.0;  // pi / (2 T_plus)
};

// Partial sums S(x_N) at the aligned heights x_N = exp((2 pi N + pi/2)/T_plus),
// against x tanh(pi/2 T_plus) with the fully explicit error envelope
//   |S - x tanh(a)| <= (2x/T) ||sigma_K - g||_1 + TV (T log x / 2 pi + 1)/2
//                      + 2 + (1 - sech(a)),  a = pi/(2 T_plus).
// Evaluation uses a dense lookup table of sigma_K (interpolation error is
// checked against direct evaluation in the tests).
inline ExperimentReport leading_constant_experiment(const FejerParams& p,
                                                    const std::vector<long long>& N_list,
                                                    std::uint64_t x_cap = 1000000000ull,
                                                    unsigned workers = default_workers()) {
    ExperimentReport rep;
    rep.l1_err = l1_distance_to_square_wave(p);
    rep.tv_bound = total_variation_bound(p);
    const double a = num::half_pi / p.T_plus;
    const double target = std::tanh(a);
    rep.harmonic_target = a;

    // Dense table of sigma_K over [0, 2 pi], Catmull-Rom interpolation.
    const std::size_t grid = std::size_t{1} << 20;
    std::vector<double> tab(grid + 3);
    for (std::size_t i = 0; i <= grid; ++i)
        tab[i] = fejer_square_wave(p, num::two_pi * static_cast<double>(i) / grid);
    tab[grid + 1] = tab[1 % (grid + 1)];
    tab[grid + 2] = tab[2 % (grid + 1)];
    auto sigma_at = [&](double theta) {
        double u = theta * (grid / num::two_pi);
        const auto i0 = static_cast<std::size_t>(u);
        const double f = u - static_cast<double>(i0);
        const double ym1 = tab[i0 == 0 ? grid - 1 : i0 - 1];
        const double y0 = tab[i0], y1 = tab[i0 + 1], y2 = tab[i0 + 2];
        const double a0 = -0.5 * ym1 + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
        const double a1 = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
        const double a2 = -0.5 * ym1 + 0.5 * y1;
        return ((a0 * f + a1) * f + a2) * f + y0;
    };

    std::vector<std::uint64_t> xs;
    for (long long N : N_list) {
        const double x = std::exp((num::two_pi * static_cast<double>(N) + num::half_pi) / p.T_plus);
        if (!(x <= static_cast<double>(x_cap)))
            throw oracle_range_error("leading_constant_experiment: x_N exceeds range cap");
        xs.push_back(static_cast<std::uint64_t>(std::floor(x)));
    }
    const std::uint64_t x_max = *std::max_element(xs.begin(), xs.end());

    // One pass over n <= max x_N, checkpointing partial sums at each x_N.
    std::vector<double> S_at(xs.size(), 0.0);
    kahan S, H;
    const std::uint64_t block = 1 << 22;
    const std::uint64_t blocks = (x_max + block - 1) / block;
    struct Partial {
        double s = 0, h = 0;
        std::vector<std::pair<std::size_t, double>> hits;  // (row, S so far at x_N)
    };
    auto do_block = [&](std::size_t b) {
        Partial out;
        kahan s_loc, h_loc;
        const std::uint64_t lo = b * block + 1;
        const std::uint64_t hi = std::min(x_max, (b + 1) * block);
        for (std::uint64_t n = lo; n <= hi; ++n) {
            const double theta = std::fmod(p.T_plus * std::log(static_cast<double>(n)), num::two_pi);
            const double v = sigma_at(theta < 0 ? theta + num::two_pi : theta);
            s_loc.add(v);
            h_loc.add(v / static_cast<double>(n));
            for (std::size_t r = 0; r < xs.size(); ++r)
                if (xs[r] == n) out.hits.emplace_back(r, s_loc.value());
        }
        out.s = s_loc.value();
        out.h = h_loc.value();
        return out;
    };
    parallel_blocks_ordered<Partial>(blocks, workers, do_block, [&](std::size_t, Partial& pt) {
        for (auto& [r, s_local] : pt.hits) S_at[r] = S.value() + s_local;
        S.add(pt.s);
        H.add(pt.h);
    });
    rep.harmonic_sum = H.value();

    for (std::size_t r = 0; r < xs.size(); ++r) {
        ExperimentRow row;
        row.N = N_list[r];
        row.x = std::exp((num::two_pi * static_cast<double>(N_list[r]) + num::half_pi) / p.T_plus);
        row.S = S_at[r];
        row.ratio = row.S / row.x;
        row.target = target;
        const double env_abs = 2.0 * row.x / p.T_plus * rep.l1_err +
                               0.5 * rep.tv_bound * (p.T_plus * std::log(row.x) / num::two_pi + 1.0) +
                               2.0 + (1.0 - 1.0 / std::cosh(a));
        row.envelope = env_abs / row.x;
        row.within = std::abs(row.ratio - row.target) <= row.envelope;
        rep.rows.push_back(row);
    }
    return rep;
}

struct DirichletRepCheck {
    cplx truncated{};
    cplx via_zeta{};
    double tail_bound = 0.0;
    bool consistent = false;
};

// Truncated Dirichlet series of a_n = sigma_K(T_plus log n) against the
// closed form sum_k (c_k/2)(zeta(s - i k T_plus) + zeta(s + i k T_plus)).
// c_0 = 0, so the closed form has no pole term.
inline DirichletRepCheck dirichlet_series_identity_check(const FejerParams& p, cplx s,
                                                         std::uint64_t n_terms = 200000) {
    if (!(s.real() > 1.2))
        throw invalid_parameter("dirichlet_series_identity_check: requires Re s > 1.2");
    DirichletRepCheck out;
    kahan_cplx acc;
    for (std::uint64_t n = 1; n <= n_terms; ++n) {
        const double ln = std::log(static_cast<double>(n));
        acc.add(fejer_square_wave(p, p.T_plus * ln) * std::exp(-s * ln));
    }
    out.truncated = acc.value();

    kahan_cplx zc;
    zeta::EvalAccuracy acc_z;
    for (int k = 1; k <= p.K; k += 2) {
        const cplx sm = s - cplx(0.0, k * p.T_plus);
        const cplx sp = s + cplx(0.0, k * p.T_plus);
        zc.add(0.5 * p.c[k] * (zeta::zeta(sm, acc_z) + zeta::zeta(sp, acc_z)));
    }
    out.via_zeta = zc.value();

    const double sig = s.real();
    out.tail_bound = std::pow(static_cast<double>(n_terms), 1.0 - sig) / (sig - 1.0);
    out.consistent = std::abs(out.truncated - out.via_zeta) <= out.tail_bound + 1e-8;
    return out;
}

}  // namespace mertens::tight
