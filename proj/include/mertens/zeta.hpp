#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/special.hpp"

namespace mertens::zeta {

// Euler-Maclaurin evaluation controls. em_terms = 0 lets the evaluator pick
// N = em_multiplier * ceil(|Im s|/2pi) (floor 32) and escalate until the
// remainder bound meets target_abs_err.
struct EvalAccuracy {
    int em_terms = 0;
    int em_multiplier = 2;
    int bernoulli_order = 12;  // highest B_{2k} used is B_order
    double target_abs_err = 1e-9;
    bool auto_escalate = true;

    int terms_for(double im_abs) const {
        if (em_terms > 0) return em_terms;
        const int base = static_cast<int>(std::ceil(im_abs / num::two_pi));
        return std::max(32, em_multiplier * base);
    }
};

struct EvalResult {
    cplx value;
    double err_bound;  // rigorous-form Euler-Maclaurin remainder bound
};

namespace detail {

// zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
//         + sum_{k=1..q} B_{2k}/(2k)! N^{1-s-2k} prod_{j=0}^{2k-2}(s+j) + E_q,
// |E_q| <= |next term| * |s+2q+1| / (Re s + 2q + 1)   (needs Re s + 2q+1 > 0).
//
// want_derivative additionally accumulates the term-by-term s-derivative.
struct em_eval {
    cplx value{};
    cplx deriv{};
    double err_bound = 1e300;
    double deriv_err_bound = 1e300;
};

inline em_eval em_zeta_core(cplx s, int N, int q_max, bool want_derivative) {
    em_eval out;
    const double ln_n_cap = std::log(static_cast<double>(N));

    kahan_cplx sum, dsum;
    for (int n = 1; n < N; ++n) {
        const double ln = std::log(static_cast<double>(n));
        const cplx t = std::exp(-s * ln);
        sum.add(t);
        if (want_derivative) dsum.add(-ln * t);
    }
    const cplx Ns = std::exp(-s * ln_n_cap);          // N^-s
    const cplx sm1 = s - 1.0;
    const cplx value = sum.value() + static_cast<double>(N) * Ns / sm1 + 0.5 * Ns;
    cplx deriv;
    if (want_derivative)
        deriv = dsum.value() +
                static_cast<double>(N) * Ns * (-ln_n_cap / sm1 - 1.0 / (sm1 * sm1)) +
                0.5 * Ns * (-ln_n_cap);

    // Bernoulli correction terms, with (P, P') accumulated by the product
    // rule so no division by potentially-zero (s+j) happens. The value and
    // the derivative pick their truncation depth independently: a remainder
    // term that vanishes at this exact s says nothing about its s-derivative.
    cplx P = s, dP = 1.0;
    const double invN = 1.0 / static_cast<double>(N);
    const double invN2 = invN * invN;
    cplx Npow = static_cast<double>(N) * Ns * invN2;  // N^{1-s-2k} at k=1
    double best_err = 1e300, best_derr = 1e300;
    cplx acc_terms{}, acc_dterms{};
    for (int k = 1; k <= q_max; ++k) {
        const double coeff = bernoulli_over_factorial(k);
        acc_terms += coeff * Npow * P;
        if (want_derivative) acc_dterms += coeff * Npow * (dP - ln_n_cap * P);

        cplx P_next = P, dP_next = dP;
        for (int j = 2 * k - 1; j <= 2 * k; ++j) {
            dP_next = dP_next * (s + static_cast<double>(j)) + P_next;
            P_next = P_next * (s + static_cast<double>(j));
        }
        const cplx Npow_next = Npow * invN2;

        // |E_k| <= |T_{k+1}| |s+2k+1| / (Re s + 2k + 1).
        const double denom = s.real() + 2.0 * k + 1.0;
        if (denom > 0.0) {
            const double err = std::abs(bernoulli_over_factorial(k + 1)) * std::abs(Npow_next) *
                               std::abs(P_next) * std::abs(s + (2.0 * k + 1.0)) / denom;
            if (err < best_err) {
                best_err = err;
                out.value = value + acc_terms;
            }
        }

        if (want_derivative) {
            // Cauchy estimate on a radius-1/2 disc around s: every factor of
            // the remainder bound is majorized on the disc.
            const double denom_shift = s.real() - 0.5 + 2.0 * k + 1.0;
            if (denom_shift > 0.0) {
                double pnext_shift = 1.0;
                for (int j = 0; j <= 2 * k; ++j)
                    pnext_shift *= std::abs(s + static_cast<double>(j)) + 0.5;
                const double err_disc = std::abs(bernoulli_over_factorial(k + 1)) *
                                        std::abs(Npow_next) *
                                        std::pow(static_cast<double>(N), 0.5) * pnext_shift *
                                        (std::abs(s + (2.0 * k + 1.0)) + 0.5) / denom_shift;
                if (err_disc / 0.5 < best_derr) {
                    best_derr = err_disc / 0.5;
                    out.deriv = deriv + acc_dterms;
                }
            }
        }

        P = P_next;
        dP = dP_next;
        Npow = Npow_next;
    }
    // Accumulated rounding: the main sum has N terms of size up to N^{-Re s},
    // and the closing terms are of size ~ N^{1-Re s}/|s-1|. Folding this floor
    // into the bound keeps it honest where cancellation dominates truncation.
    const double term_scale =
        std::pow(static_cast<double>(N), std::max(0.0, -s.real())) *
        (1.0 + static_cast<double>(N) / std::max(1.0, std::abs(sm1)));
    const double rounding = 1e-15 * term_scale;
    out.err_bound = best_err + rounding;
    out.deriv_err_bound = best_derr + rounding * (ln_n_cap + 1.0);
    return out;
}

inline em_eval em_zeta_driver(cplx s, const EvalAccuracy& acc, bool want_derivative) {
    if (std::abs(s - 1.0) < 1e-12) throw pole_error("zeta: pole at s = 1", s);
    const int q_cap = std::min(15, std::max(1, acc.bernoulli_order / 2));
    int N = acc.terms_for(std::abs(s.imag()));
    int q = q_cap;
    em_eval r = em_zeta_core(s, N, q, want_derivative);
    const double target = acc.target_abs_err;
    if (acc.auto_escalate) {
        int tries = 0;
        while ((r.err_bound > target || (want_derivative && r.deriv_err_bound > 10.0 * target)) &&
               tries < 5) {
            if (q < 15) {
                q = 15;
            } else {
                N = N * 2;
            }
            r = em_zeta_core(s, N, q, want_derivative);
            ++tries;
        }
    }
    if (r.err_bound > target)
        throw accuracy_error("zeta: Euler-Maclaurin remainder above target", r.err_bound, target);
    return r;
}

}  // namespace detail

// zeta(s) with an explicit remainder bound.
inline EvalResult zeta_with_err(cplx s, const EvalAccuracy& acc = {}) {
    auto r = detail::em_zeta_driver(s, acc, false);
    return {r.value, r.err_bound};
}

inline cplx zeta(cplx s, const EvalAccuracy& acc = {}) { return zeta_with_err(s, acc).value; }

// zeta'(s), term-by-term differentiated Euler-Maclaurin.
inline EvalResult zeta_prime_with_err(cplx s, const EvalAccuracy& acc = {}) {
    auto r = detail::em_zeta_driver(s, acc, true);
    return {r.deriv, r.deriv_err_bound};
}

inline cplx zeta_prime(cplx s, const EvalAccuracy& acc = {}) {
    return zeta_prime_with_err(s, acc).value;
}

// Right-hand side of the reflection formula
//   zeta(s) = (2 pi)^{s-1} 2 sin(pi s/2) Gamma(1-s) zeta(1-s),
// for Re s <= 1/2 so the zeta argument on the right is comfortable.
inline cplx functional_equation_rhs(cplx s, const EvalAccuracy& acc = {}) {
    if (s.real() > 0.5 + 1e-12)
        throw invalid_parameter("functional_equation_rhs: requires Re s <= 1/2");
    const cplx one_minus_s = 1.0 - s;
    if (one_minus_s.imag() == 0.0 && one_minus_s.real() <= 0.0 &&
        one_minus_s.real() == std::nearbyint(one_minus_s.real()))
        throw pole_error("functional_equation_rhs: Gamma pole at 1-s", one_minus_s);
    const cplx lg = log_gamma(one_minus_s);
    const cplx pref = std::exp((s - 1.0) * std::log(num::two_pi) + lg);
    return pref * 2.0 * std::sin(num::half_pi * s) * zeta(one_minus_s, acc);
}

// Riemann-Siegel theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.
inline double riemann_siegel_theta(double t) {
    return log_gamma(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(num::pi);
}

// Main term of the zero-counting function at height T.
inline double counting_main_term(double T) {
    return riemann_siegel_theta(T) / num::pi + 1.0;
}

// Hardy Z(t) = e^{i theta(t)} zeta(1/2 + it); real-valued, so the imaginary
// residue of the product is asserted small and dropped.
inline double hardy_z(double t, const EvalAccuracy& acc = {}) {
    if (!(t > 0.0)) throw invalid_parameter("hardy_z: requires t > 0");
    const cplx z = zeta(cplx(0.5, t), acc);
    const double th = riemann_siegel_theta(t);
    const cplx rotated = std::exp(cplx(0.0, th)) * z;
    const double tol = std::max(1e-8, 1e-9 * std::abs(rotated));
    if (std::abs(rotated.imag()) > tol + 100.0 * acc.target_abs_err)
        throw accuracy_error("hardy_z: rotated value not numerically real",
                             std::abs(rotated.imag()), tol);
    return rotated.real();
}

// Upper bound for 1/|zeta(s)| on the left half-plane:
//   (2 pi e / |Im s|)^{1/2 - Re s} sqrt(e) / |zeta(1-s)|   (Re s <= 0, |Im s| >= 1).
inline double inv_zeta_left_bound(cplx s, const EvalAccuracy& acc = {}) {
    if (!(s.real() <= 0.0) || !(std::abs(s.imag()) >= 1.0))
        throw invalid_parameter("inv_zeta_left_bound: requires Re s <= 0 and |Im s| >= 1");
    const double base = num::two_pi * num::e / std::abs(s.imag());
    const double power = std::pow(base, 0.5 - s.real());
    return power * std::sqrt(num::e) / std::abs(zeta(1.0 - s, acc));
}

// General form of the same bound, valid for Re s <= 1/2.
inline double inv_zeta_left_bound_general(cplx s, const EvalAccuracy& acc = {}) {
    if (!(s.real() <= 0.5))
        throw invalid_parameter("inv_zeta_left_bound_general: requires Re s <= 1/2");
    const double base = num::two_pi * num::e / std::abs(1.0 - s);
    const double power = std::pow(base, 0.5 - s.real());
    const double sin_mag = std::abs(std::sin(num::half_pi * s));
    if (sin_mag == 0.0) throw pole_error("inv_zeta_left_bound_general: sin factor vanishes", s);
    return power * std::exp(num::half_pi * std::abs(s.imag())) / (2.0 * sin_mag) *
           std::sqrt(num::e) / std::abs(zeta(1.0 - s, acc));
}

// 1/zeta'(-2n) in closed form: (-1)^n (2 pi)^{2n+1} / (pi (2n)! zeta(2n+1)),
// with zeta(2n+1) from the direct series.
// zeta(2n+1) by the direct series with the integral, half-term and first
// Bernoulli corrections; remainder below 2e-15 already at n = 1.
inline double zeta_odd(int n) {
    const double s = 2.0 * n + 1.0;
    const int N = 200;
    kahan zs;
    for (int m = 1; m < N; ++m) zs.add(std::pow(static_cast<double>(m), -s));
    zs.add(std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0));
    zs.add(0.5 * std::pow(static_cast<double>(N), -s));
    zs.add(s / 12.0 * std::pow(static_cast<double>(N), -s - 1.0));
    return zs.value();
}

inline double inv_zeta_prime_at_trivial(int n) {
    if (n < 1) throw invalid_parameter("inv_zeta_prime_at_trivial: requires n >= 1");
    if (n > 80) throw invalid_parameter("inv_zeta_prime_at_trivial: factorial out of double range");
    double fact = 1.0;
    for (int i = 2; i <= 2 * n; ++i) fact *= i;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double pow2pi = std::pow(num::two_pi, 2.0 * n + 1.0);
    if (!std::isfinite(pow2pi) || !std::isfinite(fact))
        throw invalid_parameter("inv_zeta_prime_at_trivial: overflow");
    return sign * pow2pi / (num::pi * fact * zeta_odd(n));
}

}  // namespace mertens::zeta
