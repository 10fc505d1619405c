#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"

namespace mertens {

// B_{2k} for k = 1..16 (B_2 = 1/6, ..., B_32).
inline constexpr std::array<double, 17> bernoulli_2k = {
    0.0,  // unused slot so bernoulli_2k[k] = B_{2k}
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
};

namespace detail {
inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
}  // namespace detail

// B_{2k}/(2k)! ; precomputed once.
inline double bernoulli_over_factorial(int k) {
    static const auto table = [] {
        std::array<double, 17> t{};
        for (int k = 1; k <= 16; ++k) t[k] = bernoulli_2k[k] / detail::factorial(2 * k);
        return t;
    }();
    return table[k];
}

// log Gamma(z) by Stirling's series after shifting Re z above 12.
// Valid for Re z > 0 (all call sites keep to the right half-plane, where the
// principal branch is continuous).
inline cplx log_gamma(cplx z) {
    if (z.real() <= 0.0 && z.imag() == 0.0 && z.real() == std::nearbyint(z.real()))
        throw pole_error("log_gamma: pole at non-positive integer", z);
    cplx shift = 0.0;
    while (z.real() < 12.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    const cplx zinv = 1.0 / z;
    const cplx zinv2 = zinv * zinv;
    cplx series = 0.0;
    cplx zpow = zinv;
    for (int k = 1; k <= 8; ++k) {
        series += bernoulli_2k[k] / (2.0 * k * (2.0 * k - 1.0)) * zpow;
        zpow *= zinv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(num::two_pi) + series + shift;
}

// Exponential integral Ei(x) for x > 0 by the power series
//   Ei(x) = gamma + log x + sum_{k>=1} x^k/(k k!).
// Adequate for the x <= 40 range exercised here; no asymptotic branch.
inline double exp_integral_ei(double x) {
    if (!(x > 0.0)) throw invalid_parameter("exp_integral_ei: requires x > 0");
    if (x > 40.0) throw invalid_parameter("exp_integral_ei: series branch limited to x <= 40");
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= x / k;
        double add = term / k;
        sum += add;
        if (add < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return num::euler_gamma + std::log(x) + sum;
}

// Lerch transcendent Phi(w, 1, a) = sum_{n>=0} w^n/(n+a) for real |w| < 1 and
// complex a off the non-positive integers. Geometric tail bound.
inline cplx lerch_phi_s1(double w, cplx a, double abs_tol = 1e-14, int max_terms = 100000) {
    if (!(std::abs(w) < 1.0))
        throw invalid_parameter("lerch_phi_s1: requires |w| < 1");
    kahan_cplx acc;
    double wn = 1.0;
    for (int n = 0; n < max_terms; ++n) {
        cplx den = a + static_cast<double>(n);
        if (std::abs(den) < 1e-300)
            throw pole_error("lerch_phi_s1: pole at a = non-positive integer", a);
        acc.add(wn / den);
        wn *= w;
        // All remaining denominators satisfy |n+1+a| >= max(1, n+1-|a|).
        double floor_den = std::max(1.0, (n + 1.0) - std::abs(a));
        double tail = std::abs(wn) / ((1.0 - std::abs(w)) * floor_den);
        if (tail < abs_tol) return acc.value();
    }
    throw truncation_failure("lerch_phi_s1: max_terms reached", std::abs(wn));
}

// sin(pi z) with the real part reduced to the nearest integer first, so the
// result stays fully accurate near the zeros.
inline cplx sin_pi(cplx z) {
    const double m = std::nearbyint(z.real());
    const cplx r = std::sin(num::pi * (z - m));
    const bool odd = std::fmod(std::abs(m), 2.0) == 1.0;
    return odd ? -r : r;
}

inline cplx cos_pi_half(cplx z) {
    // cos(pi z / 2) via cos(pi (z - 2k)/2) = (-1)^k cos(pi z / 2).
    const double k = std::nearbyint(z.real() / 2.0);
    const cplx r = std::cos(num::half_pi * (z - 2.0 * k));
    const bool odd = std::fmod(std::abs(k), 2.0) == 1.0;
    return odd ? -r : r;
}

// coth for complex argument: imaginary part reduced mod 2*pi (coth has period
// i pi) so accuracy holds for large |Im z|, an asymptotic branch for large
// |Re z|, and the sinh/cosh quotient elsewhere, which stays fully accurate
// near the pole at 0.
inline cplx coth(cplx z) {
    const double re = z.real();
    const double im = std::remainder(z.imag(), num::two_pi);
    if (std::abs(re) > 19.0) {
        // coth(z) = sgn(Re z) (1 + 2 e^{-2|Re z|} e^{-2 i sgn(Re z) Im z} + ...)
        const double s = re > 0 ? 1.0 : -1.0;
        const cplx small = 2.0 * std::exp(-2.0 * std::abs(re)) * std::exp(cplx(0.0, -2.0 * s * im));
        return s * (1.0 + small);
    }
    const cplx zr(re, im);
    const cplx sh = std::sinh(zr);
    if (std::abs(sh) < 1e-300) throw pole_error("coth: pole", z);
    return std::cosh(zr) / sh;
}

inline cplx tanh_c(cplx z) {
    const double re = z.real();
    const double im = std::remainder(z.imag(), num::two_pi);
    if (std::abs(re) > 19.0) {
        const double s = re > 0 ? 1.0 : -1.0;
        const cplx small = 2.0 * std::exp(-2.0 * std::abs(re)) * std::exp(cplx(0.0, -2.0 * s * im));
        return s * (1.0 - small);
    }
    const cplx zr(re, im);
    return std::sinh(zr) / std::cosh(zr);
}

}  // namespace mertens
