#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/special.hpp"

namespace mertens::approx {

// Spectral-side parameters tied together by nu = |lambda|/2.
struct ApproximantParams {
    double lambda;
    double nu;

    explicit ApproximantParams(double lambda_) : lambda(lambda_), nu(0.5 * std::abs(lambda_)) {
        if (lambda == 0.0) throw invalid_parameter("ApproximantParams: lambda must be nonzero");
    }
};

// Height/shift pair; delta is always derived from T, never stored.
struct WeightParams {
    double T;
    double sigma;

    WeightParams(double T_, double sigma_) : T(T_), sigma(sigma_) {
        if (!(T > 0.0)) throw invalid_parameter("WeightParams: T must be positive");
    }
    double delta() const { return num::half_pi / T; }
};

struct TruncationPolicy {
    double abs_tol = 1e-12;
    int max_terms = 200000;

    TruncationPolicy() = default;
    TruncationPolicy(double tol, int terms) : abs_tol(tol), max_terms(terms) {
        if (!(abs_tol > 0.0)) throw invalid_parameter("TruncationPolicy: abs_tol must be positive");
        if (max_terms <= 0) throw invalid_parameter("TruncationPolicy: max_terms must be positive");
    }
};

// One-sided exponential: e^{-lambda y} on the half-line where sgn(lambda) y >= 0,
// zero elsewhere; the y = 0 value is 1.
inline double truncated_exponential(double lambda, double y) {
    if (lambda == 0.0) throw invalid_parameter("truncated_exponential: lambda must be nonzero");
    if (y == 0.0) return 1.0;
    const double sy = lambda > 0 ? y : -y;
    if (sy < 0.0) return 0.0;
    return std::exp(-lambda * y);
}

// tanh(x)/x, continued by 1 at x = 0; series below the switch point to avoid
// cancellation.
inline double tanhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0 - 17.0 * x2 * x2 * x2 / 315.0;
    }
    return std::tanh(x) / x;
}

inline constexpr double default_pole_exclusion = 1e-12;

// Compactly supported weight whose transform is the optimal approximant:
//   (sgn(lambda)/4) (coth(pi z / 2i + lambda/4) - tanh(lambda/4)),
// with simple poles at 2n - lambda i / 2pi and zeros at the odd integers.
inline cplx approximant_weight(double lambda, cplx z,
                               double pole_exclusion = default_pole_exclusion) {
    if (lambda == 0.0) throw invalid_parameter("approximant_weight: lambda must be nonzero");
    const double n_star = std::nearbyint(z.real() / 2.0);
    const cplx pole(2.0 * n_star, -lambda / num::two_pi);
    if (std::abs(z - pole) < pole_exclusion)
        throw pole_proximity_error("approximant_weight: z within pole exclusion radius", pole,
                                   std::abs(z - pole));
    const double s = lambda > 0 ? 1.0 : -1.0;
    const cplx arg = cplx(0.0, -num::half_pi) * z + lambda / 4.0;
    return 0.25 * s * (coth(arg) - std::tanh(lambda / 4.0));
}

// Equivalent cosine/sine quotient form of the same weight; kept as a
// cross-check route.
inline cplx approximant_weight_quotient(double lambda, cplx z) {
    if (lambda == 0.0) throw invalid_parameter("approximant_weight_quotient: lambda must be nonzero");
    const double s = lambda > 0 ? 1.0 : -1.0;
    const cplx num_ = cos_pi_half(z);
    const cplx den = std::sin(num::half_pi * z + cplx(0.0, lambda / 4.0));
    if (std::abs(den) < 1e-300)
        throw pole_error("approximant_weight_quotient: pole", z);
    return cplx(0.0, s / (4.0 * std::cosh(lambda / 4.0))) * num_ / den;
}

// Interpolation values of the kernel at the integers: e^{-nu n} for n >= 1,
// 0 for n <= -1, 1/(e^nu + 1) at n = 0.
inline double exp_interpolant_at_integer(double nu, long long n) {
    if (n > 0) return std::exp(-nu * static_cast<double>(n));
    if (n < 0) return 0.0;
    return 1.0 / (std::exp(nu) + 1.0);
}

// Band-limited interpolant of the one-sided exponential:
//   (sin pi z / pi) sum_{n>=1} (-1)^n e^{-nu n} (1/(z-n) - 1/z).
// Integer z is returned analytically; elsewhere the series is summed until
// the geometric tail bound drops below policy.abs_tol.
inline cplx exp_interpolant(double nu, cplx z, const TruncationPolicy& policy = {}) {
    if (!(nu > 0.0)) throw invalid_parameter("exp_interpolant: nu must be positive");
    if (is_real_integer(z))
        return exp_interpolant_at_integer(nu, static_cast<long long>(std::llround(z.real())));

    const double q = std::exp(-nu);
    const cplx inv_z = 1.0 / z;
    const cplx sin_factor = sin_pi(z) / num::pi;
    const double sin_mag = std::abs(sin_factor);
    const int n_min = std::max<int>(2, static_cast<int>(std::ceil(z.real())) + 2);

    kahan_cplx acc;
    double qn = 1.0;  // e^{-nu n}
    double sign = 1.0;
    for (int n = 1; n <= policy.max_terms; ++n) {
        qn *= q;
        sign = -sign;
        acc.add(sign * qn * (1.0 / (z - static_cast<double>(n)) - inv_z));
        if (n >= n_min) {
            // Remaining terms have |z - m| >= m - Re z >= n+1 - Re z >= 1.
            const double floor_den = std::max(1.0, (n + 1.0) - z.real());
            const double bracket = qn * q / (1.0 - q) * (1.0 / floor_den + std::abs(inv_z));
            if (sin_mag * bracket < policy.abs_tol) return sin_factor * acc.value();
        }
    }
    const double floor_den = std::max(1.0, (policy.max_terms + 1.0) - z.real());
    throw truncation_failure("exp_interpolant: max_terms reached before tolerance",
                             sin_mag * qn * q / (1.0 - q) * (1.0 / floor_den + std::abs(inv_z)));
}

// Optimal two-sided approximant to the one-sided exponential, evaluated as
// the rescaled interpolant.
inline cplx best_approximant(double lambda, cplx z, const TruncationPolicy& policy = {}) {
    if (lambda == 0.0) throw invalid_parameter("best_approximant: lambda must be nonzero");
    const double s = lambda > 0 ? 1.0 : -1.0;
    return exp_interpolant(0.5 * std::abs(lambda), 2.0 * s * z, policy);
}

// Same kernel through the Lerch transcendent; cross-check and plotting route.
inline cplx exp_interpolant_lerch(double nu, cplx z) {
    if (!(nu > 0.0)) throw invalid_parameter("exp_interpolant_lerch: nu must be positive");
    if (is_real_integer(z))
        return exp_interpolant_at_integer(nu, static_cast<long long>(std::llround(z.real())));
    const double w = -std::exp(-nu);
    const cplx phi = lerch_phi_s1(w, -z);
    const cplx sin_factor = sin_pi(z) / num::pi;
    return -sin_factor * (phi + (1.0 / z) / (1.0 + std::exp(-nu)));
}

// Minimal L1 distance between the one-sided exponential and any function of
// exponential type 2 pi: tanh(lambda/4)/lambda, evaluated as tanhc(lambda/4)/4
// so the lambda -> 0 limit 1/4 comes out exactly.
inline double min_l1_error(double lambda) { return 0.25 * tanhc(0.25 * lambda); }

// Residue weight coth(delta(s-sigma)) - tanh(delta(1-sigma)); the product
// form cosh(delta(s-1)) / (cosh(delta(1-sigma)) sinh(delta(s-sigma))) is
// evaluated alongside and the two must agree.
inline cplx residue_weight(const WeightParams& params, cplx s,
                           double pole_exclusion = default_pole_exclusion) {
    const double d = params.delta();
    const cplx zs = d * (s - params.sigma);
    // Poles where sinh(delta(s-sigma)) = 0, i.e. s = sigma + i pi k / delta.
    const double k = std::nearbyint(zs.imag() / num::pi);
    const cplx pole(params.sigma, num::pi * k / d);
    if (std::abs(s - pole) < pole_exclusion)
        throw pole_proximity_error("residue_weight: s within pole exclusion radius", pole,
                                   std::abs(s - pole));
    const cplx w1 = coth(zs) - std::tanh(d * (1.0 - params.sigma));
    const cplx w2 = std::cosh(d * (s - 1.0)) /
                    (std::cosh(d * (1.0 - params.sigma)) * std::sinh(zs));
    if (std::abs(w1 - w2) > 1e-9 * (1.0 + std::abs(w1)))
        throw accuracy_error("residue_weight: difference and product forms disagree",
                             std::abs(w1 - w2), 1e-9 * (1.0 + std::abs(w1)));
    return w1;
}

// Decay/TV envelope constants for e^{-alpha u}-weighted tails of the
// approximation error. All increasing in alpha on (0, 1/2].
struct TailEnvelopeConstants {
    double kappa_alpha;
    double c0;
    double c1;
    double c2;
};

inline TailEnvelopeConstants tail_envelope_constants(double alpha) {
    if (!(alpha > 0.0)) throw invalid_parameter("tail_envelope_constants: alpha must be positive");
    const double ea = std::exp(0.5 * alpha);
    const double ema = std::exp(-0.5 * alpha);
    const double kappa = 2.0 * ea - alpha * exp_integral_ei(0.5 * alpha) + 2.525 * alpha;
    TailEnvelopeConstants out;
    out.kappa_alpha = kappa;
    out.c0 = 0.5 * ea + ema / (8.0 * num::pi) + kappa / (16.0 * num::pi);
    out.c1 = 2.0 * ea + (alpha / (8.0 * num::pi) + 3.0 / 11.0) * ema +
             (alpha / (16.0 * num::pi) + 3.0 / 22.0) * kappa;
    out.c2 = (16.0 / 11.0) * (alpha / (16.0 * num::pi) + 3.0 / 22.0);
    return out;
}

// Pointwise decay check of the approximation error against 1/(16 pi u^2) and
// of its derivative (central differences, h^2 margin folded in) against
// 3/(22 u^2). Violations are reported, never thrown.
struct DecayReport {
    bool pass = true;
    std::size_t points = 0;
    std::size_t value_violations = 0;
    std::size_t deriv_violations = 0;
    double worst_value_slack = 1e300;  // bound - |f|, minimum over grid
    double worst_deriv_slack = 1e300;
};

inline DecayReport decay_report(double lambda, const std::vector<double>& u_grid,
                                const TruncationPolicy& policy = {}) {
    if (lambda == 0.0) throw invalid_parameter("decay_report: lambda must be nonzero");
    for (double u : u_grid)
        if (!(std::abs(u) >= 0.5))
            throw invalid_parameter("decay_report: grid points must satisfy |u| >= 1/2");

    const double h = 1e-5;
    // |f'''| <= 200 on |u| >= 1/2 (the error is a sinc-times-monotone profile
    // with unit-scale oscillation); the h^2 term plus roundoff make up the
    // finite-difference margin.
    const double fd_margin = h * h * 200.0 / 6.0 + 2.0 * policy.abs_tol / h + 1e-10;
    const double val_margin = 2.0 * policy.abs_tol + 1e-13;

    auto f = [&](double u) {
        return best_approximant(lambda, u, policy).real() - truncated_exponential(lambda, u);
    };

    DecayReport rep;
    for (double u : u_grid) {
        ++rep.points;
        const double bound_v = 1.0 / (16.0 * num::pi * u * u);
        const double fv = std::abs(f(u));
        const double slack_v = bound_v + val_margin - fv;
        rep.worst_value_slack = std::min(rep.worst_value_slack, slack_v);
        if (slack_v < 0) ++rep.value_violations;

        const double bound_d = 3.0 / (22.0 * u * u);
        const double fd = std::abs((f(u + h) - f(u - h)) / (2.0 * h));
        const double slack_d = bound_d + fd_margin - fd;
        rep.worst_deriv_slack = std::min(rep.worst_deriv_slack, slack_d);
        if (slack_d < 0) ++rep.deriv_violations;
    }
    rep.pass = rep.value_violations == 0 && rep.deriv_violations == 0;
    return rep;
}

}  // namespace mertens::approx
