#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mertens/approximant.hpp"
#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/quadrature.hpp"
#include "mertens/zeros.hpp"
#include "mertens/zeta.hpp"

namespace mertens::ef {

using approx::WeightParams;
using zeta::ZeroTable;

// Residue sum delta * sum_{rho in Z*(T)} w_{delta,sigma}(rho)/zeta'(rho) x^{rho-sigma}.
// The table stores gamma > 0 only; each stored zero contributes 2 Re(term)
// (conjugate pairing), summed in increasing gamma with compensation, so the
// result is real by construction and bit-stable across runs.
inline cplx zero_sum(double x, double sigma, const WeightParams& params, const ZeroTable& table) {
    if (!(x > 1.0)) throw invalid_parameter("zero_sum: requires x > 1");
    if (!table.complete || table.height_T + 1e-9 < params.T)
        throw invalid_parameter("zero_sum: table must be complete up to params.T");
    if (!table.has_residues && !table.zeros.empty())
        throw invalid_parameter("zero_sum: residues missing from table");

    const double d = params.delta();
    const long double lnx_l = std::log(static_cast<long double>(x));
    const long double twopi_l = 6.283185307179586476925286766559005768L;
    const double amp = std::pow(x, 0.5 - sigma);

    kahan acc;
    for (const auto& z : table.zeros) {
        if (z.gamma > params.T) break;
        const cplx rho(0.5, z.gamma);
        // w has poles only at sigma + 2nTi, |Im| >= 2T; table zeros stay below T.
        const cplx w = approx::residue_weight(params, rho);
        const long double phase = std::fmod(static_cast<long double>(z.gamma) * lnx_l, twopi_l);
        const cplx xr = amp * cplx(static_cast<double>(std::cos(phase)),
                                   static_cast<double>(std::sin(phase)));
        acc.add(2.0 * (w * z.inv_zeta_prime * xr).real());
    }
    return {d * acc.value(), 0.0};
}

// One-sided constant delta * sum_{gamma>0} |coth(delta rho)| / |zeta'(rho)|;
// increasing in the table prefix since every term is positive.
inline double zero_sum_bound_constant(const WeightParams& params, const ZeroTable& table) {
    if (!table.has_residues && !table.zeros.empty())
        throw invalid_parameter("zero_sum_bound_constant: residues missing");
    const double d = params.delta();
    kahan acc;
    for (const auto& z : table.zeros)
        acc.add(std::abs(coth(d * cplx(0.5, z.gamma))) * std::abs(z.inv_zeta_prime));
    return d * acc.value();
}

// Running prefix values of the same constant, one entry per table zero.
inline std::vector<double> zero_sum_bound_constant_prefixes(const WeightParams& params,
                                                            const ZeroTable& table) {
    if (!table.has_residues && !table.zeros.empty())
        throw invalid_parameter("zero_sum_bound_constant_prefixes: residues missing");
    const double d = params.delta();
    std::vector<double> out;
    out.reserve(table.zeros.size());
    kahan acc;
    for (const auto& z : table.zeros) {
        acc.add(std::abs(coth(d * cplx(0.5, z.gamma))) * std::abs(z.inv_zeta_prime));
        out.push_back(d * acc.value());
    }
    return out;
}

struct TrivialZeroTerm {
    double value = 0.0;
    double bound = 0.0;
};

// Contribution of the trivial zeros, delta * sum_n w(-2n) x^{-2n-1} / zeta'(-2n):
// an alternating sum with rapidly decreasing terms, against the closed-form cap
// (1/(2+sigma) + 2 delta) (2 pi)^2 / zeta(3) x^{-3}.
inline TrivialZeroTerm trivial_zero_term(double x, double sigma, const WeightParams& params,
                                         int n_max = 30) {
    if (!(x >= 2.0)) throw invalid_parameter("trivial_zero_term: requires x >= 2");
    if (!(sigma > -2.0)) throw invalid_parameter("trivial_zero_term: requires sigma > -2");
    const double d = params.delta();
    kahan acc;
    for (int n = 1; n <= std::min(n_max, 80); ++n) {
        const double xpow = std::pow(x, -(2.0 * n + 1.0));
        if (xpow == 0.0) break;
        const cplx w = approx::residue_weight(params, cplx(-2.0 * n, 0.0));
        acc.add(w.real() * xpow * zeta::inv_zeta_prime_at_trivial(n));
    }
    TrivialZeroTerm out;
    out.value = d * acc.value();
    out.bound = (1.0 / (2.0 + sigma) + 2.0 * d) * num::two_pi * num::two_pi / num::zeta3 *
                std::pow(x, -3.0);
    return out;
}

struct ErrorBudget {
    double a_inf = 0.0;
    double L = 0.0;
    double I = 0.0;
    double iota_bound = 0.0;
    double eps_total = 0.0;
};

enum class Variant { generic, squarefree };

struct VariantSpec {
    Variant kind = Variant::generic;
    double c = 0.0;  // square-free remainder constant, used by Variant::squarefree

    static VariantSpec generic() { return {Variant::generic, 0.0}; }
    static VariantSpec squarefree(double c) { return {Variant::squarefree, c}; }
};

// Assembled error ledger. I is consumed through the bound
// zeta_line_max / (log x)^2, never through quadrature.
inline ErrorBudget error_budget(double x, const WeightParams& params, double a_inf,
                                double zeta_line_max, const VariantSpec& variant) {
    const double T = params.T;
    ErrorBudget b;
    b.a_inf = a_inf;
    b.iota_bound = params.delta() * approx::tanhc((params.sigma - 1.0) * params.delta());
    b.I = zeta_line_max / (std::log(x) * std::log(x));
    if (variant.kind == Variant::generic) {
        if (!(x > num::e * num::e * T))
            throw invalid_parameter("error_budget: requires x > e^2 T");
        b.L = std::log(x / T);
        b.eps_total = num::pi / 4.0 * (1.0 / b.L + 1.0 / (b.L * b.L) + b.I) / (T * T) +
                      2.0 * a_inf / x;
    } else {
        const double c = variant.c;
        if (!(c > 0.0)) throw invalid_parameter("error_budget: square-free variant needs c > 0");
        if (!(x >= std::pow(num::e * c * T, 2.0)))
            throw invalid_parameter("error_budget: requires x >= (e c T)^2");
        b.L = std::log(x / ((c * T) * (c * T)));
        b.eps_total = num::pi / 4.0 * (1.0 / b.L + 4.0 / (b.L * b.L) + b.I) / (T * T) +
                      2.9 * c * a_inf / std::sqrt(x);
    }
    return b;
}

struct FormulaEvaluation {
    cplx zero_sum{};
    double trivial_term = 0.0;
    double sigma_term = 0.0;  // 1/zeta(sigma); 0 at sigma = 1 by convention
    double envelope = 0.0;
};

// Predicted truncated-formula value and its envelope:
//   generic      |sum mu(n)/n^sigma - (zero_sum + 1/zeta(sigma))|
//                   <= (pi/2)/(T-1) x^{1-sigma} + 2/x^sigma,
//   square-free  <= (3/pi)/(T-1) x^{1-sigma} + 2.9 c x^{1/2-sigma}.
inline FormulaEvaluation evaluate_formula(double x, double sigma, const WeightParams& params_in,
                                          const ZeroTable& table, const VariantSpec& variant,
                                          double zeta_line_max) {
    WeightParams params(params_in.T, sigma);
    const double T = params.T;
    const double log2x = std::log(x) * std::log(x);

    if (variant.kind == Variant::generic) {
        if (!(T >= 4.0 * num::pi)) throw invalid_parameter("evaluate_formula: requires T >= 4 pi");
        if (!(sigma >= -1.0)) throw invalid_parameter("evaluate_formula: requires sigma >= -1");
        if (!(x >= num::e * num::e * T))
            throw invalid_parameter("evaluate_formula: requires x >= e^2 T");
        if (!(zeta_line_max <= log2x))
            throw hypothesis_violation("evaluate_formula: max 1/|zeta| on line exceeds log^2 x",
                                       zeta_line_max, log2x);
    } else {
        const double c = variant.c;
        if (!(T >= 50.0)) throw invalid_parameter("evaluate_formula: requires T >= 50");
        const double x_min = std::max(std::exp(3.0) * (c * T) * (c * T), 4.0 * T);
        if (!(x >= x_min))
            throw invalid_parameter("evaluate_formula: requires x >= max(e^3 (cT)^2, 4T)");
        if (!(zeta_line_max <= log2x / 3.0))
            throw hypothesis_violation("evaluate_formula: max 1/|zeta| exceeds (log^2 x)/3",
                                       zeta_line_max, log2x / 3.0);
    }

    FormulaEvaluation ev;
    ev.zero_sum = zero_sum(x, sigma, params, table);
    ev.trivial_term = trivial_zero_term(std::max(2.0, x), sigma, params).value;
    if (sigma == 1.0)
        ev.sigma_term = 0.0;
    else
        ev.sigma_term = 1.0 / zeta::zeta(cplx(sigma, 0.0)).real();
    if (variant.kind == Variant::generic)
        ev.envelope = num::half_pi / (T - 1.0) * std::pow(x, 1.0 - sigma) +
                      2.0 * std::pow(x, -sigma);
    else
        ev.envelope = (3.0 / num::pi) / (T - 1.0) * std::pow(x, 1.0 - sigma) +
                      2.9 * variant.c * std::pow(x, 0.5 - sigma);
    return ev;
}

struct CleanTriple {
    double T;
    double C;
    double lead;
};

inline double clean_bound(double x, const CleanTriple& t) {
    return t.lead * x + t.C * std::sqrt(x);
}

// Published triples.
inline CleanTriple clean_triple_1e10() { return {1e10 + 1.0, 11.350514, num::half_pi / 1e10}; }
inline CleanTriple clean_triple_1e9() { return {1e9, 9.758736, num::half_pi / (1e9 - 1.0)}; }
inline CleanTriple clean_triple_1e7() { return {1e7 + 1.0, 6.738093, num::half_pi / 1e7}; }

// Headline Mertens bound 3/(pi 1e10) x + 11.39 sqrt(x), assembled piecewise:
// a brute-force sqrt(x) bound certifies it below 1e16, the 1e9 clean triple up
// to the 3.61e17 crossover, and the square-free-improved constant above.
struct CleanBoundPiece {
    double bound;
    std::string certified_by;
};

inline CleanBoundPiece mertens_clean_bound(double x) {
    if (!(x >= 1.0)) throw invalid_parameter("mertens_clean_bound: requires x >= 1");
    CleanBoundPiece out;
    out.bound = 3.0 / (num::pi * 1e10) * x + 11.39 * std::sqrt(x);
    if (x <= 1e16)
        out.certified_by = "direct sqrt(x) bound";
    else if (x < 3.61e17)
        out.certified_by = "T=1e9 clean triple";
    else
        out.certified_by = "square-free improved constant";
    return out;
}

// Diagnostic quadrature of I = 1/2 sum_{xi=+-1} int_0^inf t |1/zeta(1-t+i xi T)| x^{-t} dt,
// adaptive on [0, U] with U = 40/log x + 1 and the tail bounded through the
// left-half-plane estimate. Comparison only; certificates use the
// zeta_line_max / log^2 x route.
inline double tail_integral_diagnostic(double x, double T, const zeta::EvalAccuracy& acc_in = {}) {
    if (!(x > 1.0) || !(T > 1.0)) throw invalid_parameter("tail_integral_diagnostic: x, T > 1");
    // The integrand reaches several units left of the critical strip, where
    // the double-precision evaluation floor sits near 1e-7; a loose target is
    // fine for a comparison-only quantity.
    zeta::EvalAccuracy acc = acc_in;
    acc.target_abs_err = std::max(acc.target_abs_err, 1e-6);
    const double lnx = std::log(x);
    const double U = std::max(40.0 / lnx + 1.0, 2.0);
    double total = 0.0;
    for (double xi : {1.0, -1.0}) {
        auto f = [&](double t) {
            const cplx s(1.0 - t, xi * T);
            return t * std::pow(x, -t) / std::abs(zeta::zeta(s, acc));
        };
        total += integrate_adaptive(f, 0.0, U, 1e-10).value;
    }
    // Tail: for t >= U >= 2, 1/|zeta(1-t+-iT)| <= (2 pi e/T)^{t-1/2} sqrt(e) zeta(2)/zeta(4).
    const double beta = lnx + std::log(T / (num::two_pi * num::e));
    if (beta > 0.0) {
        const double zeta4 = num::pi * num::pi * num::pi * num::pi / 90.0;
        const double A = std::sqrt(num::e) * (num::zeta2 / zeta4) *
                         std::pow(num::two_pi * num::e / T, -0.5);
        total += 2.0 * A * (U / beta + 1.0 / (beta * beta)) * std::exp(-beta * U);
    }
    return 0.5 * total;
}

}  // namespace mertens::ef
