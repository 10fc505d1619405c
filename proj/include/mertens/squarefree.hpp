#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"
#include "mertens/sieve.hpp"

namespace mertens::sqf {

// Inputs for the |M| -> |R| bound pipelines. c3 is always computed.
struct BoundHypothesis {
    double epsilon = 0.0;      // |M(v)| <= epsilon v + kappa sqrt(v)
    double kappa = 0.0;
    double kappa_minus = 0.0;  // mid-range |M(v)| <= kappa_minus sqrt(v) on [v0, v1]
    double v0 = 0.0;
    double v1 = 0.0;
    double c1 = 0.0;           // short-interval pair
    double c2 = 0.0;

    double c3() const { return 0.5 * (0.5 / num::zeta2 - 0.25 * c1); }
};

struct CertTerm {
    int exp_num;
    int exp_den;
    double coeff;
};

struct BoundCertificate {
    std::vector<CertTerm> terms;  // exponents strictly decreasing, coefficients >= 0
    double valid_from = 0.0;
    double valid_to = 0.0;

    double evaluate(double x) const {
        if (!(x > valid_from) || !(x <= valid_to))
            throw invalid_parameter("BoundCertificate: x outside validity range");
        double s = 0.0;
        for (const auto& t : terms)
            s += t.coeff * std::pow(x, static_cast<double>(t.exp_num) / t.exp_den);
        return s;
    }
};

inline const std::array<int, 6> supported_q = {2, 3, 5, 7, 11, 13};

struct ShortIntervalConstants {
    int q = 0;
    std::int64_t c1_num = 0, c1_den = 0;        // reduced
    std::int64_t c2_num = 0, c2_den = 0;        // optimal c2* = sup - inf, reduced
    std::int64_t period = 0;                    // prod p^2
    std::int64_t max_dev_num = 0;               // max_n (R Q_q(n) - A n), diagnostic
};

// Published short-interval pairs, for comparison.
inline ShortIntervalConstants published_pair(int q) {
    ShortIntervalConstants p;
    p.q = q;
    switch (q) {
        case 2: p.c1_num = 3; p.c1_den = 4; p.c2_num = 3; p.c2_den = 2; break;
        case 3: p.c1_num = 2; p.c1_den = 3; p.c2_num = 8; p.c2_den = 3; break;
        case 5: p.c1_num = 16; p.c1_den = 25; p.c2_num = 114; p.c2_den = 25; break;
        case 7: p.c1_num = 768; p.c1_den = 1225; p.c2_num = 9458; p.c2_den = 1225; break;
        case 11: p.c1_num = 18432; p.c1_den = 29645; p.c2_num = 361192; p.c2_den = 29645; break;
        case 13: p.c1_num = 442368; p.c1_den = 715715; p.c2_num = 14328304; p.c2_den = 715715; break;
        default: throw invalid_parameter("published_pair: q must be in {2,3,5,7,11,13}");
    }
    return p;
}

// Exact short-interval constants for the q-smooth square-free counter
// Q_q(t): c1 = prod_{p<=q} (1 - 1/p^2) and the optimal
// c2* = sup_t d(t) - inf_t d(t) for d(t) = Q_q(t) - c1 t over one period
// R = prod p^2, evaluated at all integers and left limits. Streaming scan,
// O(1) memory, exact 64-bit arithmetic.
inline ShortIntervalConstants short_interval_constants(int q) {
    if (std::find(supported_q.begin(), supported_q.end(), q) == supported_q.end())
        throw invalid_parameter("short_interval_constants: q must be a prime <= 13");
    std::vector<std::int64_t> p2;
    for (int p : {2, 3, 5, 7, 11, 13})
        if (p <= q) p2.push_back(static_cast<std::int64_t>(p) * p);

    std::int64_t R = 1, A = 1;
    for (auto v : p2) {
        R *= v;
        A *= v - 1;
    }

    // d(n) scaled by R: F(n) = R Q_q(n) - A n. The sup of d over the reals is
    // max F(n)/R (attained just after a jump), the inf is (min F(n) - A)/R
    // (left limit before the next integer).
    std::vector<std::int64_t> cnt(p2.size(), 0);  // n mod p^2
    std::int64_t Qq = 0;
    std::int64_t maxF = 0, minF = 0;  // F(0) = 0
    for (std::int64_t n = 1; n < R; ++n) {
        bool sqfree = true;
        for (std::size_t i = 0; i < p2.size(); ++i) {
            if (++cnt[i] == p2[i]) cnt[i] = 0;
            if (cnt[i] == 0) sqfree = false;
        }
        Qq += sqfree;
        const std::int64_t F = R * Qq - A * n;
        maxF = std::max(maxF, F);
        minF = std::min(minF, F);
    }

    ShortIntervalConstants out;
    out.q = q;
    out.period = R;
    out.max_dev_num = maxF;
    const std::int64_t g1 = std::gcd(A, R);
    out.c1_num = A / g1;
    out.c1_den = R / g1;
    const std::int64_t c2n = maxF - minF + A;
    const std::int64_t g2 = std::gcd(c2n, R);
    out.c2_num = c2n / g2;
    out.c2_den = R / g2;
    return out;
}

// Q_q(t) pointwise by inclusion-exclusion over square divisors of the
// q-smooth radical (at most 2^6 terms).
inline std::int64_t q_smooth_squarefree_count(double t, int q) {
    if (t < 0) return 0;
    std::vector<std::int64_t> ps;
    for (int p : {2, 3, 5, 7, 11, 13})
        if (p <= q) ps.push_back(p);
    const auto nfloor = static_cast<std::int64_t>(std::floor(t));
    std::int64_t total = 0;
    const std::size_t subsets = std::size_t{1} << ps.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::int64_t d = 1;
        int bits = 0;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (mask & (std::size_t{1} << i)) {
                d *= ps[i];
                ++bits;
            }
        const std::int64_t term = nfloor / (d * d);
        total += (bits % 2 == 0) ? term : -term;
    }
    return total;
}

// Exact M -> R decomposition check: for integers K' >= K >= 0,
//   R(x) = head_sum - head_integral + O*(error_cap),
// where head_sum = sum_{k<=K} M(sqrt(x/k)), head_integral is the exact
// step-function integral over [0, K+1/2], and the cap is assembled from
// (c1, c2, Q(sqrt(x/(K'+1/2)))). The x/zeta(2) pieces of R and the integral
// cancel exactly, so the verified inequality is pure integer/step arithmetic.
struct DecompositionResult {
    double R_exact = 0.0;
    double head_sum = 0.0;
    double head_integral = 0.0;
    double error_cap = 0.0;
    double lhs = 0.0;  // |R - head_sum + head_integral|
    bool holds = false;
};

inline DecompositionResult remainder_decomposition(std::uint64_t x, std::int64_t K,
                                                   std::int64_t Kp, const BoundHypothesis& hyp) {
    if (!(Kp >= K && K >= 0)) throw invalid_parameter("remainder_decomposition: K' >= K >= 0");
    const std::uint64_t m_need = isqrt_u64(2 * x) + 2;
    const auto mu = sieve::mu_table(m_need);
    const auto M = sieve::mertens_prefix(mu);
    auto M_at = [&](double v) -> std::int64_t {
        if (v < 1.0) return 0;
        const auto iv = static_cast<std::uint64_t>(std::floor(v));
        if (iv >= M.size()) throw oracle_range_error("remainder_decomposition: M oracle range");
        return M[iv];
    };

    const auto Qx = static_cast<std::int64_t>(sieve::squarefree_count_point(x, mu));

    // head_sum = sum_{k<=K} M(sqrt(x/k)); terms with k > x vanish.
    std::int64_t head = 0;
    for (std::int64_t k = 1; k <= K; ++k) {
        if (static_cast<std::uint64_t>(k) > x) break;
        head += M_at(std::sqrt(static_cast<double>(x) / static_cast<double>(k)));
    }

    // steps = int_{K+1/2}^{x} M(sqrt(x/u)) du, exact: the integrand equals
    // M(m) on u in (x/(m+1)^2, x/m^2].
    const double xlo = static_cast<double>(K) + 0.5;
    double steps = 0.0;
    if (xlo < static_cast<double>(x)) {
        const auto m_hi = static_cast<std::int64_t>(
            std::floor(std::sqrt(static_cast<double>(x) / xlo)));
        kahan acc;
        for (std::int64_t m = 1; m <= m_hi; ++m) {
            const double u_hi = std::min(static_cast<double>(x),
                                         static_cast<double>(x) / (static_cast<double>(m) * m));
            const double u_lo =
                std::max(xlo, static_cast<double>(x) /
                                  (static_cast<double>(m + 1) * static_cast<double>(m + 1)));
            if (u_hi > u_lo) acc.add(static_cast<double>(M[m]) * (u_hi - u_lo));
        }
        steps = acc.value();
    }

    const double Q_small = static_cast<double>(sieve::squarefree_count_point(
        static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x) / (Kp + 0.5))), mu));
    const double cap = hyp.c1 * std::sqrt(static_cast<double>(x)) / 4.0 *
                           (1.0 / std::sqrt(K + 0.5) - 1.0 / std::sqrt(Kp + 0.5)) +
                       hyp.c2 * static_cast<double>(Kp - K) + 0.5 * Q_small;

    DecompositionResult res;
    res.R_exact = static_cast<double>(Qx) - static_cast<double>(x) * num::inv_zeta2;
    res.head_sum = static_cast<double>(head);
    res.head_integral = static_cast<double>(x) * num::inv_zeta2 - steps;
    res.error_cap = cap;
    // R - head + integral = Q - head - steps: the irrational parts cancel.
    res.lhs = std::abs(static_cast<double>(Qx - head) - steps);
    res.holds = res.lhs <= cap + 1e-6;
    return res;
}

namespace detail {
inline void check_domain(bool ok, const std::string& ineq) {
    if (!ok) throw invalid_parameter("r_bound: domain violation: " + ineq);
}
}  // namespace detail

enum class LinearBranch { a, b };

// |R(x)| certificate from |M(v)| <= epsilon v + kappa sqrt(v) plus a
// short-interval pair. Branch (a) is the moderate-x form led by x^{3/5};
// branch (b) the very-large-x form led by x^{1/2}.
inline BoundCertificate r_bound_linear_hyp(const BoundHypothesis& hyp, double x,
                                           LinearBranch branch) {
    const double c1 = hyp.c1, c2 = hyp.c2, c3 = hyp.c3();
    const double eps = hyp.epsilon, kap = hyp.kappa;
    detail::check_domain(c1 > 0 && c1 <= 1 && c2 > 0, "0 < c1 <= 1, c2 > 0");
    BoundCertificate cert;
    cert.valid_to = 1e300;
    const double mid13 = 3.0 * std::cbrt(c2) * std::pow(c3, 2.0 / 3.0);
    const double low16 = 0.5 * std::pow(c2 / c3, 1.0 / 6.0);
    if (branch == LinearBranch::a) {
        detail::check_domain(kap > 0, "kappa > 0");
        const double q = 16.0 * kap / c1;
        const double x_min = std::max(64e5 * std::pow(kap / c1, 4.0),
                                      std::pow(c2 / c3, 5.0) / std::pow(q, 6.0));
        detail::check_domain(x > x_min, "x > max(64e5 (kappa/c1)^4, (c2/c3)^5/(16 kappa/c1)^6)");
        cert.valid_from = x_min;
        cert.terms.push_back({3, 5, 4.0 * eps / std::pow(q, 0.4)});
        cert.terms.push_back({2, 5, 5.0 * std::pow(c1, 0.6) / 3.0 * std::pow(kap / 2.0, 0.4)});
        cert.terms.push_back({1, 3, mid13});
        const double omit_min = std::max(4.25e12 * std::pow(kap / c1, 4.0),
                                         std::pow(c2 / c3, 5.0) / std::pow(q, 6.0));
        if (!(x > omit_min)) cert.terms.push_back({1, 4, 5.0 * kap / 7.0});
        cert.terms.push_back({1, 6, low16});
    } else {
        detail::check_domain(eps > 0 && eps < c1 / 584.0, "0 < epsilon < c1/584");
        const double x_min = std::pow(c2 / c3, 2.0) * std::pow(c1 / (16.0 * eps), 3.0);
        detail::check_domain(x >= x_min, "x >= (c2/c3)^2 (c1/(16 epsilon))^3");
        cert.valid_from = x_min * (1.0 - 1e-12);
        cert.terms.push_back({1, 2, 2.0 * std::sqrt(eps * c1)});
        cert.terms.push_back({1, 3, mid13});
        cert.terms.push_back({1, 4, kap / 3.0 * std::pow(c1 / eps, 0.75)});
        cert.terms.push_back({1, 6, low16});
    }
    return cert;
}

// |R(x)| certificate when additionally |M(v)| <= kappa_minus sqrt(v) on the
// mid-range [v0, v1]; valid up to x = v1^2.
inline BoundCertificate r_bound_midrange_hyp(const BoundHypothesis& hyp, double x) {
    const double c1 = hyp.c1, c2 = hyp.c2, c3 = hyp.c3();
    const double km = hyp.kappa_minus;
    detail::check_domain(c1 > 0 && c1 <= 1 && c2 > 0, "0 < c1 <= 1, c2 > 0");
    detail::check_domain(km > 0, "kappa_minus > 0");
    detail::check_domain(hyp.v1 > hyp.v0 && hyp.v0 > 0, "v1 > v0 > 0");
    const double q = 16.0 * km / c1;
    const double x_min =
        std::max(std::max(64e5 * std::pow(km / c1, 4.0), std::pow(c2 / c3, 5.0) / std::pow(q, 6.0)),
                 std::max(std::pow(2.0 * hyp.v0 * hyp.v0, 1.25) / q, 2.0 * hyp.v0 * hyp.v0));
    detail::check_domain(x > x_min,
                         "x > max(64e5 (km/c1)^4, (c2/c3)^5/(16 km/c1)^6, (2 v0^2)^{5/4}/(16 km/c1), 2 v0^2)");
    detail::check_domain(x <= hyp.v1 * hyp.v1, "x <= v1^2");
    BoundCertificate cert;
    cert.valid_from = x_min;
    cert.valid_to = hyp.v1 * hyp.v1;
    cert.terms.push_back({1, 2, 2.0 * hyp.epsilon});
    cert.terms.push_back({2, 5, 5.0 * std::pow(c1, 0.6) / 3.0 * std::pow(km / 2.0, 0.4)});
    cert.terms.push_back({1, 3, 3.0 * std::cbrt(c2) * std::pow(c3, 2.0 / 3.0)});
    cert.terms.push_back({1, 4, 4.0 * hyp.kappa / 3.0});
    cert.terms.push_back({1, 6, 0.5 * std::pow(c2 / c3, 1.0 / 6.0)});
    return cert;
}

// Cap on |sum_{k<=K} F(sqrt(x/k))| + |int_0^{K+1/2} F(sqrt(x/u)) du| for
// |F(v)| <= epsilon v + kappa sqrt(v); the 5/7 term drops once K >= 37.
inline double block_sum_cap(double epsilon, double kappa, double x, std::int64_t K) {
    if (K < 3) throw invalid_parameter("block_sum_cap: requires K >= 3");
    const double km = static_cast<double>(K) - 0.5;
    double cap = 4.0 * std::sqrt(km) * epsilon * std::sqrt(x) +
                 (8.0 / 3.0 * std::pow(km, 0.75)) * kappa * std::pow(x, 0.25);
    if (K < 37) cap += 5.0 / 7.0 * kappa * std::pow(x, 0.25);
    return cap;
}

// Exact checks of the two partial-sum inequalities behind block_sum_cap:
//   2 sqrt(N+1/2) + sum_{n<=N} n^{-1/2} <= 4 sqrt(N-1/2)            (N >= 2)
//   (4/3)(N+1/2)^{3/4} + sum_{n<=N} n^{-1/4}
//        <= (8/3)(N-1/2)^{3/4} + 5/7                                 (N >= 3)
// and the second without 5/7 for N >= 37.
struct PowerSumCheck {
    std::int64_t N;
    bool sqrt_ok;            // N >= 2 form
    bool qtr_with_ok;        // N >= 3 form with 5/7
    bool qtr_without_ok;     // N >= 37 form without 5/7
};

inline std::vector<PowerSumCheck> power_sum_inequalities(std::int64_t n_lo, std::int64_t n_hi) {
    if (n_lo < 2) throw invalid_parameter("power_sum_inequalities: N >= 2 required");
    std::vector<PowerSumCheck> out;
    kahan s_half, s_qtr;
    for (std::int64_t n = 1; n <= n_hi; ++n) {
        s_half.add(1.0 / std::sqrt(static_cast<double>(n)));
        s_qtr.add(1.0 / std::pow(static_cast<double>(n), 0.25));
        if (n < n_lo) continue;
        PowerSumCheck c{};
        c.N = n;
        const double np = static_cast<double>(n) + 0.5, nm = static_cast<double>(n) - 0.5;
        c.sqrt_ok = 2.0 * std::sqrt(np) + s_half.value() <= 4.0 * std::sqrt(nm) + 1e-12;
        c.qtr_with_ok = n >= 3 && (4.0 / 3.0 * std::pow(np, 0.75) + s_qtr.value() <=
                                   8.0 / 3.0 * std::pow(nm, 0.75) + 5.0 / 7.0 + 1e-12);
        c.qtr_without_ok = n >= 37 && (4.0 / 3.0 * std::pow(np, 0.75) + s_qtr.value() <=
                                       8.0 / 3.0 * std::pow(nm, 0.75) + 1e-12);
        out.push_back(c);
    }
    return out;
}

// Published hypothesis presets for the bound pipelines.
inline BoundHypothesis preset_nopgik() {
    BoundHypothesis h;
    h.kappa_minus = 0.570591;
    h.v0 = 33.0;
    h.v1 = 1e16;
    h.epsilon = num::half_pi / 1e7;
    h.kappa = 6.738093;
    h.c1 = 16.0 / 25.0;
    h.c2 = 114.0 / 25.0;
    return h;
}

inline BoundHypothesis preset_gopnik() {
    BoundHypothesis h;
    h.epsilon = num::half_pi / 1e10;
    h.kappa = 11.350514;
    h.c1 = 768.0 / 1225.0;
    h.c2 = 9458.0 / 1225.0;
    return h;
}

inline BoundHypothesis preset_coda() {
    BoundHypothesis h;
    h.epsilon = 3.0 / (num::pi * 1e10);
    h.kappa = 11.39;
    h.c1 = 442368.0 / 715715.0;
    h.c2 = 14328304.0 / 715715.0;
    return h;
}

}  // namespace mertens::sqf
