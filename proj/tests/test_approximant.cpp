#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mertens/approximant.hpp"
#include "oracles.hpp"

using namespace mertens;
using namespace mertens::approx;

TEST_CASE("truncated exponential") {
    CHECK(truncated_exponential(1.0, 0.0) == 1.0);
    CHECK(truncated_exponential(1.0, -1.0) == 0.0);
    // On-support value for negative rate: e^{-lambda y} = e^{-2}.
    CHECK(truncated_exponential(-2.0, -1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(truncated_exponential(-2.0, 1.0) == 0.0);
    CHECK_THROWS_AS(truncated_exponential(0.0, 1.0), invalid_parameter);
}

TEST_CASE("tanhc") {
    CHECK(tanhc(0.0) == 1.0);
    CHECK(tanhc(1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    // Even symmetry and series/direct agreement across the switch point.
    for (double x : {1e-6, 1e-5, 9.9e-5, 1.1e-4, 0.5, 3.0})
        CHECK(tanhc(-x) == tanhc(x));
    CHECK(tanhc(9.9e-5) == doctest::Approx(std::tanh(9.9e-5) / 9.9e-5).epsilon(1e-13));
}

TEST_CASE("params invariants") {
    ApproximantParams p(-3.0);
    CHECK(p.nu == 1.5);
    CHECK_THROWS_AS(ApproximantParams(0.0), invalid_parameter);
    WeightParams w(10.0, 0.0);
    CHECK(w.delta() * w.T == doctest::Approx(num::half_pi).epsilon(1e-16));
    CHECK_THROWS_AS(WeightParams(-1.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(TruncationPolicy(0.0, 10), invalid_parameter);
}

TEST_CASE("compact weight: zeros, value at 0, both forms, pole handling") {
    // Zeros at the odd integers.
    CHECK(std::abs(approximant_weight(1.0, {1.0, 0.0})) < 1e-15);
    CHECK(std::abs(approximant_weight(1.0, {-1.0, 0.0})) < 1e-15);
    // Value at z = 0: (coth(1/4) - tanh(1/4))/4 = (2/sinh(1/2))/4.
    const double ref = 0.5 / std::sinh(0.5);
    CHECK(approximant_weight(1.0, {0.0, 0.0}).real() == doctest::Approx(ref).epsilon(1e-13));
    // Difference and quotient forms agree off the poles.
    auto gen = oracles::rng();
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double lambda = ud(gen) > 0 ? 1.3 : -0.4;
        const cplx z{ud(gen), ud(gen)};
        if (std::abs(z - cplx(2.0 * std::nearbyint(z.real() / 2.0), -lambda / num::two_pi)) < 0.05)
            continue;
        const cplx a = approximant_weight(lambda, z);
        const cplx b = approximant_weight_quotient(lambda, z);
        CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(a)));
    }
    // Pole exclusion: the nearest pole is reported.
    const cplx pole(0.0, -1.0 / num::two_pi);
    CHECK_THROWS_AS(approximant_weight(1.0, pole + cplx(1e-14, 0.0)), pole_proximity_error);
    // Residue at each pole is i sgn(lambda)/(2 pi): (z - p) Phi(z) -> residue.
    for (double lambda : {0.7, -2.0}) {
        const cplx p(2.0, -lambda / num::two_pi);
        const cplx probe = p + cplx(1e-7, 1e-7);
        const cplx res = (probe - p) * approximant_weight(lambda, probe);
        const cplx expected = cplx(0.0, (lambda > 0 ? 1.0 : -1.0) / num::two_pi);
        CHECK(std::abs(res - expected) < 1e-6);
    }
}

TEST_CASE("interpolation identity at the integers and nearby") {
    TruncationPolicy pol{1e-12, 200000};
    for (double nu : {0.25, 0.5, 1.0, 2.0}) {
        for (int n = -5; n <= 5; ++n) {
            const double expected = exp_interpolant_at_integer(nu, n);
            CHECK(std::abs(exp_interpolant(nu, {double(n), 0.0}, pol).real() - expected) <= 1e-12);
            // The series path must approach the same value (the analytic
            // branch is only taken at exact integers).
            if (n != 0) {
                const cplx near = exp_interpolant(nu, {n + 1e-8, 0.0}, pol);
                CHECK(std::abs(near.real() - expected) < 1e-6);
            }
        }
        CHECK(exp_interpolant(nu, {0.0, 0.0}, pol).real() ==
              doctest::Approx(1.0 / (std::exp(nu) + 1.0)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(exp_interpolant(0.5, {0.3, 0.0}, TruncationPolicy{1e-30, 5}),
                    truncation_failure);
    CHECK_THROWS_AS(exp_interpolant(-1.0, {0.3, 0.0}), invalid_parameter);
}

TEST_CASE("kernel through the Lerch transcendent matches the series") {
    TruncationPolicy pol{1e-13, 400000};
    CHECK(exp_interpolant_lerch(0.5, {3.0, 0.0}).real() ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-13));
    CHECK(exp_interpolant_lerch(0.5, {-3.0, 0.0}).real() == 0.0);
    for (double z : {0.5, -0.7, 2.3, 7.9}) {
        const cplx a = exp_interpolant_lerch(1.0, {z, 0.0});
        const cplx b = exp_interpolant(1.0, {z, 0.0}, pol);
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("best approximant: reflection, value at 0, Fourier consistency") {
    TruncationPolicy pol{1e-12, 200000};
    CHECK(best_approximant(1.0, {0.0, 0.0}).real() ==
          doctest::Approx(1.0 / (std::exp(0.5) + 1.0)).epsilon(1e-14));
    for (double z : {-2.7, -0.3, 0.8, 4.1})
        CHECK(std::abs(best_approximant(-1.0, {z, 0.0}, pol) -
                       best_approximant(1.0, {-z, 0.0}, pol)) < 1e-12);
    // Quadrature of the weight transform reproduces the approximant.
    for (double u : {0.3, 1.7}) {
        const cplx ft = oracles::weight_transform_quadrature(0.5, u);
        const cplx direct = best_approximant(0.5, {u, 0.0}, pol);
        CHECK(std::abs(ft - direct) < 1e-8);
    }
    // And at 20 sampled real points for a second rate.
    for (int i = 0; i < 20; ++i) {
        const double u = -2.0 + 4.0 * i / 19.0;
        const cplx ft = oracles::weight_transform_quadrature(1.0, u);
        const cplx direct = best_approximant(1.0, {u, 0.0}, pol);
        CHECK(std::abs(ft - direct) < 1e-8);
    }
}

TEST_CASE("minimal L1 error") {
    CHECK(min_l1_error(1e-12) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(min_l1_error(1.0) == doctest::Approx(std::tanh(0.25)).epsilon(1e-15));
    for (double lambda : {0.1, -0.1, 1.0, -1.0, 10.0, -10.0}) CHECK(min_l1_error(lambda) < 0.25);
    // Quadrature oracle at lambda = 1 (the full grid runs in the acceptance
    // suite).
    CHECK(std::abs(oracles::l1_error_quadrature(1.0) - min_l1_error(1.0)) < 1e-6);
}

TEST_CASE("residue weight") {
    WeightParams w10(10.0, 0.0);
    // Vanishes at 1 +- iT.
    CHECK(std::abs(residue_weight(w10, {1.0, 10.0})) < 1e-12);
    CHECK(std::abs(residue_weight(w10, {1.0, -10.0})) < 1e-12);
    // Residue at s = sigma is 1/delta, via (s - sigma) w(s) along a shrinking
    // approach.
    for (double sigma : {0.0, 1.0, -0.5}) {
        WeightParams w(25.0, sigma);
        const cplx s = cplx(sigma, 0.0) + cplx(1e-7, 1e-7);
        const cplx lim = (s - sigma) * residue_weight(w, s);
        CHECK(std::abs(lim - 1.0 / w.delta()) < 1e-5 / w.delta());
    }
    // Difference and product forms agree to 1e-12 relative on 100 random
    // (delta, sigma, s) away from poles.
    auto gen = oracles::rng(7);
    std::uniform_real_distribution<double> uT(5.0, 500.0), us(-1.0, 1.5), ut(-0.9, 0.9);
    int checked = 0;
    while (checked < 100) {
        WeightParams w(uT(gen), us(gen));
        const cplx s{us(gen), ut(gen) * w.T};
        if (std::abs(s - cplx(w.sigma, 0.0)) < 1e-2) continue;
        const double d = w.delta();
        const cplx w1 = coth(d * (s - w.sigma)) - std::tanh(d * (1.0 - w.sigma));
        const cplx w2 = std::cosh(d * (s - 1.0)) /
                        (std::cosh(d * (1.0 - w.sigma)) * std::sinh(d * (s - w.sigma)));
        CHECK(std::abs(w1 - w2) <= 1e-12 * (1.0 + std::abs(w1)));
        CHECK_NOTHROW(residue_weight(w, s));
        ++checked;
    }
    // Critical-line identity |w_{delta,1}(1/2 + i gamma)| = |coth(delta s)|.
    for (double gamma : {14.134725, 100.0, 4999.0}) {
        WeightParams w(5000.0, 1.0);
        const cplx s{0.5, gamma};
        CHECK(std::abs(residue_weight(w, s)) ==
              doctest::Approx(std::abs(coth(w.delta() * s))).epsilon(1e-12));
    }
    // Real axis left of min(sigma, 1): negative, |w| increasing, bounded.
    for (double sigma : {-0.5, 0.3, 1.2}) {
        WeightParams w(40.0, sigma);
        double prev_abs = 0.0;
        const double top = std::min(sigma, 1.0);
        for (int i = 1; i <= 30; ++i) {
            const double t = top - 6.0 + 6.0 * (i - 1) / 30.0;
            const double v = residue_weight(w, {t, 0.0}).real();
            CHECK(v < 0.0);
            CHECK(std::abs(v) >= prev_abs - 1e-12);
            CHECK(std::abs(v) <= 1.0 / (w.delta() * (sigma - t)) + 2.0 + 1e-12);
            prev_abs = std::abs(v);
        }
    }
    CHECK_THROWS_AS(residue_weight(w10, {0.0, 0.0}), pole_proximity_error);
}

TEST_CASE("tail envelope constants") {
    const auto c_half = tail_envelope_constants(0.5);
    CHECK(c_half.c0 < 16.0 / 21.0);
    CHECK(c_half.c1 < 17.0 / 5.0);
    CHECK(c_half.c2 < 2.0 / 9.0);
    const auto c_sixth = tail_envelope_constants(1.0 / 6.0);
    CHECK(c_sixth.c0 <= 2.0 / 3.0);
    CHECK(c_sixth.c1 <= 2.85);
    // Monotone in alpha on (0, 1/2].
    const auto a = tail_envelope_constants(0.1);
    const auto b = tail_envelope_constants(0.5);
    CHECK(a.c0 <= b.c0);
    CHECK(a.c1 <= b.c1);
    CHECK(a.c2 <= b.c2);
    // Ei series against a quadrature route: Ei(x) = gamma + ln x + int_0^x (e^t-1)/t dt.
    for (double x : {0.25, 0.08333333333333333, 2.0}) {
        const double quad =
            integrate_adaptive([](double t) { return t == 0 ? 1.0 : std::expm1(t) / t; }, 0.0, x,
                               1e-12)
                .value;
        CHECK(exp_integral_ei(x) ==
              doctest::Approx(num::euler_gamma + std::log(x) + quad).epsilon(1e-11));
    }
    CHECK_THROWS_AS(tail_envelope_constants(0.0), invalid_parameter);
}

TEST_CASE("decay report") {
    // (F - I)(+-1/2) = 0.
    TruncationPolicy pol{1e-13, 400000};
    for (double u : {0.5, -0.5}) {
        const double f = best_approximant(1.0, {u, 0.0}, pol).real() -
                         truncated_exponential(1.0, u);
        CHECK(std::abs(f) < 1e-12);
    }
    // Bound instance at u = 2.
    {
        const double f = best_approximant(1.0, {2.0, 0.0}, pol).real() -
                         truncated_exponential(1.0, 2.0);
        CHECK(std::abs(f) <= 1.0 / (64.0 * num::pi) + 1e-12);
    }
    // Modest grid here; the 2000-point sweep runs in the acceptance suite.
    std::vector<double> grid;
    for (int i = 0; i < 120; ++i) grid.push_back(0.5 + 10.0 * i / 119.0);
    for (int i = 0; i < 60; ++i) grid.push_back(-(0.5 + 8.0 * i / 59.0));
    for (double lambda : {1.0, -1.0}) {
        const auto rep = decay_report(lambda, grid);
        CHECK(rep.pass);
        CHECK(rep.worst_value_slack >= 0.0);
        CHECK(rep.worst_deriv_slack >= 0.0);
    }
    // Jump at zero equals -sgn(lambda).
    for (double lambda : {1.0, -3.0}) {
        auto f = [&](double u) {
            return best_approximant(lambda, {u, 0.0}, pol).real() -
                   truncated_exponential(lambda, u);
        };
        const double jump = f(1e-9) - f(-1e-9);
        CHECK(jump == doctest::Approx(lambda > 0 ? -1.0 : 1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(decay_report(1.0, {0.4}), invalid_parameter);
}
