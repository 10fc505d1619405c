#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"

namespace mertens {

// Gauss-Kronrod 7-15 pair on [-1, 1].
namespace gk {

inline constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

}  // namespace gk

struct quad_result {
    double value = 0.0;
    double err_est = 0.0;
    int panels = 0;
};

namespace detail {

template <typename F>
inline void gk15(const F& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double resk = gk::wk[7] * f(c);
    double resg = gk::wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        double x = h * gk::xk[i];
        double fsum = f(c - x) + f(c + x);
        resk += gk::wk[i] * fsum;
        if (i % 2 == 1) resg += gk::wg[i / 2] * fsum;
    }
    val = resk * h;
    err = std::abs(resk - resg) * h;
}

}  // namespace detail

// Adaptive bisection with a GK15 core. Error target is absolute.
template <typename F>
inline quad_result integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                      int max_panels = 20000) {
    struct seg {
        double a, b, val, err;
    };
    double v, e;
    detail::gk15(f, a, b, v, e);
    std::vector<seg> heap{{a, b, v, e}};
    int panels = 1;
    auto total_err = [&] {
        double s = 0;
        for (auto& s0 : heap) s += s0.err;
        return s;
    };
    while (total_err() > abs_tol) {
        if (panels >= max_panels)
            throw accuracy_error("integrate_adaptive: panel cap reached", total_err(), abs_tol);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].err > heap[worst].err) worst = i;
        seg s0 = heap[worst];
        double m = 0.5 * (s0.a + s0.b);
        seg l{s0.a, m, 0, 0}, r{m, s0.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err);
        detail::gk15(f, r.a, r.b, r.val, r.err);
        heap[worst] = l;
        heap.push_back(r);
        ++panels;
    }
    quad_result out;
    kahan acc;
    for (auto& s0 : heap) acc.add(s0.val);
    out.value = acc.value();
    out.err_est = total_err();
    out.panels = panels;
    return out;
}

// Complex-valued integrand: integrate real and imaginary parts together.
template <typename F>
inline cplx integrate_adaptive_cplx(const F& f, double a, double b, double abs_tol,
                                    int max_panels = 20000) {
    auto re = integrate_adaptive([&](double t) { return f(t).real(); }, a, b, abs_tol, max_panels);
    auto im = integrate_adaptive([&](double t) { return f(t).imag(); }, a, b, abs_tol, max_panels);
    return {re.value, im.value};
}

// Composite integration with prescribed interior breakpoints (used when the
// integrand is smooth per panel but not across panel boundaries).
template <typename F>
inline double integrate_panels(const F& f, const std::vector<double>& breaks, double abs_tol_per_panel) {
    kahan acc;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        acc.add(integrate_adaptive(f, breaks[i], breaks[i + 1], abs_tol_per_panel).value);
    return acc.value();
}

}  // namespace mertens
