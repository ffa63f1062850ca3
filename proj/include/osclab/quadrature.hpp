#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "osclab/errors.hpp"

// Adaptive Gauss-Kronrod 7/15 quadrature. Fixed node tables, depth-first
// bisection with deterministic left-to-right accumulation.

namespace osclab::quad {

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    // index 7 is the centre node
    fv[7] = f(c);
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    kronrod *= h;
    gauss *= h;
    return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

struct Result {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

// Integrates f over [a, b] to |err| <= max(abs_tol, rel_tol*|I|).
// Throws QuadratureError when the bisection depth limit is exceeded.
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                 int max_depth = 48) {
    Result out;
    if (a == b) return out;
    struct Frame {
        double a, b;
        int depth;
    };
    // explicit stack, right child pushed first so panels accumulate left to right
    Frame stack[64];
    int top = 0;
    stack[top++] = {a, b, 0};
    auto [i0, e0] = detail::gk15(f, a, b);
    out.evaluations += 15;
    const double scale_guess = std::abs(i0) + e0;
    while (top > 0) {
        Frame fr = stack[--top];
        auto [val, err] = detail::gk15(f, fr.a, fr.b);
        out.evaluations += 15;
        const double budget =
            std::max(abs_tol, rel_tol * std::max(scale_guess, std::abs(out.value) + std::abs(val)));
        // per-panel share of the budget, proportional to panel width
        const double share = budget * std::abs(fr.b - fr.a) / std::abs(b - a);
        if (err <= share || err <= abs_tol) {
            out.value += val;
            out.error += err;
            continue;
        }
        if (fr.depth >= max_depth)
            throw QuadratureError("adaptive quadrature exceeded depth " +
                                  std::to_string(max_depth) + " on [" + std::to_string(fr.a) +
                                  ", " + std::to_string(fr.b) + "]");
        const double mid = 0.5 * (fr.a + fr.b);
        stack[top++] = {mid, fr.b, fr.depth + 1};
        stack[top++] = {fr.a, mid, fr.depth + 1};
    }
    return out;
}

}  // namespace osclab::quad
