#include "osclab/lsq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "osclab/errors.hpp"

namespace osclab::lsq {

namespace {

double dotv(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

Fit2 fit2(std::span<const double> f1, std::span<const double> f2, std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2 || f1.size() != n || f2.size() != n)
        throw DegenerateFit("fit2 needs >= 2 points with matching basis columns");
    const double g11 = dotv(f1, f1);
    const double g12 = dotv(f1, f2);
    const double g22 = dotv(f2, f2);
    const double r1 = dotv(f1, y);
    const double r2 = dotv(f2, y);
    const double det = g11 * g22 - g12 * g12;
    // eigenvalues of the Gram matrix give the squared singular values
    const double tr = g11 + g22;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lam_max = 0.5 * (tr + disc);
    const double lam_min = 0.5 * (tr - disc);
    Fit2 out;
    out.cond = (lam_min > 0.0) ? std::sqrt(lam_max / lam_min)
                               : std::numeric_limits<double>::infinity();
    if (det <= 0.0 || !(lam_min > 0.0))
        throw IllConditioned("fit2 basis is numerically degenerate");
    out.a = (g22 * r1 - g12 * r2) / det;
    out.b = (g11 * r2 - g12 * r1) / det;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - out.a * f1[i] - out.b * f2[i];
        rss += r * r;
    }
    out.rss = rss;
    return out;
}

LineFit line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DegenerateFit("line fit needs >= 2 points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw DegenerateFit("line fit abscissae are all equal");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - out.slope * x[i] - out.intercept;
        rss += r * r;
    }
    out.r2 = (syy > 0.0) ? 1.0 - rss / syy : 1.0;
    return out;
}

namespace {

// Residual of the projected two-power model at fixed exponents.
double power_pair_rss(std::span<const double> t, std::span<const double> y, double p, double q,
                      double* a = nullptr, double* b = nullptr) {
    const std::size_t n = t.size();
    std::vector<double> f1(n), f2(n);
    for (std::size_t i = 0; i < n; ++i) {
        f1[i] = std::pow(t[i], p);
        f2[i] = std::pow(t[i], q);
    }
    try {
        const Fit2 f = fit2(f1, f2, y);
        if (a) *a = f.a;
        if (b) *b = f.b;
        return f.rss;
    } catch (const IllConditioned&) {
        return std::numeric_limits<double>::max();
    }
}

}  // namespace

PowerPairFit fit_power_pair(std::span<const double> t, std::span<const double> y, double p0,
                            double q0) {
    if (t.size() < 4) throw DegenerateFit("power-pair fit needs >= 4 points");
    // Nelder-Mead on (p, q), fixed iteration budget for determinism.
    std::array<std::array<double, 2>, 3> simplex = {{{p0, q0}, {p0 + 0.15, q0}, {p0, q0 + 0.15}}};
    std::array<double, 3> f{};
    auto eval = [&](const std::array<double, 2>& v) { return power_pair_rss(t, y, v[0], v[1]); };
    for (int i = 0; i < 3; ++i) f[i] = eval(simplex[i]);
    for (int iter = 0; iter < 400; ++iter) {
        // order best..worst
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
        std::array<std::array<double, 2>, 3> s2;
        std::array<double, 3> f2{};
        for (int i = 0; i < 3; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = f[idx[i]];
        }
        simplex = s2;
        f = f2;
        const double spread = std::max(std::abs(simplex[0][0] - simplex[2][0]),
                                       std::abs(simplex[0][1] - simplex[2][1]));
        if (spread < 1e-12) break;
        const std::array<double, 2> centroid = {0.5 * (simplex[0][0] + simplex[1][0]),
                                                0.5 * (simplex[0][1] + simplex[1][1])};
        auto blend = [&](double w) {
            return std::array<double, 2>{centroid[0] + w * (centroid[0] - simplex[2][0]),
                                         centroid[1] + w * (centroid[1] - simplex[2][1])};
        };
        const auto xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < f[0]) {
            const auto xe = blend(2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[2] = xe;
                f[2] = fe;
            } else {
                simplex[2] = xr;
                f[2] = fr;
            }
        } else if (fr < f[1]) {
            simplex[2] = xr;
            f[2] = fr;
        } else {
            const auto xc = blend(-0.5);
            const double fc = eval(xc);
            if (fc < f[2]) {
                simplex[2] = xc;
                f[2] = fc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i][0] = 0.5 * (simplex[i][0] + simplex[0][0]);
                    simplex[i][1] = 0.5 * (simplex[i][1] + simplex[0][1]);
                    f[i] = eval(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (f[i] < f[best]) best = i;
    PowerPairFit out;
    out.p = simplex[best][0];
    out.q = simplex[best][1];
    out.rss = power_pair_rss(t, y, out.p, out.q, &out.a, &out.b);
    if (out.q > out.p) {
        std::swap(out.p, out.q);
        std::swap(out.a, out.b);
    }
    return out;
}

PowerOffsetFit fit_power_offset(std::span<const double> t, std::span<const double> y,
                                double beta_lo, double beta_hi) {
    if (t.size() < 4) throw DegenerateFit("power-offset fit needs >= 4 points");
    const std::size_t n = t.size();
    auto rss_at = [&](double beta, double* a = nullptr, double* c = nullptr) {
        std::vector<double> f1(n), f2(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) f1[i] = std::pow(t[i], beta);
        try {
            const Fit2 f = fit2(f1, f2, y);
            if (a) *a = f.a;
            if (c) *c = f.b;
            return f.rss;
        } catch (const IllConditioned&) {
            return std::numeric_limits<double>::max();
        }
    };
    // coarse scan, then golden-section refinement around the best cell
    const int coarse = 48;
    double best_beta = beta_lo;
    double best_rss = std::numeric_limits<double>::max();
    for (int i = 0; i <= coarse; ++i) {
        const double beta = beta_lo + (beta_hi - beta_lo) * i / coarse;
        const double r = rss_at(beta);
        if (r < best_rss) {
            best_rss = r;
            best_beta = beta;
        }
    }
    const double cell = (beta_hi - beta_lo) / coarse;
    double lo = std::max(beta_lo, best_beta - cell);
    double hi = std::min(beta_hi, best_beta + cell);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double r1 = rss_at(x1);
    double r2 = rss_at(x2);
    for (int iter = 0; iter < 80; ++iter) {
        if (r1 < r2) {
            hi = x2;
            x2 = x1;
            r2 = r1;
            x1 = hi - gr * (hi - lo);
            r1 = rss_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            r1 = r2;
            x2 = lo + gr * (hi - lo);
            r2 = rss_at(x2);
        }
    }
    PowerOffsetFit out;
    out.beta = 0.5 * (lo + hi);
    out.rss = rss_at(out.beta, &out.a, &out.c);
    double sy = 0.0;
    for (double v : y) sy += v;
    const double my = sy / static_cast<double>(n);
    double syy = 0.0;
    for (double v : y) syy += (v - my) * (v - my);
    out.r2 = (syy > 0.0) ? 1.0 - out.rss / syy : 1.0;
    return out;
}

}  // namespace osclab::lsq
