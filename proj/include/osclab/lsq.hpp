#pragma once

#include <span>

// Small least-squares helpers shared by the classical-solution fits and the
// scattering-report fits.

namespace osclab::lsq {

// y ~ a*f1 + b*f2. cond is the condition number of the two-column design
// matrix (ratio of its singular values).
struct Fit2 {
    double a = 0.0;
    double b = 0.0;
    double cond = 0.0;
    double rss = 0.0;
};
Fit2 fit2(std::span<const double> f1, std::span<const double> f2, std::span<const double> y);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};
LineFit line(std::span<const double> x, std::span<const double> y);

// y ~ a*t^p + b*t^q with free exponents; linear part solved by projection,
// (p, q) by Nelder-Mead from (p0, q0).
struct PowerPairFit {
    double p = 0.0, q = 0.0;
    double a = 0.0, b = 0.0;
    double rss = 0.0;
};
PowerPairFit fit_power_pair(std::span<const double> t, std::span<const double> y, double p0,
                            double q0);

// y ~ a*t^beta + c, beta in [beta_lo, beta_hi]; used for growth laws whose
// lower integration limit leaves a constant offset.
struct PowerOffsetFit {
    double beta = 0.0;
    double a = 0.0, c = 0.0;
    double rss = 0.0;
    double r2 = 1.0;
};
PowerOffsetFit fit_power_offset(std::span<const double> t, std::span<const double> y,
                                double beta_lo, double beta_hi);

}  // namespace osclab::lsq
