#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "osclab/model.hpp"

// Fundamental solutions zeta1, zeta2 of zeta'' + (k(t)/m) zeta = 0 with
// zeta1(0)=1, zeta1'(0)=0, zeta2(0)=0, zeta2'(0)=1, sampled on [0, t_max]
// with Hermite interpolation in between and a matched power-law tail beyond.

namespace osclab {

struct AsymptoticCoeffs {
    double c1 = 0.0, c2 = 0.0;  // zeta1 ~ c1*t^(1-lambda) + c2*t^lambda
    double c3 = 0.0, c4 = 0.0;  // zeta2 ~ c3*t^(1-lambda) + c4*t^lambda
};

class Fundamentals {
  public:
    struct Values {
        double z1, z1p, z2, z2p;
    };

    // Interpolated values; even/odd symmetry for t < 0, matched tail beyond
    // t_max (RangeError when no tail coefficients are available).
    Values eval(double t) const;

    // zeta1*zeta2' - zeta1'*zeta2 from the interpolants. RangeError outside
    // the sampled range.
    double wronskian(double t) const;

    double t_max() const { return times_.empty() ? 0.0 : times_.back(); }
    double r0() const { return r0_; }
    double lambda() const { return lambda_; }
    std::span<const double> times() const { return times_; }
    std::span<const double> z1() const { return z1_; }
    std::span<const double> z1p() const { return z1p_; }
    std::span<const double> z2() const { return z2_; }
    std::span<const double> z2p() const { return z2p_; }
    const std::optional<AsymptoticCoeffs>& tail() const { return tail_; }
    // set when a custom interior profile looked non-smooth at r0
    bool interior_warning() const { return interior_warning_; }

  private:
    friend Fundamentals integrate_fundamentals(const Model&, double, double);

    Values at_index(std::size_t i) const;
    Values interpolate(double t) const;

    std::vector<double> times_, z1_, z1p_, z2_, z2p_, kk_;  // kk = k(t)/m at samples
    std::optional<AsymptoticCoeffs> tail_;
    double r0_ = 1.0;
    double lambda_ = 0.0;
    bool interior_warning_ = false;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince 4/5) integration of both
// initial-value problems; rtol = atol = tol. ToleranceError when the step
// control collapses.
Fundamentals integrate_fundamentals(const Model& model, double t_max, double tol = 1e-11);

struct FreeExponents {
    double p = 0.0, q = 0.0;  // fitted free exponent pair, p >= q
};

struct AsymptoticFit {
    AsymptoticCoeffs coeffs;
    double cond1 = 0.0, cond2 = 0.0;  // basis condition numbers for zeta1, zeta2
    FreeExponents free1, free2;       // unconstrained two-exponent fits
};

// Least-squares fit of each zeta on {t^(1-lambda), t^lambda} over samples in
// [t_lo, t_hi], t_lo > r0, plus a free two-exponent validation fit.
// IllConditioned when the window makes the basis degenerate (cond > 1e10).
AsymptoticFit asymptotic_fit(const Fundamentals& f, const Model& model, double t_lo, double t_hi);

// Classical flow generated by the fundamental solutions:
// x(t) = zeta1*x0 + zeta2*p0/m, p(t) = m*zeta1'*x0 + zeta2'*p0.
std::pair<double, double> classical_flow(const Fundamentals& f, double t, double x0, double p0,
                                         double m);

// CSV dump: t, zeta1, zeta1p, zeta2, zeta2p, wronskian, schema_version.
void export_fundamentals_csv(const Fundamentals& f, const std::filesystem::path& path);

}  // namespace osclab
