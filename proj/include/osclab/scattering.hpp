#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "osclab/classical.hpp"
#include "osclab/model.hpp"
#include "osclab/propagators.hpp"
#include "osclab/spectral.hpp"

// Wave-operator approximants and the desk-scale experiments built on them:
// dyadic Cauchy scans with existence verdicts, propagation-decay slopes, the
// divergent-phase diagnostic, and log-log fitting utilities.

namespace osclab {

// Runtime cap shared by the long-running scans. checkpoint() throws
// BudgetError when the projected total exceeds the cap.
class Budget {
  public:
    Budget() = default;
    explicit Budget(double seconds);
    void checkpoint(double fraction_done) const;

  private:
    bool enabled_ = false;
    double cap_seconds_ = 0.0;
    std::chrono::steady_clock::time_point start_{};
};

// log-log least squares: slope of log(y) against log(x).
// DegenerateFit unless >= 4 points, all positive.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};
SlopeFit slope_fit(std::span<const double> xs, std::span<const double> ys);
// windowed variant over indices [lo, hi)
SlopeFit slope_fit_window(std::span<const double> xs, std::span<const double> ys, std::size_t lo,
                          std::size_t hi);

// Wave-operator approximant at matching time r0:
//   W(t) phi = U_S(t, r0)^* U_{S,0}(t, r0) [e^{-i alpha(t, p)}] phi.
// The adjoint interacting leg is the time-reversed split-step run, which is
// the exact discrete adjoint of the forward one.
State wave_approx(const State& phi, double t, const Model& model, const PotentialSpec& spec,
                  bool modified, const StepPlan& pattern);

enum class Verdict { Cauchy, NonCauchy, Inconclusive };

const char* verdict_token(Verdict v);

struct ConvergenceReport {
    std::vector<double> times;  // dyadic times t_j = 2^j * t0
    std::vector<double> diffs;  // ||W(t_{j+1}) phi - W(t_j) phi||
    double slope = 0.0;         // fitted log-log rate of the diffs
    double floor = 0.0;         // numerical floor used by the verdict
    Verdict verdict = Verdict::Inconclusive;
    std::string meta;
};

// Pure verdict rule, reproducible from the stored columns:
//  - converged to the floor (last diff <= 10*floor)           -> Cauchy
//  - last three diffs all >= max(0.3*max diff, 100*floor)     -> NonCauchy
//  - fitted slope <= -0.1                                     -> Cauchy
//  - otherwise                                                -> Inconclusive
Verdict verdict_of(std::span<const double> diffs, double slope, double floor);

ConvergenceReport cauchy_scan(const State& phi, double t0, int n_doublings, const Model& model,
                              const PotentialSpec& spec, bool modified, const StepPlan& pattern,
                              double floor = 1e-7, const Budget* budget = nullptr);

struct DecayResult {
    std::vector<double> times, inner_mass, outer_mass;
    SlopeFit inner;              // over samples above the mass floor
    std::size_t inner_points = 0;
    bool outer_monotone = true;  // non-increasing within 1e-12
};

// Free-reduced run with inner cutoff |x|/t^(1-2l) <= eps/Lambda and outer
// cutoff >= 3R/Lambda; log-log slopes of both masses.
// FloorError when fewer than 4 samples stay above mass_floor.
DecayResult propagation_decay_experiment(const State& phi, const Model& model,
                                         std::span<const double> times, double mass_floor = 1e-11);

enum class GrowthVerdict { Divergent, Converged, Inconclusive };

const char* growth_token(GrowthVerdict v);

struct PhaseGrowthReport {
    std::vector<double> times;
    std::vector<double> values;  // accumulated phase integral I1(t0, t)
    bool log_model = false;      // boundary case (1-lambda)*rho == 1
    double exponent = 0.0;       // fitted growth exponent (power model)
    double r2 = 0.0;             // fit quality of the selected model
    double tail_fraction = 0.0;  // growth share of the last two decades
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
};

// I1(t0, t) = int_t0^t int V(tau, xi tau^(1-l)/Lambda) |phihat(xi)|^2 dxi dtau
// accumulated on a log-spaced time grid; fitted as c*log t at the boundary
// exponent and as a*t^beta + c below it.
PhaseGrowthReport nonexistence_diagnostic(const State& phi, const Model& model,
                                          const PotentialSpec& spec, double t0, double t1,
                                          int samples_per_decade = 16);

// Max phase-space relative deviation of the full-dynamics means from the
// classical flow, for V = 0:
//   max_t |(dx, dp)| / |(x_cl, p_cl)| over the sample times.
double ehrenfest_check(const State& phi, const Model& model, const Fundamentals& f,
                       std::span<const double> times, const StepPlan& pattern,
                       std::vector<std::array<double, 5>>* table = nullptr);

}  // namespace osclab
