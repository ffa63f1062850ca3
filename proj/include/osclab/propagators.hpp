#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "osclab/classical.hpp"
#include "osclab/model.hpp"
#include "osclab/spectral.hpp"

// Propagators on one time channel: the exact reduced free multiplier, Strang
// split-step evolution for the reduced and the full Hamiltonian, the
// lens x dilation factorization between them, the quadratic-phase comparison
// dynamics, and the momentum-space Dollard phase.

namespace osclab {

struct StepPlan {
    enum class Mode { Auto, Uniform, Adaptive };

    double t_from = 0.0;
    double t_to = 0.0;
    Mode mode = Mode::Auto;
    int n_steps = 0;          // Uniform
    double h0 = 0.0;          // Auto/Adaptive; <= 0 means 0.01 * r0
    double growth = 0.01;     // Auto/Adaptive: h = growth * |t| beyond 10*r0; <= 0 disables
    double adaptive_tol = 1e-8;

    // Monotone step boundaries including both endpoints (reversed when
    // t_from > t_to). ChannelError when the interval straddles t = 0.
    std::vector<double> boundaries(double r0) const;

    StepPlan over(double a, double b) const {
        StepPlan p = *this;
        p.t_from = a;
        p.t_to = b;
        return p;
    }
};

using Observer = std::function<void(double t, const State&)>;

// Exact reduced free propagator: momentum multiplier
// exp(-i (|t_to|^(1-2l) - |t_from|^(1-2l)) xi^2 / (2 Lambda)) on the positive
// channel, mirrored on the negative one. Single step, unitary.
State free_reduced(const State& s, double t_from, double t_to, const Model& model);

// Strang split-step for H_S(t) = p^2/(2m|t|^(2l)) + V(t, |t|^l x); the kinetic
// substep is the exact reduced free multiplier, the potential substep is
// evaluated at the step midpoint. Requires |t| >= r0 along the plan.
State evolve_reduced(const State& s, const StepPlan& plan, const Model& model,
                     const PotentialSpec& spec, const Observer& observer = {});

// Strang split-step for H(t) = p^2/(2m) + k(t) x^2/2 + V(t, x).
State evolve_full(const State& s, const StepPlan& plan, const Model& model,
                  const PotentialSpec& spec, const Observer& observer = {});

// Residual of the vector-level factorization
//   full(r0 -> t) phi  vs  lens(t) dilation(t^-lambda) reduced(r0 -> t) phi'
// with phi' obtained by inverting the lens and dilation at t = r0.
double factorization_residual(const State& phi, double t, const Model& model,
                              const PotentialSpec& spec, const StepPlan& pattern);

// Composes dilation_apply factors so any positive total rescaling is reachable.
State dilation_total(const State& s, double sigma);

// Comparison dynamics: chirp exp(-i Lambda x^2/(2 t^(1-2l))) followed by the
// momentum multiplier exp(-i t^(1-2l) xi^2/(2 Lambda)).
State tilde_u0_apply(const State& s, double t, const Model& model);

// Accumulated momentum-space phase alpha(t, xi) = int_r0^t V(s, s^(1-l) xi / Lambda) ds.
struct DollardPhase {
    std::shared_ptr<const Grid> grid;
    std::vector<double> alpha;
    double t_current = 0.0;

    static DollardPhase start(std::shared_ptr<const Grid> grid, double r0);
};

// Per-node adaptive quadrature increment of the phase up to t_next.
DollardPhase dollard_phase_accumulate(DollardPhase phase, double t_next, const Model& model,
                                      const PotentialSpec& spec);

// Scalar version at a single momentum, integrating from r0 to t.
double dollard_phase_at(const Model& model, const PotentialSpec& spec, double t, double xi);

// Multiplies by exp(-i alpha(t, xi)) in momentum space.
State dollard_modifier_apply(const State& s, const DollardPhase& phase);

}  // namespace osclab
