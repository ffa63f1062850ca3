#include "osclab/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "osclab/errors.hpp"
#include "osclab/quadrature.hpp"

namespace osclab {

namespace {

// channel sign and |t|^(1-2*lambda) difference; both endpoints on one side of 0
double reduced_time_increment(double t_from, double t_to, double lambda, double* sign_out) {
    const double sgn = (t_to > 0.0 || t_from > 0.0) ? 1.0 : -1.0;
    if (sign_out) *sign_out = sgn;
    const double e = 1.0 - 2.0 * lambda;
    return std::pow(std::abs(t_to), e) - std::pow(std::abs(t_from), e);
}

void check_channel(double a, double b) {
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
        throw ChannelError("time interval straddles t = 0");
}

enum class Dynamics { Reduced, Full };

struct StrangWorkspace {
    std::vector<double> phase;      // position-space potential phase
    std::vector<cplx> kin_factor;   // momentum-space kinetic factor
    double cached_kin_key = std::numeric_limits<double>::quiet_NaN();
};

void potential_half_phase(StrangWorkspace& ws, const State& s, double tbar, double h,
                          const Model& model, const PotentialSpec& spec, Dynamics dyn) {
    const std::size_t n = s.n();
    ws.phase.resize(n);
    const double half = 0.5 * h;
    if (dyn == Dynamics::Reduced) {
        const double scale = std::pow(std::abs(tbar), model.lambda());
        for (std::size_t j = 0; j < n; ++j)
            ws.phase[j] = half * spec.value(tbar, scale * s.grid->x(j));
    } else {
        const double kh = model.k_at(tbar);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = s.grid->x(j);
            ws.phase[j] = half * (0.5 * kh * x * x + spec.value(tbar, x));
        }
    }
}

void apply_position_phase(State& s, const std::vector<double>& phase) {
    const std::size_t n = s.n();
    std::vector<cplx> factor(n);
    for (std::size_t j = 0; j < n; ++j) factor[j] = std::polar(1.0, -phase[j]);
    kernels::multiply(s.amp, factor);
}

void kinetic_step(StrangWorkspace& ws, State& s, double t0, double t1, const Model& model,
                  Dynamics dyn) {
    const std::size_t n = s.n();
    double key;
    if (dyn == Dynamics::Reduced) {
        double sgn = 1.0;
        const double delta = reduced_time_increment(t0, t1, model.lambda(), &sgn);
        key = sgn * delta / (2.0 * model.Lambda());
    } else {
        key = (t1 - t0) / (2.0 * model.mass());
    }
    if (!(key == ws.cached_kin_key) || ws.kin_factor.size() != n) {
        ws.kin_factor.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double xi = s.grid->xi(k);
            ws.kin_factor[k] = std::polar(1.0, -key * xi * xi);
        }
        ws.cached_kin_key = key;
    }
    apply_momentum_multiplier(s, ws.kin_factor);
}

void strang_step(StrangWorkspace& ws, State& s, double t0, double t1, const Model& model,
                 const PotentialSpec& spec, Dynamics dyn) {
    const double tbar = 0.5 * (t0 + t1);
    const double h = t1 - t0;
    const bool has_potential =
        spec.family != PotentialFamily::Zero || dyn == Dynamics::Full;
    if (has_potential) {
        potential_half_phase(ws, s, tbar, h, model, spec, dyn);
        apply_position_phase(s, ws.phase);
        kinetic_step(ws, s, t0, t1, model, dyn);
        apply_position_phase(s, ws.phase);
    } else {
        kinetic_step(ws, s, t0, t1, model, dyn);
    }
}

void adaptive_step(StrangWorkspace& ws, State& s, double t0, double t1, const Model& model,
                   const PotentialSpec& spec, Dynamics dyn, double tol, int depth) {
    State whole = s;
    strang_step(ws, whole, t0, t1, model, spec, dyn);
    const double tm = 0.5 * (t0 + t1);
    State halves = s;
    strang_step(ws, halves, t0, tm, model, spec, dyn);
    strang_step(ws, halves, tm, t1, model, spec, dyn);
    if (distance(whole, halves) <= tol) {
        s = std::move(halves);
        return;
    }
    if (depth >= 20)
        throw StepError("adaptive step halving exceeded depth 20 at t = " + std::to_string(t0));
    adaptive_step(ws, s, t0, tm, model, spec, dyn, tol, depth + 1);
    adaptive_step(ws, s, tm, t1, model, spec, dyn, tol, depth + 1);
}

State evolve(const State& s, const StepPlan& plan, const Model& model, const PotentialSpec& spec,
             Dynamics dyn, const Observer& observer) {
    const std::vector<double> bounds = plan.boundaries(model.r0());
    if (dyn == Dynamics::Reduced) {
        for (double t : bounds)
            if (std::abs(t) < model.r0() * (1.0 - 1e-12))
                throw DomainError("reduced dynamics requires |t| >= r0 along the plan");
    }
    State out = s;
    StrangWorkspace ws;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        if (plan.mode == StepPlan::Mode::Adaptive) {
            adaptive_step(ws, out, bounds[i], bounds[i + 1], model, spec, dyn, plan.adaptive_tol,
                          0);
        } else {
            strang_step(ws, out, bounds[i], bounds[i + 1], model, spec, dyn);
        }
        if (observer) observer(bounds[i + 1], out);
    }
    return out;
}

}  // namespace

std::vector<double> StepPlan::boundaries(double r0) const {
    check_channel(t_from, t_to);
    if (t_from == t_to) return {t_from};
    const double lo = std::min(t_from, t_to);
    const double hi = std::max(t_from, t_to);
    std::vector<double> pts;
    if (mode == Mode::Uniform) {
        const int n = std::max(1, n_steps);
        pts.reserve(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            pts.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
    } else {
        const double h_base = (h0 > 0.0) ? h0 : 0.01 * r0;
        double t = lo;
        pts.push_back(t);
        while (t < hi) {
            double h = h_base;
            if (growth > 0.0 && std::abs(t) >= 10.0 * r0) h = std::max(h, growth * std::abs(t));
            t = std::min(t + h, hi);
            pts.push_back(t);
        }
    }
    pts.front() = lo;
    pts.back() = hi;
    if (t_from > t_to) std::reverse(pts.begin(), pts.end());
    return pts;
}

State free_reduced(const State& s, double t_from, double t_to, const Model& model) {
    check_channel(t_from, t_to);
    State out = s;
    if (t_from == t_to) return out;
    double sgn = 1.0;
    const double delta = reduced_time_increment(t_from, t_to, model.lambda(), &sgn);
    const double coef = sgn * delta / (2.0 * model.Lambda());
    const std::size_t n = s.n();
    std::vector<double> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = s.grid->xi(k);
        phase[k] = coef * xi * xi;
    }
    apply_momentum_phase(out, phase);
    return out;
}

State evolve_reduced(const State& s, const StepPlan& plan, const Model& model,
                     const PotentialSpec& spec, const Observer& observer) {
    return evolve(s, plan, model, spec, Dynamics::Reduced, observer);
}

State evolve_full(const State& s, const StepPlan& plan, const Model& model,
                  const PotentialSpec& spec, const Observer& observer) {
    return evolve(s, plan, model, spec, Dynamics::Full, observer);
}

State dilation_total(const State& s, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("dilation factor must be positive");
    State out = s;
    while (sigma < 0.125) {
        out = dilation_apply(out, 0.125);
        sigma /= 0.125;
    }
    while (sigma > 8.0) {
        out = dilation_apply(out, 8.0);
        sigma /= 8.0;
    }
    return dilation_apply(out, sigma);
}

double factorization_residual(const State& phi, double t, const Model& model,
                              const PotentialSpec& spec, const StepPlan& pattern) {
    const double r0 = model.r0();
    if (!(t > r0)) throw DomainError("factorization check requires t > r0");
    const double lam = model.lambda();
    const double m = model.mass();

    // reduced-picture initial state: invert lens and dilation at t = r0
    State phi_reduced = chirp_apply(phi, -m * lam / (2.0 * r0));
    phi_reduced = dilation_total(phi_reduced, std::pow(r0, lam));

    State right = evolve_reduced(phi_reduced, pattern.over(r0, t), model, spec);
    right = dilation_total(right, std::pow(t, -lam));
    right = chirp_apply(right, m * lam / (2.0 * t));

    const State left = evolve_full(phi, pattern.over(r0, t), model, spec);
    return distance(left, right);
}

State tilde_u0_apply(const State& s, double t, const Model& model) {
    if (!(t >= model.r0())) throw DomainError("comparison dynamics requires t >= r0");
    const double lam = model.lambda();
    const double Lam = model.Lambda();
    const double te = std::pow(t, 1.0 - 2.0 * lam);
    State out = chirp_apply(s, -Lam / (2.0 * te));
    const std::size_t n = s.n();
    std::vector<double> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = s.grid->xi(k);
        phase[k] = te * xi * xi / (2.0 * Lam);
    }
    apply_momentum_phase(out, phase);
    return out;
}

DollardPhase DollardPhase::start(std::shared_ptr<const Grid> grid, double r0) {
    DollardPhase p;
    p.alpha.assign(grid->n(), 0.0);
    p.grid = std::move(grid);
    p.t_current = r0;
    return p;
}

namespace {

double phase_increment(const Model& model, const PotentialSpec& spec, double t_from, double t_to,
                       double xi) {
    const double lam = model.lambda();
    const double Lam = model.Lambda();
    const auto integrand = [&](double s) {
        return spec.value(s, std::pow(s, 1.0 - lam) * xi / Lam);
    };
    return quad::integrate(integrand, t_from, t_to, 1e-10, 1e-14).value;
}

}  // namespace

DollardPhase dollard_phase_accumulate(DollardPhase phase, double t_next, const Model& model,
                                      const PotentialSpec& spec) {
    if (!(t_next > phase.t_current))
        throw DomainError("phase accumulation requires t_next > t_current");
    if (spec.family != PotentialFamily::DollardLong && spec.family != PotentialFamily::Zero)
        throw DomainError("phase modifier is defined for the dollard long-range family");
    if (spec.family == PotentialFamily::Zero) {
        phase.t_current = t_next;
        return phase;
    }
    const std::size_t n = phase.alpha.size();
    const double t0 = phase.t_current;
    const bool par = kernels::default_exec() == kernels::Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const double xi = phase.grid->xi(static_cast<std::size_t>(k));
        phase.alpha[static_cast<std::size_t>(k)] +=
            phase_increment(model, spec, t0, t_next, xi);
    }
    phase.t_current = t_next;
    return phase;
}

double dollard_phase_at(const Model& model, const PotentialSpec& spec, double t, double xi) {
    if (spec.family == PotentialFamily::Zero) return 0.0;
    return phase_increment(model, spec, model.r0(), t, xi);
}

State dollard_modifier_apply(const State& s, const DollardPhase& phase) {
    if (s.grid != phase.grid) throw GridMismatch("phase grid does not match state grid");
    State out = s;
    apply_momentum_phase(out, phase.alpha);
    return out;
}

}  // namespace osclab
