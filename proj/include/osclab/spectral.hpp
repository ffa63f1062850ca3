#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "osclab/kernels.hpp"

// Periodic position grid with its conjugate momentum grid, band-limited state
// preparation, quadratic-phase (chirp) multipliers, the dilation unitary, and
// smooth/sharp cutoff windows.

namespace osclab {

using cplx = kernels::cplx;

class Grid {
  public:
    // n_points: power of two >= 256; length: box size L. Nodes are centred at
    // zero, momentum spacing 2*pi/L.
    static std::shared_ptr<const Grid> make(std::size_t n_points, double length);

    std::size_t n() const { return n_; }
    double length() const { return length_; }
    double dx() const { return dx_; }
    double dxi() const { return dxi_; }
    double nyquist() const { return nyquist_; }
    double x(std::size_t j) const { return x_[j]; }
    double xi(std::size_t k) const { return xi_[k]; }
    std::span<const double> x_nodes() const { return x_; }
    std::span<const double> xi_nodes() const { return xi_; }

    const kernels::FftPlan& plan() const { return plan_; }
    const kernels::FftPlan& plan_oversampled() const { return plan4_; }

  private:
    Grid(std::size_t n_points, double length);

    std::size_t n_;
    double length_, dx_, dxi_, nyquist_;
    std::vector<double> x_, xi_;
    kernels::FftPlan plan_, plan4_;
};

struct StateMeta {
    double eps = 0.0;       // lower band parameter: support starts at 2*eps
    double band_max = 0.0;  // upper band edge R
    double center = 0.0;
    std::uint64_t seed = 0;
    int alias_warnings = 0;
};

struct State {
    std::shared_ptr<const Grid> grid;
    std::vector<cplx> amp;  // amplitudes at the position nodes
    StateMeta meta;

    std::size_t n() const { return amp.size(); }
    double norm() const;
};

// Continuum-normalised momentum representation: psihat(xi_k), Parseval-exact
// against the position norm.
std::vector<cplx> momentum_rep(const State& s);
State from_momentum(std::shared_ptr<const Grid> grid, std::vector<cplx> hat, StateMeta meta = {});

// In-place diagonal multiplier in momentum space: psihat_k *= factor[k].
void apply_momentum_multiplier(State& s, std::span<const cplx> factor);
// psihat_k *= exp(-i*phase[k])
void apply_momentum_phase(State& s, std::span<const double> phase);

enum class BandProfile { OneSided, Symmetric, RandomPhase };

// Smooth bump supported exactly on 2*eps <= xi <= R (mirrored for Symmetric),
// unit norm, optional centre translation, seeded phase noise for RandomPhase.
// BandError when the band is unresolvable (fewer than 16 modes) or violates
// 2*eps < R < nyquist/2.
State prepare_annular_state(std::shared_ptr<const Grid> grid, double eps, double R,
                            BandProfile profile, double center = 0.0, std::uint64_t seed = 0);

enum class Observable { X, P, X2, P2, P2plusX2 };

double expectation(const State& s, Observable o);

// Multiplication by exp(i*a*x^2). Increments meta.alias_warnings when the
// local phase increment exceeds pi/2 per cell over the occupied support.
State chirp_apply(const State& s, double a);

// psi(x) -> sigma^(1/2) * psi(sigma*x), via 4x zero-padded spectral
// oversampling and 8-point local interpolation. sigma in [1/8, 8]; compose
// applications for larger rescalings. SupportError when more than 1e-8 of the
// norm lives where the rescaled argument leaves the grid.
State dilation_apply(const State& s, double sigma);

enum class CutoffKind { Sharp, Smooth };
enum class CutoffDir { Leq, Geq };

struct CutoffSpec {
    CutoffKind kind = CutoffKind::Sharp;
    CutoffDir dir = CutoffDir::Leq;
    double threshold = 1.0;
    double delta0 = 0.05;  // smoothing width (Smooth only)
};

// s(x) = |x| / t^power; the window is evaluated on s.
struct CutoffScale {
    double t = 1.0;
    double power = 0.0;
};

double cutoff_window(const CutoffSpec& spec, double s);
State cutoff_apply(const State& s, const CutoffSpec& spec, const CutoffScale& scale);
double cutoff_mass(const State& s, const CutoffSpec& spec, const CutoffScale& scale);

// Norm of the part of the state with |x| > radius.
double mass_outside(const State& s, double radius);

cplx overlap(const State& a, const State& b);  // <a, b>, GridMismatch if grids differ
double distance(const State& a, const State& b);

// Snapshot export: (x, Re psi, Im psi) and (xi, Re psihat, Im psihat).
void export_state_csv(const State& s, const std::filesystem::path& position_path,
                      const std::filesystem::path& momentum_path);

}  // namespace osclab
