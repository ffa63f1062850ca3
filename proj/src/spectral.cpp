#include "osclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "osclab/csvio.hpp"
#include "osclab/errors.hpp"

namespace osclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// uniform in [0,1) from raw mt19937_64 words; distribution-class free so the
// stream is identical across standard libraries
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// centred transforms: W_k = sum_j v_j exp(-i xi_k x_j) and its inverse;
// the (-1)^j / (-1)^k flips shift both grids to be symmetric about zero
void centered_forward(std::vector<cplx>& v, const kernels::FftPlan& plan) {
    kernels::alternate_sign(v);
    plan.forward(v.data());
    kernels::alternate_sign(v);
}

void centered_inverse(std::vector<cplx>& v, const kernels::FftPlan& plan) {
    kernels::alternate_sign(v);
    plan.inverse(v.data());
    kernels::alternate_sign(v);
}

}  // namespace

Grid::Grid(std::size_t n_points, double length)
    : n_(n_points),
      length_(length),
      dx_(length / static_cast<double>(n_points)),
      dxi_(kTwoPi / length),
      nyquist_(std::numbers::pi * static_cast<double>(n_points) / length),
      plan_(n_points),
      plan4_(4 * n_points) {
    x_.resize(n_);
    xi_.resize(n_);
    const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
    for (std::size_t j = 0; j < n_; ++j) {
        const auto c = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half);
        x_[j] = c * dx_;
        xi_[j] = c * dxi_;
    }
}

std::shared_ptr<const Grid> Grid::make(std::size_t n_points, double length) {
    if (n_points < 256)
        throw SizeError("grid needs at least 256 points, got " + std::to_string(n_points));
    if (!(length > 0.0)) throw SizeError("grid length must be positive");
    // FftPlan rejects non-powers of two
    return std::shared_ptr<const Grid>(new Grid(n_points, length));
}

double State::norm() const {
    return std::sqrt(kernels::sum_abs2(amp) * grid->dx());
}

std::vector<cplx> momentum_rep(const State& s) {
    std::vector<cplx> hat = s.amp;
    centered_forward(hat, s.grid->plan());
    kernels::scale(hat, s.grid->dx() / kSqrt2Pi);
    return hat;
}

State from_momentum(std::shared_ptr<const Grid> grid, std::vector<cplx> hat, StateMeta meta) {
    centered_inverse(hat, grid->plan());
    kernels::scale(hat, kSqrt2Pi / grid->dx());
    return State{std::move(grid), std::move(hat), meta};
}

void apply_momentum_multiplier(State& s, std::span<const cplx> factor) {
    kernels::alternate_sign(s.amp);
    s.grid->plan().forward(s.amp.data());
    kernels::multiply(s.amp, factor);
    s.grid->plan().inverse(s.amp.data());
    kernels::alternate_sign(s.amp);
}

void apply_momentum_phase(State& s, std::span<const double> phase) {
    kernels::alternate_sign(s.amp);
    s.grid->plan().forward(s.amp.data());
    const std::size_t n = s.amp.size();
    std::vector<cplx> factor(n);
    for (std::size_t k = 0; k < n; ++k) factor[k] = std::polar(1.0, -phase[k]);
    kernels::multiply(s.amp, factor);
    s.grid->plan().inverse(s.amp.data());
    kernels::alternate_sign(s.amp);
}

State prepare_annular_state(std::shared_ptr<const Grid> grid, double eps, double R,
                            BandProfile profile, double center, std::uint64_t seed) {
    if (!(eps > 0.0) || !(2.0 * eps < R))
        throw BandError("annular band needs 0 < 2*eps < R");
    if (!(R < grid->nyquist() / 2.0))
        throw BandError("band edge R must stay below half the Nyquist momentum");
    const double lo = 2.0 * eps;
    const std::size_t modes = static_cast<std::size_t>((R - lo) / grid->dxi());
    if (modes < 16)
        throw BandError("band [2*eps, R] spans fewer than 16 momentum modes");

    auto bump01 = [](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return std::exp(-1.0 / (u * (1.0 - u)));
    };

    std::mt19937_64 rng(seed);
    double amp_coef[4];
    double phase_coef[4];
    for (int j = 0; j < 4; ++j) {
        amp_coef[j] = 6.0 * (uniform01(rng) - 0.5);
        phase_coef[j] = kTwoPi * uniform01(rng);
    }

    const std::size_t n = grid->n();
    std::vector<cplx> hat(n, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = grid->xi(k);
        const double a = (profile == BandProfile::Symmetric) ? std::abs(xi) : xi;
        const double u = (a - lo) / (R - lo);
        double v = bump01(u);
        if (v == 0.0) continue;
        double theta = -xi * center;
        if (profile == BandProfile::RandomPhase) {
            // smooth low-order phase noise keeps the state localised
            for (int j = 0; j < 4; ++j)
                theta += amp_coef[j] * std::sin(std::numbers::pi * (j + 1) * u + phase_coef[j]);
        }
        hat[k] = std::polar(v, theta);
    }

    StateMeta meta;
    meta.eps = eps;
    meta.band_max = R;
    meta.center = center;
    meta.seed = seed;
    State s = from_momentum(std::move(grid), std::move(hat), meta);
    const double nrm = s.norm();
    if (!(nrm > 0.0)) throw BandError("annular band produced an empty state");
    kernels::scale(s.amp, 1.0 / nrm);
    return s;
}

double expectation(const State& s, Observable o) {
    const double n2_pos = kernels::sum_abs2(s.amp);
    switch (o) {
        case Observable::X:
            return kernels::moment_abs2(s.amp, s.grid->x_nodes(), 1) / n2_pos;
        case Observable::X2:
            return kernels::moment_abs2(s.amp, s.grid->x_nodes(), 2) / n2_pos;
        case Observable::P:
        case Observable::P2: {
            const std::vector<cplx> hat = momentum_rep(s);
            const double n2_mom = kernels::sum_abs2(hat);
            const int power = (o == Observable::P) ? 1 : 2;
            return kernels::moment_abs2(hat, s.grid->xi_nodes(), power) / n2_mom;
        }
        case Observable::P2plusX2:
            return expectation(s, Observable::P2) + expectation(s, Observable::X2);
    }
    return 0.0;
}

State chirp_apply(const State& s, double a) {
    State out = s;
    if (a == 0.0) return out;
    const std::size_t n = s.n();
    // aliasing guard over the occupied support, not the whole box
    double amax = 0.0;
    for (const cplx& c : s.amp) amax = std::max(amax, std::norm(c));
    const double floor2 = amax * 1e-24;
    double x_sup = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        if (std::norm(s.amp[j]) > floor2) x_sup = std::max(x_sup, std::abs(s.grid->x(j)));
    if (2.0 * std::abs(a) * x_sup * s.grid->dx() > std::numbers::pi / 2.0)
        ++out.meta.alias_warnings;

    std::vector<double> phase(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = s.grid->x(j);
        phase[j] = a * x * x;
    }
    kernels::multiply_phase(out.amp, phase);
    return out;
}

State dilation_apply(const State& s, double sigma) {
    if (!(sigma >= 0.125 && sigma <= 8.0))
        throw DomainError("dilation factor must lie in [1/8, 8]; compose for more");
    if (sigma == 1.0) return s;
    const std::size_t n = s.n();
    const double half_box = 0.5 * s.grid->length();

    // the rescaled argument sigma*x must stay where the input is known
    const double reach = std::min(1.0, sigma) * half_box - 2.0 * s.grid->dx();
    const double nrm = s.norm();
    if (nrm > 0.0 && mass_outside(s, reach) > 1e-8 * nrm)
        throw SupportError("state has mass where the rescaled support leaves the grid");

    // 4x spectral oversampling
    std::vector<cplx> w = s.amp;
    centered_forward(w, s.grid->plan());
    const std::size_t n4 = 4 * n;
    std::vector<cplx> fine(n4, cplx{0.0, 0.0});
    const std::size_t offset = (n4 - n) / 2;  // centred zero-padding
    for (std::size_t k = 0; k < n; ++k) fine[k + offset] = w[k];
    centered_inverse(fine, s.grid->plan_oversampled());
    kernels::scale(fine, 4.0);  // 1/(4n) scaling vs the 1/n the coefficients carry

    // 8-point Lagrange interpolation on the fine grid
    const double dxf = s.grid->dx() / 4.0;
    const double root_sigma = std::sqrt(sigma);
    State out = s;
    for (std::size_t j = 0; j < n; ++j) {
        const double y = sigma * s.grid->x(j);
        const double u = y / dxf + static_cast<double>(n4 / 2);
        const double fl = std::floor(u);
        const double t = u - fl;
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(fl) - 3;
        double wgt[8];
        for (int m = 0; m < 8; ++m) {
            double p = 1.0;
            const double xm = static_cast<double>(m - 3);
            for (int l = 0; l < 8; ++l) {
                if (l == m) continue;
                const double xl = static_cast<double>(l - 3);
                p *= (t - xl) / (xm - xl);
            }
            wgt[m] = p;
        }
        cplx acc{0.0, 0.0};
        for (int m = 0; m < 8; ++m) {
            std::ptrdiff_t idx = base + m;
            idx = ((idx % static_cast<std::ptrdiff_t>(n4)) + static_cast<std::ptrdiff_t>(n4)) %
                  static_cast<std::ptrdiff_t>(n4);
            acc += wgt[m] * fine[static_cast<std::size_t>(idx)];
        }
        out.amp[j] = root_sigma * acc;
    }
    return out;
}

double cutoff_window(const CutoffSpec& spec, double s) {
    auto smooth01 = [](double u) {
        // C^infinity monotone step: 0 for u <= 0, 1 for u >= 1
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double a = std::exp(-1.0 / u);
        const double b = std::exp(-1.0 / (1.0 - u));
        return a / (a + b);
    };
    if (spec.kind == CutoffKind::Sharp)
        return (spec.dir == CutoffDir::Leq) ? (s <= spec.threshold ? 1.0 : 0.0)
                                            : (s >= spec.threshold ? 1.0 : 0.0);
    // smooth: for Leq the window is 1 up to threshold-delta0 and 0 past the
    // threshold; mirrored for Geq
    if (spec.dir == CutoffDir::Leq) return smooth01((spec.threshold - s) / spec.delta0);
    return smooth01((s - spec.threshold) / spec.delta0);
}

namespace {

std::vector<double> window_values(const State& s, const CutoffSpec& spec,
                                  const CutoffScale& scale) {
    const double denom = std::pow(scale.t, scale.power);
    std::vector<double> w(s.n());
    for (std::size_t j = 0; j < s.n(); ++j)
        w[j] = cutoff_window(spec, std::abs(s.grid->x(j)) / denom);
    return w;
}

}  // namespace

State cutoff_apply(const State& s, const CutoffSpec& spec, const CutoffScale& scale) {
    State out = s;
    const std::vector<double> w = window_values(s, spec, scale);
    kernels::multiply_real(out.amp, w);
    return out;
}

double cutoff_mass(const State& s, const CutoffSpec& spec, const CutoffScale& scale) {
    std::vector<double> w = window_values(s, spec, scale);
    for (double& v : w) v *= v;  // window applied to the amplitude
    return std::sqrt(kernels::weighted_abs2(s.amp, w) * s.grid->dx());
}

double mass_outside(const State& s, double radius) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.n(); ++j)
        if (std::abs(s.grid->x(j)) > radius) acc += std::norm(s.amp[j]);
    return std::sqrt(acc * s.grid->dx());
}

cplx overlap(const State& a, const State& b) {
    if (a.grid != b.grid) throw GridMismatch("overlap of states on different grids");
    return kernels::dot(a.amp, b.amp) * a.grid->dx();
}

double distance(const State& a, const State& b) {
    if (a.grid != b.grid) throw GridMismatch("distance of states on different grids");
    return std::sqrt(kernels::diff_abs2(a.amp, b.amp) * a.grid->dx());
}

void export_state_csv(const State& s, const std::filesystem::path& position_path,
                      const std::filesystem::path& momentum_path) {
    {
        CsvWriter csv(position_path, {"x", "re_psi", "im_psi", "schema_version"});
        for (std::size_t j = 0; j < s.n(); ++j)
            csv.row({s.grid->x(j), s.amp[j].real(), s.amp[j].imag(),
                     static_cast<double>(kCsvSchemaVersion)});
    }
    const std::vector<cplx> hat = momentum_rep(s);
    CsvWriter csv(momentum_path, {"xi", "re_psihat", "im_psihat", "schema_version"});
    for (std::size_t k = 0; k < s.n(); ++k)
        csv.row({s.grid->xi(k), hat[k].real(), hat[k].imag(),
                 static_cast<double>(kCsvSchemaVersion)});
}

}  // namespace osclab
