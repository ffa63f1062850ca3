#include "osclab/model.hpp"

#include <algorithm>
#include <cmath>

#include "osclab/errors.hpp"

namespace osclab {

double lambda_of(double m, double k) {
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (k < 0.0 || k >= m / 4.0)
        throw DomainError("harmonic coefficient must satisfy 0 <= k < m/4");
    return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * k / m));
}

Model::Model(double m, double k, double r0, KcProfile profile, KProfileSamples interior)
    : m_(m), k_(k), r0_(r0), profile_(profile), interior_(std::move(interior)) {
    if (!(r0 > 0.0)) throw DomainError("matching time r0 must be positive");
    lambda_ = lambda_of(m, k);
    Lambda_ = m * (1.0 - 2.0 * lambda_);
}

Model Model::constant_match(double m, double k, double r0) {
    return Model(m, k, r0, KcProfile::ConstantMatch, {});
}

Model Model::custom(double m, double k, double r0, KProfileSamples interior) {
    if (interior.t.size() != interior.k.size() || interior.t.size() < 2)
        throw DomainError("custom interior profile needs >= 2 (t, k) samples");
    for (std::size_t i = 1; i < interior.t.size(); ++i)
        if (!(interior.t[i] > interior.t[i - 1]))
            throw DomainError("custom interior sample times must be strictly increasing");
    if (interior.t.front() > 0.0 || interior.t.back() < r0)
        throw DomainError("custom interior samples must cover [0, r0]");
    return Model(m, k, r0, KcProfile::Custom, std::move(interior));
}

double Model::k_at(double t) const {
    const double a = std::abs(t);
    if (a > r0_) return k_ / (a * a);
    if (profile_ == KcProfile::ConstantMatch) return k_ / (r0_ * r0_);
    // linear interpolation of the sampled interior
    const auto& ts = interior_.t;
    const auto& ks = interior_.k;
    const auto it = std::upper_bound(ts.begin(), ts.end(), a);
    if (it == ts.begin()) return ks.front();
    if (it == ts.end()) return ks.back();
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (a - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return ks[i - 1] + w * (ks[i] - ks[i - 1]);
}

Model::Thresholds Model::thresholds() const {
    return {1.0 / (1.0 - lambda_), (2.0 * lambda_ + 1.0) / (2.0 * (1.0 - lambda_))};
}

const char* family_name(PotentialFamily family) {
    switch (family) {
        case PotentialFamily::Zero: return "zero";
        case PotentialFamily::ShortRange: return "short_range";
        case PotentialFamily::DollardLong: return "dollard_long";
        case PotentialFamily::LongRange: return "long_range";
    }
    return "?";
}

double TimeModulation::operator()(double t) const {
    return mean + amp * std::sin(freq * t);
}

double PotentialSpec::value(double t, double x) const {
    if (family == PotentialFamily::Zero) return 0.0;
    const double r2 = smoothing * smoothing + x * x;
    return modulation(t) * amplitude * std::pow(r2, -0.5 * rho);
}

double PotentialSpec::dx(double t, double x) const {
    if (family == PotentialFamily::Zero) return 0.0;
    const double r2 = smoothing * smoothing + x * x;
    return modulation(t) * amplitude * (-rho) * x * std::pow(r2, -0.5 * rho - 1.0);
}

double PotentialSpec::dxx(double t, double x) const {
    if (family == PotentialFamily::Zero) return 0.0;
    const double r2 = smoothing * smoothing + x * x;
    return modulation(t) * amplitude * (-rho) * std::pow(r2, -0.5 * rho - 2.0) *
           (r2 - (rho + 2.0) * x * x);
}

const char* verdict_name(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::ShortRange: return "short_range";
        case ClassVerdict::DollardLong: return "dollard_long";
        case ClassVerdict::LongRange: return "long_range";
        case ClassVerdict::Invalid: return "invalid";
    }
    return "?";
}

Classification classify(const PotentialSpec& spec, const Model& model, double x_max) {
    Classification out;
    const auto th = model.thresholds();
    switch (spec.family) {
        case PotentialFamily::Zero:
            // vanishing potential is trivially short range
            out.verdict = ClassVerdict::ShortRange;
            return out;
        case PotentialFamily::ShortRange:
            if (spec.rho > th.short_range) {
                out.verdict = ClassVerdict::ShortRange;
            } else {
                out.reason = "short-range family requires rho > 1/(1-lambda)";
            }
            return out;
        case PotentialFamily::DollardLong:
            if (spec.rho > th.dollard_lower && spec.rho <= th.short_range) {
                out.verdict = ClassVerdict::DollardLong;
            } else {
                out.reason =
                    "dollard family requires (2*lambda+1)/(2*(1-lambda)) < rho <= 1/(1-lambda)";
            }
            return out;
        case PotentialFamily::LongRange: {
            if (!(spec.rho > 0.0 && spec.rho <= th.short_range)) {
                out.reason = "long-range family requires 0 < rho <= 1/(1-lambda)";
                return out;
            }
            if (!(spec.amplitude > 0.0)) {
                out.reason = "long-range family must be sign-definite (amplitude > 0)";
                return out;
            }
            // measure the two-sided power-law envelope on |x| in [1, x_max]
            const int samples = 256;
            double lo = 1e300, hi = 0.0;
            for (int i = 0; i <= samples; ++i) {
                const double x = std::exp(std::log(x_max) * i / samples);
                const double v = spec.amplitude *
                                 std::pow(spec.smoothing * spec.smoothing + x * x, -0.5 * spec.rho);
                const double scaled = v * std::pow(x, spec.rho);
                lo = std::min(lo, scaled);
                hi = std::max(hi, scaled);
            }
            out.c_lower = spec.modulation.lower() * lo;
            out.c_upper = spec.modulation.upper() * hi;
            out.verdict = ClassVerdict::LongRange;
            return out;
        }
    }
    out.reason = "unknown family";
    return out;
}

ReducedCoefficient magnetic_reduction(double q, const std::function<double(double)>& field,
                                      double m, double r0, double t_check_max, double rel_tol) {
    if (q == 0.0) throw DomainError("magnetic reduction requires q != 0");
    if (!(m > 0.0)) throw DomainError("mass must be positive");
    if (!(t_check_max > r0)) throw DomainError("tail check window must extend beyond r0");
    const double pref = q * q / (4.0 * m);
    auto k_of = [&](double t) {
        const double b = field(t);
        return pref * b * b;
    };

    ReducedCoefficient out;
    const int n_interior = 129;
    out.interior.t.resize(n_interior);
    out.interior.k.resize(n_interior);
    for (int i = 0; i < n_interior; ++i) {
        const double t = r0 * i / (n_interior - 1);
        out.interior.t[i] = t;
        out.interior.k[i] = k_of(t);
    }

    // tail shape: k(t)*t^2 must be constant beyond r0
    const int n_tail = 64;
    std::vector<double> scaled(n_tail);
    double scale = 0.0;
    for (int i = 0; i < n_tail; ++i) {
        const double t = r0 * std::exp(std::log(t_check_max / r0) * (i + 1) / n_tail);
        scaled[i] = k_of(t) * t * t;
        scale = std::max(scale, std::abs(scaled[i]));
    }
    if (scale < 1e-14) {
        out.k_exterior = 0.0;  // vanishing field
        return out;
    }
    double mean = 0.0;
    for (double s : scaled) mean += s;
    mean /= n_tail;
    double dev = 0.0;
    for (double s : scaled) dev = std::max(dev, std::abs(s - mean));
    if (dev > rel_tol * std::abs(mean))
        throw ShapeError("coefficient tail is not of k/t^2 form: relative deviation " +
                         std::to_string(dev / std::abs(mean)));
    out.k_exterior = mean;
    return out;
}

}  // namespace osclab
