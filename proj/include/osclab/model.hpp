#pragma once

#include <functional>
#include <string>
#include <vector>

// Physical model: the decaying harmonic coefficient k(t), the derived
// exponent lambda with its thresholds, and the classified potential families.

namespace osclab {

enum class KcProfile { ConstantMatch, Custom };

// Interior coefficient samples on [0, r0]; evaluated by linear interpolation
// and extended evenly to negative times.
struct KProfileSamples {
    std::vector<double> t;
    std::vector<double> k;
};

// lambda(m, k): smaller root of lambda*(lambda-1) + k/m = 0.
// Requires m > 0 and 0 <= k < m/4; the result lies in [0, 1/2).
double lambda_of(double m, double k);

class Model {
  public:
    static Model constant_match(double m, double k, double r0);
    static Model custom(double m, double k, double r0, KProfileSamples interior);

    double mass() const { return m_; }
    double k_coefficient() const { return k_; }
    double r0() const { return r0_; }
    double lambda() const { return lambda_; }
    // Lambda = m*(1 - 2*lambda), the effective mass constant of the reduced dynamics.
    double Lambda() const { return Lambda_; }
    KcProfile profile() const { return profile_; }
    const KProfileSamples& interior() const { return interior_; }

    // k(t): interior profile for |t| <= r0, k/t^2 beyond; even in t.
    double k_at(double t) const;

    struct Thresholds {
        double short_range;   // 1/(1-lambda)
        double dollard_lower; // (2*lambda+1)/(2*(1-lambda))
    };
    Thresholds thresholds() const;

  private:
    Model(double m, double k, double r0, KcProfile profile, KProfileSamples interior);

    double m_ = 1.0;
    double k_ = 0.0;
    double r0_ = 1.0;
    double lambda_ = 0.0;
    double Lambda_ = 1.0;
    KcProfile profile_ = KcProfile::ConstantMatch;
    KProfileSamples interior_;
};

enum class PotentialFamily { Zero, ShortRange, DollardLong, LongRange };

const char* family_name(PotentialFamily family);

// Bounded multiplicative time modulation g(t) = mean + amp*sin(freq*t),
// with |amp| < mean so g stays positive.
struct TimeModulation {
    double mean = 1.0;
    double amp = 0.0;
    double freq = 0.0;

    double operator()(double t) const;
    double lower() const { return mean - std::abs(amp); }
    double upper() const { return mean + std::abs(amp); }
};

// V(t, x) = g(t) * amplitude * (smoothing^2 + x^2)^(-rho/2).
struct PotentialSpec {
    PotentialFamily family = PotentialFamily::Zero;
    double rho = 2.0;
    double amplitude = 1.0;
    double smoothing = 1.0;
    TimeModulation modulation{};

    double value(double t, double x) const;
    double dx(double t, double x) const;   // d/dx, closed form
    double dxx(double t, double x) const;  // d^2/dx^2, closed form
};

enum class ClassVerdict { ShortRange, DollardLong, LongRange, Invalid };

const char* verdict_name(ClassVerdict v);

struct Classification {
    ClassVerdict verdict = ClassVerdict::Invalid;
    std::string reason;
    // Sampled two-sided power-law bounds for the long-range family:
    // c_lower*|x|^-rho <= V <= c_upper*|x|^-rho on |x| in [1, x_max].
    double c_lower = 0.0;
    double c_upper = 0.0;
};

// Validates the declared family against its decay window for the given model
// and, for the long-range family, measures the bound constants by sampling
// |x| in [1, x_max].
Classification classify(const PotentialSpec& spec, const Model& model, double x_max = 100.0);

// Coefficient profile induced by a decaying magnetic field: k(t) = q^2 B(t)^2 / (4m).
// Throws ShapeError when the tail does not match k_ext/t^2 within rel_tol.
struct ReducedCoefficient {
    double k_exterior = 0.0;
    KProfileSamples interior;
};
ReducedCoefficient magnetic_reduction(double q, const std::function<double(double)>& field,
                                      double m, double r0, double t_check_max,
                                      double rel_tol = 1e-8);

}  // namespace osclab
