#include "osclab/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "osclab/csvio.hpp"
#include "osclab/errors.hpp"
#include "osclab/lsq.hpp"

namespace osclab {

namespace {

using Vec4 = std::array<double, 4>;  // (z1, z1p, z2, z2p)

Vec4 rhs(const Model& model, double t, const Vec4& y) {
    const double kk = model.k_at(t) / model.mass();
    return {y[1], -kk * y[0], y[3], -kk * y[2]};
}

Vec4 axpy(const Vec4& y, double h, const Vec4& d) {
    return {y[0] + h * d[0], y[1] + h * d[1], y[2] + h * d[2], y[3] + h * d[3]};
}

// Dormand-Prince 5(4) tableau.
struct DopriStep {
    Vec4 y5;      // 5th order solution
    double err;   // scaled error norm
};

DopriStep dopri_step(const Model& model, double t, const Vec4& y, double h, double tol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const Vec4 k1 = rhs(model, t, y);
    const Vec4 k2 = rhs(model, t + h / 5, axpy(y, h * a21, k1));
    Vec4 tmp = y;
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec4 k3 = rhs(model, t + 3 * h / 10, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec4 k4 = rhs(model, t + 4 * h / 5, tmp);
    for (int i = 0; i < 4; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Vec4 k5 = rhs(model, t + 8 * h / 9, tmp);
    for (int i = 0; i < 4; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const Vec4 k6 = rhs(model, t + h, tmp);

    DopriStep out;
    for (int i = 0; i < 4; ++i)
        out.y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const Vec4 k7 = rhs(model, t + h, out.y5);

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
        const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(out.y5[i]));
        const double d = (out.y5[i] - y4) / sc;
        err += d * d;
    }
    out.err = std::sqrt(err / 4.0);
    return out;
}

// Integrate from t to t_target, storing nothing; y updated in place.
void advance(const Model& model, double& t, Vec4& y, double t_target, double tol) {
    double h = std::min(1e-3, t_target - t);
    int rejects_in_a_row = 0;
    while (t < t_target) {
        h = std::min(h, t_target - t);
        if (h < 1e-14 * std::max(1.0, t))
            throw ToleranceError("step size collapsed at t = " + std::to_string(t));
        const DopriStep s = dopri_step(model, t, y, h, tol);
        if (s.err <= 1.0) {
            t += h;
            y = s.y5;
            rejects_in_a_row = 0;
            const double grow = 0.9 * std::pow(std::max(s.err, 1e-10), -0.2);
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            if (++rejects_in_a_row > 60)
                throw ToleranceError("step control failed at t = " + std::to_string(t));
            h *= std::clamp(0.9 * std::pow(s.err, -0.2), 0.1, 0.5);
        }
    }
}

// Tail coefficients matched by value and derivative at time tm:
// solve a*tm^(1-lam) + b*tm^lam = z, a*(1-lam)*tm^(-lam) + b*lam*tm^(lam-1) = zp.
std::pair<double, double> match_tail(double lam, double tm, double z, double zp) {
    const double det = 2.0 * lam - 1.0;  // independent of tm
    const double a = (z * lam * std::pow(tm, lam - 1.0) - zp * std::pow(tm, lam)) / det;
    const double b = (zp * std::pow(tm, 1.0 - lam) - z * (1.0 - lam) * std::pow(tm, -lam)) / det;
    return {a, b};
}

double hermite(double t, double t0, double t1, double f0, double f1, double d0, double d1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * f1 +
           (s3 - s2) * h * d1;
}

}  // namespace

Fundamentals::Values Fundamentals::at_index(std::size_t i) const {
    return {z1_[i], z1p_[i], z2_[i], z2p_[i]};
}

Fundamentals::Values Fundamentals::interpolate(double t) const {
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i1 = static_cast<std::size_t>(it - times_.begin());
    if (i1 == 0) i1 = 1;
    if (i1 >= times_.size()) i1 = times_.size() - 1;
    const std::size_t i0 = i1 - 1;
    const double t0 = times_[i0], t1 = times_[i1];
    if (t == t0) return at_index(i0);
    if (t == t1) return at_index(i1);
    Values out;
    // zeta from (value, derivative); zeta' from (derivative, -k/m * value)
    out.z1 = hermite(t, t0, t1, z1_[i0], z1_[i1], z1p_[i0], z1p_[i1]);
    out.z2 = hermite(t, t0, t1, z2_[i0], z2_[i1], z2p_[i0], z2p_[i1]);
    out.z1p = hermite(t, t0, t1, z1p_[i0], z1p_[i1], -kk_[i0] * z1_[i0], -kk_[i1] * z1_[i1]);
    out.z2p = hermite(t, t0, t1, z2p_[i0], z2p_[i1], -kk_[i0] * z2_[i0], -kk_[i1] * z2_[i1]);
    return out;
}

Fundamentals::Values Fundamentals::eval(double t) const {
    const double a = std::abs(t);
    Values v;
    if (a <= t_max()) {
        v = interpolate(a);
    } else {
        if (!tail_)
            throw RangeError("t beyond sampled range and no tail coefficients available");
        const double lam = lambda_;
        const double thi = std::pow(a, 1.0 - lam);
        const double tlo = std::pow(a, lam);
        const double dhi = (1.0 - lam) * std::pow(a, -lam);
        const double dlo = lam * std::pow(a, lam - 1.0);
        v.z1 = tail_->c1 * thi + tail_->c2 * tlo;
        v.z1p = tail_->c1 * dhi + tail_->c2 * dlo;
        v.z2 = tail_->c3 * thi + tail_->c4 * tlo;
        v.z2p = tail_->c3 * dhi + tail_->c4 * dlo;
    }
    if (t < 0.0) {
        // k even in t: zeta1 even, zeta2 odd
        v.z1p = -v.z1p;
        v.z2 = -v.z2;
    }
    return v;
}

double Fundamentals::wronskian(double t) const {
    const double a = std::abs(t);
    if (a > t_max()) throw RangeError("wronskian requested outside the sampled range");
    const Values v = interpolate(a);
    return v.z1 * v.z2p - v.z1p * v.z2;
}

Fundamentals integrate_fundamentals(const Model& model, double t_max, double tol) {
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");

    Fundamentals f;
    f.r0_ = model.r0();
    f.lambda_ = model.lambda();

    // sample grid: uniform on [0, r0], geometric beyond
    const double r0 = model.r0();
    std::vector<double> samples;
    const double interior_end = std::min(r0, t_max);
    const int n_in = std::max(64, static_cast<int>(std::ceil(interior_end / (0.01 * r0))));
    for (int i = 0; i <= n_in; ++i) samples.push_back(interior_end * i / n_in);
    if (t_max > r0) {
        const int per_decade = 256;
        const int n_out =
            std::max(8, static_cast<int>(std::ceil(per_decade * std::log10(t_max / r0))));
        for (int i = 1; i <= n_out; ++i)
            samples.push_back(r0 * std::pow(t_max / r0, static_cast<double>(i) / n_out));
        samples.back() = t_max;
    }

    Vec4 y = {1.0, 0.0, 0.0, 1.0};
    double t = 0.0;
    f.times_.reserve(samples.size());
    for (double ts : samples) {
        if (ts > t) advance(model, t, y, ts, tol);
        f.times_.push_back(ts);
        f.z1_.push_back(y[0]);
        f.z1p_.push_back(y[1]);
        f.z2_.push_back(y[2]);
        f.z2p_.push_back(y[3]);
        f.kk_.push_back(model.k_at(ts) / model.mass());
    }

    // tail coefficients, matched at the last sample >= r0
    if (t_max > r0) {
        const std::size_t last = f.times_.size() - 1;
        const double tm = f.times_[last];
        const auto [c1, c2] = match_tail(f.lambda_, tm, f.z1_[last], f.z1p_[last]);
        const auto [c3, c4] = match_tail(f.lambda_, tm, f.z2_[last], f.z2p_[last]);
        f.tail_ = AsymptoticCoeffs{c1, c2, c3, c4};
    }

    if (model.profile() == KcProfile::Custom) {
        // the theory needs C^1 solutions; a jump of the interior profile at r0
        // is only flagged, not rejected
        const double inside = model.k_at(r0);
        const double outside = model.k_coefficient() / (r0 * r0);
        if (std::abs(inside - outside) > 1e-6 * std::max({std::abs(outside), std::abs(inside), 1.0}))
            f.interior_warning_ = true;
    }
    return f;
}

AsymptoticFit asymptotic_fit(const Fundamentals& f, const Model& model, double t_lo, double t_hi) {
    if (!(t_lo > model.r0())) throw DomainError("fit window must start beyond r0");
    if (!(t_hi > t_lo)) throw DomainError("fit window is empty");
    std::vector<double> ts, y1, y2;
    for (std::size_t i = 0; i < f.times().size(); ++i) {
        const double t = f.times()[i];
        if (t < t_lo || t > t_hi) continue;
        ts.push_back(t);
        y1.push_back(f.z1()[i]);
        y2.push_back(f.z2()[i]);
    }
    if (ts.size() < 8) throw IllConditioned("fit window contains fewer than 8 samples");

    const double lam = model.lambda();
    std::vector<double> bhi(ts.size()), blo(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        bhi[i] = std::pow(ts[i], 1.0 - lam);
        blo[i] = std::pow(ts[i], lam);
    }
    const lsq::Fit2 f1 = lsq::fit2(bhi, blo, y1);
    const lsq::Fit2 f2 = lsq::fit2(bhi, blo, y2);
    if (f1.cond > 1e10 || f2.cond > 1e10)
        throw IllConditioned("asymptotic basis condition number exceeds 1e10");

    AsymptoticFit out;
    out.coeffs = {f1.a, f1.b, f2.a, f2.b};
    out.cond1 = f1.cond;
    out.cond2 = f2.cond;

    // free-exponent validation fit; start from the data (log-log slope), fall
    // back to the constrained exponents if the local search lands worse
    auto free_fit = [&](std::span<const double> y, double rss_constrained) {
        std::vector<double> lg_t(ts.size()), lg_y(ts.size());
        bool positive = true;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (!(std::abs(y[i]) > 0.0)) positive = false;
        }
        FreeExponents fe;
        double s = 1.0 - lam;
        if (positive) {
            for (std::size_t i = 0; i < ts.size(); ++i) {
                lg_t[i] = std::log(ts[i]);
                lg_y[i] = std::log(std::abs(y[i]));
            }
            s = lsq::line(lg_t, lg_y).slope;
        }
        lsq::PowerPairFit pf =
            lsq::fit_power_pair(ts, y, s + 0.08, std::max(s - 0.55, 0.02));
        if (pf.rss > 10.0 * rss_constrained + 1e-300) {
            const lsq::PowerPairFit retry = lsq::fit_power_pair(ts, y, 1.0 - lam, lam);
            if (retry.rss < pf.rss) pf = retry;
        }
        fe.p = pf.p;
        fe.q = pf.q;
        return fe;
    };
    out.free1 = free_fit(y1, f1.rss);
    out.free2 = free_fit(y2, f2.rss);
    return out;
}

std::pair<double, double> classical_flow(const Fundamentals& f, double t, double x0, double p0,
                                         double m) {
    const auto v = f.eval(t);
    return {v.z1 * x0 + v.z2 * p0 / m, m * v.z1p * x0 + v.z2p * p0};
}

void export_fundamentals_csv(const Fundamentals& f, const std::filesystem::path& path) {
    CsvWriter csv(path, {"t", "zeta1", "zeta1p", "zeta2", "zeta2p", "wronskian", "schema_version"});
    for (std::size_t i = 0; i < f.times().size(); ++i) {
        const double w = f.z1()[i] * f.z2p()[i] - f.z1p()[i] * f.z2()[i];
        csv.row({f.times()[i], f.z1()[i], f.z1p()[i], f.z2()[i], f.z2p()[i], w,
                 static_cast<double>(kCsvSchemaVersion)});
    }
}

}  // namespace osclab
