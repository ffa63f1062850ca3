#include "osclab/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "osclab/errors.hpp"

namespace osclab::kernels {

namespace {

std::atomic<Exec> g_default_exec{Exec::Parallel};

}  // namespace

Exec default_exec() { return g_default_exec.load(std::memory_order_relaxed); }

void set_default_exec(Exec mode) { g_default_exec.store(mode, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::size_t reduction_chunks(std::size_t n) {
    if (n == 0) return 1;
    return std::min<std::size_t>(256, 1 + (n - 1) / 64);
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n < 2 || !std::has_single_bit(n))
        throw SizeError("fft size must be a power of two >= 2, got " + std::to_string(n));
    twiddle_.resize(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
    const int bits = std::countr_zero(n);
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        std::size_t v = i;
        for (int b = 0; b < bits; ++b) {
            r = (r << 1) | static_cast<std::uint32_t>(v & 1);
            v >>= 1;
        }
        bitrev_[i] = r;
    }
}

void FftPlan::forward(cplx* data, Exec mode) const { transform(data, false, mode); }

void FftPlan::inverse(cplx* data, Exec mode) const {
    transform(data, true, mode);
    const double inv = 1.0 / static_cast<double>(n_);
    scale({data, n_}, inv, mode);
}

void FftPlan::transform(cplx* data, bool inverse, Exec mode) const {
    const std::size_t n = n_;
    const bool par = mode == Exec::Parallel && n >= kFftParallelMin;

    if (par) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            const std::size_t j = bitrev_[static_cast<std::size_t>(i)];
            if (static_cast<std::size_t>(i) < j) std::swap(data[i], data[j]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) std::swap(data[i], data[j]);
        }
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        const std::size_t nb = n >> 1;  // butterflies per stage
        if (par) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
                const std::size_t block = static_cast<std::size_t>(b) / half;
                const std::size_t j = static_cast<std::size_t>(b) % half;
                const std::size_t i0 = block * len + j;
                const std::size_t i1 = i0 + half;
                cplx w = twiddle_[j * stride];
                if (inverse) w = std::conj(w);
                const cplx u = data[i0];
                const cplx v = data[i1] * w;
                data[i0] = u + v;
                data[i1] = u - v;
            }
        } else {
            for (std::size_t block = 0; block < n / len; ++block) {
                const std::size_t base = block * len;
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = twiddle_[j * stride];
                    if (inverse) w = std::conj(w);
                    const cplx u = data[base + j];
                    const cplx v = data[base + j + half] * w;
                    data[base + j] = u + v;
                    data[base + j + half] = u - v;
                }
            }
        }
    }
}

namespace {

template <class Body>
void pointwise(std::size_t n, Exec mode, Body body) {
    if (mode == Exec::Parallel && n >= kPointwiseParallelMin) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
            body(static_cast<std::size_t>(j));
    } else {
        for (std::size_t j = 0; j < n; ++j) body(j);
    }
}

// Chunked reduction: partial sums over a fixed decomposition, combined in
// chunk order, so the value does not depend on the thread count.
template <class ChunkSum>
double reduce(std::size_t n, Exec mode, ChunkSum chunk_sum) {
    const std::size_t nc = reduction_chunks(n);
    std::vector<double> partial(nc, 0.0);
    if (mode == Exec::Parallel && n >= kPointwiseParallelMin) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * n / nc;
            const std::size_t hi = (static_cast<std::size_t>(c) + 1) * n / nc;
            partial[static_cast<std::size_t>(c)] = chunk_sum(lo, hi);
        }
    } else {
        for (std::size_t c = 0; c < nc; ++c) partial[c] = chunk_sum(c * n / nc, (c + 1) * n / nc);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

void multiply(std::span<cplx> a, std::span<const cplx> b, Exec mode) {
    pointwise(a.size(), mode, [&](std::size_t j) { a[j] *= b[j]; });
}

void multiply_phase(std::span<cplx> a, std::span<const double> phase, Exec mode) {
    pointwise(a.size(), mode, [&](std::size_t j) { a[j] *= std::polar(1.0, phase[j]); });
}

void multiply_real(std::span<cplx> a, std::span<const double> w, Exec mode) {
    pointwise(a.size(), mode, [&](std::size_t j) { a[j] *= w[j]; });
}

void scale(std::span<cplx> a, cplx s, Exec mode) {
    pointwise(a.size(), mode, [&](std::size_t j) { a[j] *= s; });
}

void alternate_sign(std::span<cplx> a, Exec mode) {
    pointwise(a.size(), mode, [&](std::size_t j) {
        if (j & 1) a[j] = -a[j];
    });
}

double sum_abs2(std::span<const cplx> v, Exec mode) {
    return reduce(v.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) s += std::norm(v[j]);
        return s;
    });
}

double weighted_abs2(std::span<const cplx> v, std::span<const double> w, Exec mode) {
    return reduce(v.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) s += w[j] * std::norm(v[j]);
        return s;
    });
}

double moment_abs2(std::span<const cplx> v, std::span<const double> nodes, int power, Exec mode) {
    return reduce(v.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        if (power == 1) {
            for (std::size_t j = lo; j < hi; ++j) s += nodes[j] * std::norm(v[j]);
        } else {
            for (std::size_t j = lo; j < hi; ++j) s += nodes[j] * nodes[j] * std::norm(v[j]);
        }
        return s;
    });
}

double diff_abs2(std::span<const cplx> a, std::span<const cplx> b, Exec mode) {
    return reduce(a.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) s += std::norm(a[j] - b[j]);
        return s;
    });
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b, Exec mode) {
    const double re = reduce(a.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
            s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
        return s;
    });
    const double im = reduce(a.size(), mode, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j)
            s += a[j].real() * b[j].imag() - a[j].imag() * b[j].real();
        return s;
    });
    return {re, im};
}

}  // namespace osclab::kernels
