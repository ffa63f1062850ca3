#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Data-parallel inner loops used by every module. Each kernel has a serial
// reference path and an OpenMP path selected by Exec; results are independent
// of the thread count (reductions run over a fixed chunk decomposition, FFT
// butterflies are element-independent), so identical inputs give identical
// bytes in either mode up to the usual serial/parallel codegen noise, and
// bit-identical bytes across repeated runs of the same mode.

namespace osclab::kernels {

using cplx = std::complex<double>;

enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec mode);
int max_threads();

// Sizes below these are executed serially even when Parallel is requested;
// the fork/join overhead dominates there (see tools/bench_kernels).
inline constexpr std::size_t kFftParallelMin = std::size_t{1} << 14;
inline constexpr std::size_t kPointwiseParallelMin = std::size_t{1} << 15;

// Number of partial sums in a deterministic chunked reduction. Fixed so that
// the summation order does not depend on the thread count.
std::size_t reduction_chunks(std::size_t n);

// Radix-2 complex FFT plan: twiddle table plus bit-reversal permutation.
class FftPlan {
  public:
    explicit FftPlan(std::size_t n);  // throws SizeError unless n is a power of two >= 2

    std::size_t size() const { return n_; }

    void forward(cplx* data, Exec mode = default_exec()) const;
    // Includes the 1/n scaling, so inverse(forward(x)) == x.
    void inverse(cplx* data, Exec mode = default_exec()) const;

  private:
    void transform(cplx* data, bool inverse, Exec mode) const;

    std::size_t n_ = 0;
    std::vector<cplx> twiddle_;         // exp(-2*pi*i*k/n), k < n/2
    std::vector<std::uint32_t> bitrev_;
};

// Pointwise operations.
void multiply(std::span<cplx> a, std::span<const cplx> b, Exec mode = default_exec());
// a[j] *= exp(i*phase[j])
void multiply_phase(std::span<cplx> a, std::span<const double> phase, Exec mode = default_exec());
void multiply_real(std::span<cplx> a, std::span<const double> w, Exec mode = default_exec());
void scale(std::span<cplx> a, cplx s, Exec mode = default_exec());
// a[j] *= (-1)^j (centers the spectrum of the paired FFT)
void alternate_sign(std::span<cplx> a, Exec mode = default_exec());

// Deterministic chunked reductions.
double sum_abs2(std::span<const cplx> v, Exec mode = default_exec());
// sum_j w[j] * |v[j]|^2
double weighted_abs2(std::span<const cplx> v, std::span<const double> w, Exec mode = default_exec());
// sum_j nodes[j]^power * |v[j]|^2, power in {1, 2}
double moment_abs2(std::span<const cplx> v, std::span<const double> nodes, int power,
                   Exec mode = default_exec());
// sum_j |a[j] - b[j]|^2
double diff_abs2(std::span<const cplx> a, std::span<const cplx> b, Exec mode = default_exec());
// sum_j conj(a[j]) * b[j]
cplx dot(std::span<const cplx> a, std::span<const cplx> b, Exec mode = default_exec());

}  // namespace osclab::kernels
