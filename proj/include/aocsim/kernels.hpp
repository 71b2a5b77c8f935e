#pragma once

#include <cstddef>

// Elementwise and reduction kernels used by the per-slot simulation loop.
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2 variant selected at runtime. aoc_update is bit-exact across
// backends; the others agree to within a few ulp.
namespace aocsim::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);

// Backend chosen at startup: AVX2 when the CPU and build support it,
// scalar otherwise. The AOCSIM_KERNELS environment variable ("scalar" or
// "avx2") overrides the probe.
Backend active_backend();

// Forces a backend, primarily for equivalence tests. Returns false (and
// leaves the selection unchanged) if the requested backend is unavailable.
bool set_backend(Backend b);

// k[i] = min(wmax[i], max(0, k[i] + served[i] - vanish[i])), in place.
void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n);

// out[i] = clamp((a0[i] + a1[i] * log2(1 + k[i]^alpha[i])) / 100, 0, 1).
// k[i] == 0 yields a0[i]/100 regardless of alpha's sign.
void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n);

double sum(const double* x, std::size_t n);

// sum over i of x[i] * y[i]
double dot2(const double* x, const double* y, std::size_t n);

// sum over i of (1 - w[i]) * x[i], computed termwise so the result is
// non-negative whenever w[i] <= 1 and x[i] >= 0.
double one_minus_dot2(const double* w, const double* x, std::size_t n);

// Scalar reference implementations, exposed for equivalence tests.
namespace scalar {
void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n);
void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n);
double sum(const double* x, std::size_t n);
double dot2(const double* x, const double* y, std::size_t n);
double one_minus_dot2(const double* w, const double* x, std::size_t n);
}  // namespace scalar

#if AOCSIM_HAVE_AVX2_BACKEND
namespace avx2 {
void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n);
void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n);
double sum(const double* x, std::size_t n);
double dot2(const double* x, const double* y, std::size_t n);
double one_minus_dot2(const double* w, const double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace aocsim::kernels
