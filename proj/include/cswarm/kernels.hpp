// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the signal and Monte Carlo paths.
// Scalar reference implementations always exist; AVX2 (x86-64) and NEON
// (aarch64) variants are selected at runtime per function. Environment
// variable COHERENT_SWARM_KERNELS=scalar|avx2|neon forces a backend.
//
// Contract notes:
//  * gc_threshold_count is bit-identical between backends (shared
//    polynomial, identical operation order), so Monte Carlo counts do not
//    depend on the selected backend.
//  * The remaining kernels agree between backends to floating-point
//    reduction tolerance (different accumulation order); tests pin this.

namespace cswarm::kernels {

using cd = std::complex<double>;

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
/// Force a backend (tests / env override). Throws if unsupported here.
void select_backend(Backend b);
/// Best supported backend, honoring COHERENT_SWARM_KERNELS.
void select_default_backend();

// ---- dispatched entry points -------------------------------------------

/// sum of |x[i]|^2
extern double (*sum_abs2)(const cd* x, std::size_t n);

/// out[i] = |x[i]|^2
extern void (*abs2)(const cd* x, std::size_t n, double* out);

/// out[i] = a[i] * conj(b[i])
extern void (*multiply_conj)(const cd* a, const cd* b, std::size_t n, cd* out);

/// out[i] = a[i] * b[i]
extern void (*multiply_real)(const double* a, const double* b, std::size_t n, double* out);

/// x[k] *= exp(j*(theta0 + k*dtheta)) — incremental rotation with periodic
/// renormalization, used for frequency-domain fractional delay.
extern void (*phase_ramp)(cd* x, std::size_t n, double theta0, double dtheta);

/// out[k] += exp(j*(w1*k + p1)) + exp(j*(w2*k + p2)), w in rad/sample.
/// The two-tone synthesis loop.
extern void (*two_tone_accum)(cd* out, std::size_t n, double w1, double p1, double w2, double p2);

/// For each threshold j: counts[j] += #{ i : cos^2(sigma_psi*normals[i]/2) >= gc_min[j] }.
/// The Monte Carlo coherent-gain trial loop.
extern void (*gc_threshold_count)(const double* normals, std::size_t n, double sigma_psi,
                                  const double* gc_min, std::size_t n_thr, std::uint64_t* counts);

namespace detail {
/// Range-reduced cosine shared by the scalar and SIMD gc_threshold_count
/// paths (identical operation sequence in every backend).
double cos_mirror(double x);
}  // namespace detail

}  // namespace cswarm::kernels
