// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cswarm/kernels.hpp"

// Internal declarations shared by the dispatcher and the per-backend
// translation units. The cos range-reduction constants are the classic
// fdlibm/Cephes values; scalar and SIMD paths must use them through the
// exact same operation sequence so that gc_threshold_count is bit-identical
// across backends.

namespace cswarm::kernels {

// two-part pi/2 for Cody-Waite reduction, |x| up to ~1e6
inline constexpr double kInvPio2 = 6.36619772367581382433e-01;
inline constexpr double kPio2_1 = 1.57079632673412561417e+00;
inline constexpr double kPio2_1t = 6.07710050650619224932e-11;

// sin(r) = r + r*z*poly_s(z), z = r^2, |r| <= pi/4
inline constexpr double kS1 = -1.66666666666666324348e-01;
inline constexpr double kS2 = 8.33333333332248946124e-03;
inline constexpr double kS3 = -1.98412698298579493134e-04;
inline constexpr double kS4 = 2.75573137070700676789e-06;
inline constexpr double kS5 = -2.50507602534068634195e-08;
inline constexpr double kS6 = 1.58969099521155010221e-10;

// cos(r) = 1 - z/2 + z^2*poly_c(z)
inline constexpr double kC1 = 4.16666666666666019037e-02;
inline constexpr double kC2 = -1.38888888888741095749e-03;
inline constexpr double kC3 = 2.48015872894767294178e-05;
inline constexpr double kC4 = -2.75573143513906633035e-07;
inline constexpr double kC5 = 2.08757232129817482790e-09;
inline constexpr double kC6 = -1.13596475577881948265e-11;

/// Exact-phase restart interval for the incremental complex rotators.
inline constexpr std::size_t kRotatorRestart = 512;

namespace scalar_impl {
double sum_abs2(const cd* x, std::size_t n);
void abs2(const cd* x, std::size_t n, double* out);
void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out);
void multiply_real(const double* a, const double* b, std::size_t n, double* out);
void phase_ramp(cd* x, std::size_t n, double theta0, double dtheta);
void two_tone_accum(cd* out, std::size_t n, double w1, double p1, double w2, double p2);
void gc_threshold_count(const double* normals, std::size_t n, double sigma_psi,
                        const double* gc_min, std::size_t n_thr, std::uint64_t* counts);
}  // namespace scalar_impl

#if defined(__x86_64__)
namespace avx2_impl {
double sum_abs2(const cd* x, std::size_t n);
void abs2(const cd* x, std::size_t n, double* out);
void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out);
void multiply_real(const double* a, const double* b, std::size_t n, double* out);
void phase_ramp(cd* x, std::size_t n, double theta0, double dtheta);
void two_tone_accum(cd* out, std::size_t n, double w1, double p1, double w2, double p2);
void gc_threshold_count(const double* normals, std::size_t n, double sigma_psi,
                        const double* gc_min, std::size_t n_thr, std::uint64_t* counts);
}  // namespace avx2_impl
#endif

#if defined(__aarch64__)
namespace neon_impl {
double sum_abs2(const cd* x, std::size_t n);
void abs2(const cd* x, std::size_t n, double* out);
void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out);
void multiply_real(const double* a, const double* b, std::size_t n, double* out);
}  // namespace neon_impl
#endif

}  // namespace cswarm::kernels
