// SPDX-License-Identifier: Apache-2.0
//
// NEON variants for the element-wise kernels. The rotator and Monte Carlo
// loops fall back to the scalar reference on aarch64 (per-function dispatch).

#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace cswarm::kernels::neon_impl {

double sum_abs2(const cd* x, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(x);
    const std::size_t nd = 2 * n;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= nd; i += 2) {
        const float64x2_t v = vld1q_f64(p + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < nd; ++i) total += p[i] * p[i];
    return total;
}

void abs2(const cd* x, std::size_t n, double* out) {
    const double* p = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t v = vld1q_f64(p + 2 * i);
        const float64x2_t sq = vmulq_f64(v, v);
        out[i] = vaddvq_f64(sq);
    }
}

void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t va = vld1q_f64(pa + 2 * i);  // [re im]
        const float64x2_t vb = vld1q_f64(pb + 2 * i);
        const float64x2_t b_re = vdupq_laneq_f64(vb, 0);
        const float64x2_t b_im = vdupq_laneq_f64(vb, 1);
        const float64x2_t a_sw = vextq_f64(va, va, 1);  // [im re]
        // [re*b_re + im*b_im, im*b_re - re*b_im]
        const float64x2_t prod = vmulq_f64(a_sw, b_im);
        const float64x2_t signs = {1.0, -1.0};
        const float64x2_t res = vfmaq_f64(vmulq_f64(prod, signs), va, b_re);
        vst1q_f64(po + 2 * i, res);
    }
}

void multiply_real(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace cswarm::kernels::neon_impl

#endif  // __aarch64__
