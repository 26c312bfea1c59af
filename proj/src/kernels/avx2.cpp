// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants. Complex buffers are processed as interleaved re/im
// doubles, two complex values per 256-bit vector. gc_threshold_count mirrors
// the scalar operation sequence exactly (see kernels_impl.hpp).

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace cswarm::kernels::avx2_impl {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// a * b on [re0 im0 re1 im1] packing
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// a * conj(b)
inline __m256d cmul_conj(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    // even lanes: a_re*b_re + a_im*b_im, odd: a_im*b_re - a_re*b_im
    return _mm256_fmsubadd_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

double sum_abs2(const cd* x, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(x);
    const std::size_t nd = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < nd; ++i) total += p[i] * p[i];
    return total;
}

void abs2(const cd* x, std::size_t n, double* out) {
    const double* p = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        const __m256d h = _mm256_hadd_pd(sq, sq);  // [m0 m0 m1 m1]
        out[i] = _mm_cvtsd_f64(_mm256_castpd256_pd128(h));
        out[i + 1] = _mm_cvtsd_f64(_mm256_extractf128_pd(h, 1));
    }
    for (; i < n; ++i) out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        _mm256_storeu_pd(po + 2 * i, cmul_conj(va, vb));
    }
    for (; i < n; ++i) {
        const double re = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        const double im = a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
        out[i] = {re, im};
    }
}

void multiply_real(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void phase_ramp(cd* x, std::size_t n, double theta0, double dtheta) {
    double* p = reinterpret_cast<double*>(x);
    const double c2 = std::cos(2.0 * dtheta), s2 = std::sin(2.0 * dtheta);
    const __m256d step2 = _mm256_setr_pd(c2, s2, c2, s2);
    __m256d rot = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        if (i % kRotatorRestart == 0) {
            const double th0 = theta0 + static_cast<double>(i) * dtheta;
            const double th1 = th0 + dtheta;
            rot = _mm256_setr_pd(std::cos(th0), std::sin(th0), std::cos(th1), std::sin(th1));
        }
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(p + 2 * i, cmul(v, rot));
        rot = cmul(rot, step2);
    }
    for (; i < n; ++i) {
        const double th = theta0 + static_cast<double>(i) * dtheta;
        x[i] *= cd{std::cos(th), std::sin(th)};
    }
}

void two_tone_accum(cd* out, std::size_t n, double w1, double p1, double w2, double p2) {
    double* p = reinterpret_cast<double*>(out);
    const double cw1 = std::cos(2.0 * w1), sw1 = std::sin(2.0 * w1);
    const double cw2 = std::cos(2.0 * w2), sw2 = std::sin(2.0 * w2);
    const __m256d step1 = _mm256_setr_pd(cw1, sw1, cw1, sw1);
    const __m256d step2 = _mm256_setr_pd(cw2, sw2, cw2, sw2);
    __m256d r1 = _mm256_setzero_pd(), r2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        if (i % kRotatorRestart == 0) {
            const double t = static_cast<double>(i);
            r1 = _mm256_setr_pd(std::cos(p1 + t * w1), std::sin(p1 + t * w1),
                                std::cos(p1 + (t + 1.0) * w1), std::sin(p1 + (t + 1.0) * w1));
            r2 = _mm256_setr_pd(std::cos(p2 + t * w2), std::sin(p2 + t * w2),
                                std::cos(p2 + (t + 1.0) * w2), std::sin(p2 + (t + 1.0) * w2));
        }
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(p + 2 * i, _mm256_add_pd(v, _mm256_add_pd(r1, r2)));
        r1 = cmul(r1, step1);
        r2 = cmul(r2, step2);
    }
    for (; i < n; ++i) {
        const double t = static_cast<double>(i);
        out[i] += cd{std::cos(p1 + t * w1), std::sin(p1 + t * w1)};
        out[i] += cd{std::cos(p2 + t * w2), std::sin(p2 + t * w2)};
    }
}

namespace {

// vector mirror of detail::cos_mirror, lane-for-lane identical arithmetic
inline __m256d vcos_mirror(__m256d x) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d xa = _mm256_andnot_pd(sign_mask, x);
    const __m256d k =
        _mm256_round_pd(_mm256_mul_pd(xa, _mm256_set1_pd(kInvPio2)),
                        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_setzero_pd(), k), _mm256_set1_pd(kPio2_1), xa);
    r = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_setzero_pd(), k), _mm256_set1_pd(kPio2_1t), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(kS6);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS5));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS4));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS3));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS2));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS1));
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(kC6);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC5));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC4));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC3));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC2));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC1));
    const __m256d cos_r =
        _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                        _mm256_fmadd_pd(z, _mm256_set1_pd(-0.5), _mm256_set1_pd(1.0)));

    // quadrant select from k mod 4
    const __m128i ki = _mm256_cvtpd_epi32(k);
    const __m256i q = _mm256_cvtepi32_epi64(_mm_and_si128(ki, _mm_set1_epi32(3)));
    const __m256d q_is_odd =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                               _mm256_set1_epi64x(1)));
    const __m256d q_ge2 =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(2)),
                                               _mm256_set1_epi64x(2)));
    // base = odd ? sin_r : cos_r; negate when (q==1 || q==2)
    const __m256d base = _mm256_blendv_pd(cos_r, sin_r, q_is_odd);
    const __m256d negate = _mm256_xor_pd(q_is_odd, q_ge2);  // true for q=1,2
    const __m256d neg_base = _mm256_xor_pd(base, _mm256_and_pd(negate, sign_mask));
    return neg_base;
}

}  // namespace

void gc_threshold_count(const double* normals, std::size_t n, double sigma_psi,
                        const double* gc_min, std::size_t n_thr, std::uint64_t* counts) {
    const __m256d half_sigma = _mm256_set1_pd(0.5 * sigma_psi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(normals + i);
        const __m256d c = vcos_mirror(_mm256_mul_pd(half_sigma, g));
        const __m256d c2 = _mm256_mul_pd(c, c);
        for (std::size_t j = 0; j < n_thr; ++j) {
            const __m256d cmp = _mm256_cmp_pd(c2, _mm256_set1_pd(gc_min[j]), _CMP_GE_OQ);
            counts[j] += static_cast<std::uint64_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
        }
    }
    if (i < n) scalar_impl::gc_threshold_count(normals + i, n - i, sigma_psi, gc_min, n_thr, counts);
}

}  // namespace cswarm::kernels::avx2_impl

#endif  // __x86_64__
