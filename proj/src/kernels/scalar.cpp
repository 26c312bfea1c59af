// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Plain loops, no intrinsics; every SIMD variant is
// equivalence-tested against these. Compiled with -ffp-contract=off so the
// explicit std::fma calls in the cos mirror stay the only fused operations.

#include <cmath>

#include "kernels_impl.hpp"

namespace cswarm::kernels {

namespace detail {

double cos_mirror(double x) {
    const double xa = std::fabs(x);
    const double k = std::nearbyint(xa * kInvPio2);
    double r = std::fma(-k, kPio2_1, xa);
    r = std::fma(-k, kPio2_1t, r);
    const double z = r * r;

    double ps = kS6;
    ps = std::fma(ps, z, kS5);
    ps = std::fma(ps, z, kS4);
    ps = std::fma(ps, z, kS3);
    ps = std::fma(ps, z, kS2);
    ps = std::fma(ps, z, kS1);
    const double sin_r = std::fma(r * z, ps, r);

    double pc = kC6;
    pc = std::fma(pc, z, kC5);
    pc = std::fma(pc, z, kC4);
    pc = std::fma(pc, z, kC3);
    pc = std::fma(pc, z, kC2);
    pc = std::fma(pc, z, kC1);
    const double cos_r = std::fma(z * z, pc, std::fma(z, -0.5, 1.0));

    switch (static_cast<long long>(k) & 3) {
        case 0: return cos_r;
        case 1: return -sin_r;
        case 2: return -cos_r;
        default: return sin_r;
    }
}

}  // namespace detail

namespace scalar_impl {

double sum_abs2(const cd* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

void abs2(const cd* x, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

void multiply_conj(const cd* a, const cd* b, std::size_t n, cd* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        const double im = a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
        out[i] = {re, im};
    }
}

void multiply_real(const double* a, const double* b, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void phase_ramp(cd* x, std::size_t n, double theta0, double dtheta) {
    const cd step = {std::cos(dtheta), std::sin(dtheta)};
    cd rot = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i % kRotatorRestart == 0) {
            const double th = theta0 + static_cast<double>(i) * dtheta;
            rot = {std::cos(th), std::sin(th)};
        }
        x[i] *= rot;
        rot *= step;
    }
}

void two_tone_accum(cd* out, std::size_t n, double w1, double p1, double w2, double p2) {
    const cd step1 = {std::cos(w1), std::sin(w1)};
    const cd step2 = {std::cos(w2), std::sin(w2)};
    cd r1 = {0.0, 0.0}, r2 = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (i % kRotatorRestart == 0) {
            const double t = static_cast<double>(i);
            r1 = {std::cos(p1 + t * w1), std::sin(p1 + t * w1)};
            r2 = {std::cos(p2 + t * w2), std::sin(p2 + t * w2)};
        }
        out[i] += r1 + r2;
        r1 *= step1;
        r2 *= step2;
    }
}

void gc_threshold_count(const double* normals, std::size_t n, double sigma_psi,
                        const double* gc_min, std::size_t n_thr, std::uint64_t* counts) {
    const double half_sigma = 0.5 * sigma_psi;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = detail::cos_mirror(half_sigma * normals[i]);
        const double c2 = c * c;
        for (std::size_t j = 0; j < n_thr; ++j) {
            if (c2 >= gc_min[j]) ++counts[j];
        }
    }
}

}  // namespace scalar_impl
}  // namespace cswarm::kernels
