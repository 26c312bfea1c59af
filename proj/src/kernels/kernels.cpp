// SPDX-License-Identifier: Apache-2.0
#include "cswarm/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace cswarm::kernels {

double (*sum_abs2)(const cd*, std::size_t) = scalar_impl::sum_abs2;
void (*abs2)(const cd*, std::size_t, double*) = scalar_impl::abs2;
void (*multiply_conj)(const cd*, const cd*, std::size_t, cd*) = scalar_impl::multiply_conj;
void (*multiply_real)(const double*, const double*, std::size_t, double*) = scalar_impl::multiply_real;
void (*phase_ramp)(cd*, std::size_t, double, double) = scalar_impl::phase_ramp;
void (*two_tone_accum)(cd*, std::size_t, double, double, double, double) = scalar_impl::two_tone_accum;
void (*gc_threshold_count)(const double*, std::size_t, double, const double*, std::size_t,
                           std::uint64_t*) = scalar_impl::gc_threshold_count;

namespace {
Backend g_active = Backend::scalar;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return g_active; }

void select_backend(Backend b) {
    if (!backend_supported(b))
        throw std::runtime_error(std::string("kernel backend not supported here: ") + backend_name(b));
    switch (b) {
        case Backend::scalar:
            sum_abs2 = scalar_impl::sum_abs2;
            abs2 = scalar_impl::abs2;
            multiply_conj = scalar_impl::multiply_conj;
            multiply_real = scalar_impl::multiply_real;
            phase_ramp = scalar_impl::phase_ramp;
            two_tone_accum = scalar_impl::two_tone_accum;
            gc_threshold_count = scalar_impl::gc_threshold_count;
            break;
        case Backend::avx2:
#if defined(__x86_64__)
            sum_abs2 = avx2_impl::sum_abs2;
            abs2 = avx2_impl::abs2;
            multiply_conj = avx2_impl::multiply_conj;
            multiply_real = avx2_impl::multiply_real;
            phase_ramp = avx2_impl::phase_ramp;
            two_tone_accum = avx2_impl::two_tone_accum;
            gc_threshold_count = avx2_impl::gc_threshold_count;
#endif
            break;
        case Backend::neon:
#if defined(__aarch64__)
            // element-wise kernels only; the rest stay scalar
            sum_abs2 = neon_impl::sum_abs2;
            abs2 = neon_impl::abs2;
            multiply_conj = neon_impl::multiply_conj;
            multiply_real = neon_impl::multiply_real;
            phase_ramp = scalar_impl::phase_ramp;
            two_tone_accum = scalar_impl::two_tone_accum;
            gc_threshold_count = scalar_impl::gc_threshold_count;
#endif
            break;
    }
    g_active = b;
}

void select_default_backend() {
    if (const char* env = std::getenv("COHERENT_SWARM_KERNELS")) {
        const std::string want(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (want == backend_name(b) && backend_supported(b)) {
                select_backend(b);
                return;
            }
        }
    }
    if (backend_supported(Backend::avx2)) {
        select_backend(Backend::avx2);
    } else if (backend_supported(Backend::neon)) {
        select_backend(Backend::neon);
    } else {
        select_backend(Backend::scalar);
    }
}

namespace {
struct AutoInit {
    AutoInit() { select_default_backend(); }
};
const AutoInit g_auto_init{};
}  // namespace

}  // namespace cswarm::kernels
