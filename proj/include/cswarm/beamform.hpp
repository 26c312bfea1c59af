// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace cswarm {

/// One node's CW contribution at the far-field target, in steady-state
/// phasor form (the common exp(j*2*pi*f_c*t) is factored out).
struct NodeEmission {
    double amplitude = 1.0;                     ///< A_n
    std::complex<double> channel_gain = {1.0, 0.0};  ///< h_n
    double carrier_hz = 1.5e9;                  ///< f_c (must match across emissions)
    double phase_correction_rad = 0.0;          ///< applied -Delta phi_c estimate (bookkeeping)
    double residual_error_rad = 0.0;            ///< net phase error after correction
    double initial_phase_rad = 0.0;             ///< phi_0
};

struct GcResult {
    double gc = 0.0;               ///< in [0, 1]
    double coherent_power = 0.0;
    double ideal_power = 0.0;
};

/// Delta phi_c2 = -2*pi*(f_c/c) * delta_d_t * sin(theta).
double steering_phase(double delta_d_t_m, double theta_deg, double f_c_hz);

/// Delta phi_c = Delta phi_c1 + Delta phi_c2.
double total_phase(double dphi_c1_rad, double dphi_c2_rad);

/// Sum of h_n * A_n * exp(j*(residual_error_n + phi0_n)). Throws if the
/// emissions disagree on carrier frequency (frequency lock is a precondition).
std::complex<double> coherent_sum(const std::vector<NodeEmission>& emissions);

/// gc = |sum with errors|^2 / |sum with residual and phi0 zeroed|^2.
/// Throws when the ideal power is zero (all-zero amplitudes).
GcResult coherent_gain(const std::vector<NodeEmission>& emissions);

}  // namespace cswarm
