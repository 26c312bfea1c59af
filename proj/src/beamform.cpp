// SPDX-License-Identifier: Apache-2.0
#include "cswarm/beamform.hpp"

#include <cmath>
#include <stdexcept>

#include "cswarm/constants.hpp"

namespace cswarm {

double steering_phase(double delta_d_t_m, double theta_deg, double f_c_hz) {
    return -kTwoPi * (f_c_hz / kSpeedOfLight) * delta_d_t_m * std::sin(deg_to_rad(theta_deg));
}

double total_phase(double dphi_c1_rad, double dphi_c2_rad) { return dphi_c1_rad + dphi_c2_rad; }

std::complex<double> coherent_sum(const std::vector<NodeEmission>& emissions) {
    if (emissions.empty()) return {0.0, 0.0};
    const double f_c = emissions.front().carrier_hz;
    std::complex<double> acc{0.0, 0.0};
    for (const auto& e : emissions) {
        if (e.carrier_hz != f_c)
            throw std::invalid_argument("coherent_sum: emissions must share the carrier (frequency lock)");
        const double phase = e.residual_error_rad + e.initial_phase_rad;
        acc += e.channel_gain * e.amplitude * std::complex<double>{std::cos(phase), std::sin(phase)};
    }
    return acc;
}

GcResult coherent_gain(const std::vector<NodeEmission>& emissions) {
    std::vector<NodeEmission> ideal = emissions;
    for (auto& e : ideal) {
        e.residual_error_rad = 0.0;
        e.initial_phase_rad = 0.0;
    }
    GcResult r;
    r.coherent_power = std::norm(coherent_sum(emissions));
    r.ideal_power = std::norm(coherent_sum(ideal));
    if (r.ideal_power <= 0.0) throw std::invalid_argument("coherent_gain: ideal power is zero");
    r.gc = r.coherent_power / r.ideal_power;
    return r;
}

}  // namespace cswarm
