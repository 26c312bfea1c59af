// SPDX-License-Identifier: Apache-2.0
#include "cswarm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cswarm/constants.hpp"
#include "cswarm/fft.hpp"
#include "cswarm/kernels.hpp"
#include "cswarm/rng.hpp"

namespace cswarm {

void NodeGeometry::validate() const {
    if (d_in_m < 0.0 || d_t_m < 0.0) throw std::invalid_argument("NodeGeometry: distances must be >= 0");
    if (co_moving && delta_d_in_history_m.size() == delta_d_t_history_m.size()) {
        for (std::size_t i = 0; i < delta_d_in_history_m.size(); ++i) {
            if (delta_d_in_history_m[i] != delta_d_t_history_m[i])
                throw std::invalid_argument("NodeGeometry: co-moving requires equal displacements");
        }
    }
}

void NodeGeometry::record_displacement(double delta_d_in, double delta_d_t) {
    if (co_moving && delta_d_in != delta_d_t)
        throw std::invalid_argument("NodeGeometry: co-moving requires equal displacements");
    delta_d_in_history_m.push_back(delta_d_in);
    delta_d_t_history_m.push_back(delta_d_t);
    d_in_m += delta_d_in;
    d_t_m += delta_d_t;
}

void LinkBudget::validate() const {
    if (noise_bw_hz <= 0.0) throw std::invalid_argument("LinkBudget: noise_bw must be positive");
    if (pulse_time_s <= 0.0) throw std::invalid_argument("LinkBudget: pulse_time must be positive");
    if (pulse_count < 1) throw std::invalid_argument("LinkBudget: pulse_count must be >= 1");
}

double LinkBudget::processing_gain() const { return pulse_count * pulse_time_s * noise_bw_hz; }
double LinkBudget::processing_gain_db() const { return linear_to_db(processing_gain()); }
double LinkBudget::post_snr_linear() const { return db_to_linear(snr_db) * processing_gain(); }
double LinkBudget::post_snr_db() const { return linear_to_db(post_snr_linear()); }

double LinkBudget::per_sample_snr_db(double sample_rate_hz) const {
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("LinkBudget: sample_rate must be positive");
    return snr_db + linear_to_db(noise_bw_hz / sample_rate_hz);
}

double round_trip_delay(double d_in_m) {
    if (d_in_m < 0.0) throw std::invalid_argument("round_trip_delay: distance must be >= 0");
    return 2.0 * d_in_m / kSpeedOfLight;
}

SampledSignal fractional_delay(const SampledSignal& sig, double delay_samples) {
    validate(sig);
    const std::size_t n = sig.samples.size();
    SampledSignal out = sig;
    if (delay_samples == 0.0) return out;

    // integer part as a circular rotation, fractional remainder as a
    // frequency-domain linear phase, both on the padded power-of-two grid.
    // The operation is exactly invertible; padding gives pulsed signals a
    // zero guard band so the circular wrap stays silent, while power-of-two
    // tone buffers wrap seamlessly without padding.
    const long long int_part = static_cast<long long>(std::floor(delay_samples));
    const double frac = delay_samples - static_cast<double>(int_part);
    const bool pow2 = (n & (n - 1)) == 0;
    const std::size_t m = pow2 ? n : next_pow2(n);

    std::vector<std::complex<double>> buf(m, std::complex<double>{0.0, 0.0});
    if (int_part == 0) {
        std::copy(sig.samples.begin(), sig.samples.end(), buf.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const long long dst = (static_cast<long long>(i) + int_part) % static_cast<long long>(m);
            buf[static_cast<std::size_t>(dst < 0 ? dst + static_cast<long long>(m) : dst)] =
                sig.samples[i];
        }
    }
    if (frac != 0.0) {
        fft_plan(m).forward(buf.data());
        const double dtheta = -kTwoPi * frac / static_cast<double>(m);
        const std::size_t half = m / 2;
        kernels::phase_ramp(buf.data(), half, 0.0, dtheta);
        kernels::phase_ramp(buf.data() + half, m - half,
                            -dtheta * static_cast<double>(half), dtheta);
        fft_plan(m).inverse(buf.data());
    }
    std::copy(buf.begin(), buf.begin() + n, out.samples.begin());
    return out;
}

double active_mean_power(const SampledSignal& sig) {
    validate(sig);
    std::vector<double> p(sig.samples.size());
    kernels::abs2(sig.samples.data(), sig.samples.size(), p.data());
    const double peak = *std::max_element(p.begin(), p.end());
    double power = 0.0;
    std::size_t count = 0;
    for (double v : p) {
        if (v > 1e-12 * peak) {
            power += v;
            ++count;
        }
    }
    return count == 0 ? 0.0 : power / static_cast<double>(count);
}

SampledSignal add_awgn(const SampledSignal& sig, double active_power, double snr_db,
                       std::uint64_t rng_seed) {
    validate(sig);
    SampledSignal out = sig;
    if (std::isinf(snr_db) || active_power <= 0.0) return out;
    const double sigma = std::sqrt(active_power / db_to_linear(snr_db) / 2.0);
    Rng rng = Rng::derive(rng_seed, {0x6368616eULL});  // channel stream
    for (auto& s : out.samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        s += std::complex<double>{sigma * re, sigma * im};
    }
    return out;
}

SampledSignal propagate(const SampledSignal& sig, double distance_m, double snr_db,
                        std::uint64_t rng_seed, double carrier_offset_hz) {
    validate(sig);
    if (distance_m < 0.0) throw std::invalid_argument("propagate: distance must be >= 0");

    const double tau = distance_m / kSpeedOfLight;
    const double delay_samples = tau * sig.sample_rate_hz;

    // active power comes from the input, whose silent samples are exact
    // zeros; the band-limited delay smears tiny leakage everywhere
    const double power = std::isinf(snr_db) ? 0.0 : active_mean_power(sig);

    SampledSignal out = delay_samples == 0.0 ? sig : fractional_delay(sig, delay_samples);

    if (carrier_offset_hz != 0.0 && tau != 0.0) {
        const double phi = -kTwoPi * carrier_offset_hz * tau;
        const std::complex<double> rot{std::cos(phi), std::sin(phi)};
        for (auto& s : out.samples) s *= rot;
    }

    if (std::isinf(snr_db)) return out;
    return add_awgn(out, power, snr_db, rng_seed);
}

}  // namespace cswarm
