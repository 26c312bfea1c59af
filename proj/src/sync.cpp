// SPDX-License-Identifier: Apache-2.0
#include "cswarm/sync.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cswarm/channel.hpp"
#include "cswarm/constants.hpp"
#include "cswarm/fft.hpp"
#include "cswarm/kernels.hpp"

namespace cswarm {

void MixerChainConfig::validate(double fr1_baseband_hz) const {
    if (f_ref_hz <= 0.0) throw std::invalid_argument("MixerChainConfig: f_ref must be positive");
    if (lpf_cutoff_hz <= f_ref_hz)
        throw std::invalid_argument("MixerChainConfig: lpf_cutoff must exceed f_ref");
    if (fr1_baseband_hz > 0.0 && lpf_cutoff_hz >= 2.0 * fr1_baseband_hz)
        throw std::invalid_argument("MixerChainConfig: lpf_cutoff must sit below the first mixer spur");
}

SampledSignal self_mix(const SampledSignal& rf, const SampledSignal& lo,
                       const MixerChainConfig& cfg) {
    validate(rf);
    validate(lo);
    if (rf.sample_rate_hz != lo.sample_rate_hz || rf.size() != lo.size())
        throw std::invalid_argument("self_mix: rf/lo must share rate and length");

    const std::size_t n = rf.size();
    std::vector<double> a(n), b(n), prod(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = rf.samples[i].real();
        b[i] = lo.samples[i].real();
    }
    kernels::multiply_real(a.data(), b.data(), n, prod.data());

    // brick-wall low-pass in the frequency domain; DC blocked (AC-coupled IF)
    const std::size_t m = next_pow2(n);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = {prod[i], 0.0};
    fft_plan(m).forward(buf.data());
    const double fs = rf.sample_rate_hz;
    for (std::size_t k = 0; k < m; ++k) {
        const double f = (k <= m / 2 ? static_cast<double>(k)
                                     : static_cast<double>(k) - static_cast<double>(m)) *
                         fs / static_cast<double>(m);
        if (std::fabs(f) > cfg.lpf_cutoff_hz || (cfg.dc_block && k == 0)) buf[k] = {0.0, 0.0};
    }
    fft_plan(m).inverse(buf.data());

    SampledSignal out;
    out.sample_rate_hz = fs;
    out.t0_s = rf.t0_s;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = {buf[i].real(), 0.0};
    return out;
}

double measure_tone_phase(const SampledSignal& sig, double f_hz) {
    validate(sig);
    if (f_hz <= 0.0) throw std::invalid_argument("measure_tone_phase: f must be positive");
    // projection over an integer number of periods makes the conjugate image
    // of a real tone integrate to zero
    const double fs = sig.sample_rate_hz;
    const double periods = std::floor(static_cast<double>(sig.size()) * f_hz / fs);
    if (periods < 1.0) throw std::invalid_argument("measure_tone_phase: signal shorter than one period");
    const std::size_t span = static_cast<std::size_t>(periods * fs / f_hz);
    std::complex<double> acc{0.0, 0.0};
    const double w = kTwoPi * f_hz / fs;
    for (std::size_t i = 0; i < span; ++i)
        acc += sig.samples[i] * std::complex<double>{std::cos(w * i), -std::sin(w * i)};
    return std::arg(acc);
}

double measure_tone_amplitude(const SampledSignal& sig, double f_hz) {
    validate(sig);
    const double fs = sig.sample_rate_hz;
    const double periods = std::floor(static_cast<double>(sig.size()) * f_hz / fs);
    if (periods < 1.0) return 0.0;
    const std::size_t span = static_cast<std::size_t>(periods * fs / f_hz);
    std::complex<double> acc{0.0, 0.0};
    const double w = kTwoPi * f_hz / fs;
    for (std::size_t i = 0; i < span; ++i)
        acc += sig.samples[i] * std::complex<double>{std::cos(w * i), -std::sin(w * i)};
    // real tone A*cos -> projection magnitude A/2
    return 2.0 * std::abs(acc) / static_cast<double>(span);
}

double ref_phase_shift(double delta_d_in_m, double f_ref_hz) {
    return -kTwoPi * f_ref_hz * delta_d_in_m / kSpeedOfLight;
}

double carrier_phase_shift_sync(double dphi_ref_rad, double f_c_hz, double f_ref_hz) {
    if (f_ref_hz <= 0.0) throw std::invalid_argument("carrier_phase_shift_sync: f_ref must be positive");
    return (f_c_hz / f_ref_hz) * dphi_ref_rad;
}

std::array<double, 2> tone_phase_shifts(double delta_d_in_m, double fr1_hz, double fr2_hz) {
    return {-kTwoPi * fr1_hz * delta_d_in_m / kSpeedOfLight,
            -kTwoPi * fr2_hz * delta_d_in_m / kSpeedOfLight};
}

PhaseState advance_phase_state(const PhaseState& prev, double delta_d_in_m, double delta_d_t_m,
                               double theta_deg, const SyncToneParams& tones, double f_c_hz) {
    tones.validate();
    const auto shifts = tone_phase_shifts(delta_d_in_m, tones.fr1_hz, tones.fr2_hz);
    PhaseState s = prev;
    s.phi1 += shifts[0];
    s.phi2 += shifts[1];
    s.phi3 = s.phi1;  // cable mismatch constants live in the mixer config
    s.phi4 = s.phi2;
    s.phi5 = s.phi2 - s.phi1;
    const double d_ref = ref_phase_shift(delta_d_in_m, tones.f_ref_hz());
    s.dphi_ref += d_ref;
    s.dphi_c1 += carrier_phase_shift_sync(d_ref, f_c_hz, tones.f_ref_hz());
    s.dphi_c2 += -kTwoPi * (f_c_hz / kSpeedOfLight) * delta_d_t_m * std::sin(deg_to_rad(theta_deg));
    s.dphi_c = s.dphi_c1 + s.dphi_c2;
    return s;
}

bool PllModel::locked(const SampledSignal& if_signal, double f_ref_hz) const {
    const double amp = measure_tone_amplitude(if_signal, f_ref_hz);
    return amp * amp >= power_threshold;
}

double simulate_if_phase(const SyncLinkConfig& cfg, double delta_d_m) {
    cfg.tones.validate();
    const double offset = cfg.tones.fr1_hz - cfg.baseband_fr1_hz;
    cfg.mixer.validate(cfg.baseband_fr1_hz);
    const double duration = static_cast<double>(cfg.n_samples) / cfg.sample_rate_hz;
    SampledSignal tx = generate_sync_tones(cfg.tones, duration, cfg.sample_rate_hz, {0.0, 0.0}, offset);
    const double d = cfg.base_distance_m + delta_d_m;
    if (d < 0.0) throw std::invalid_argument("simulate_if_phase: negative separation");
    // noiseless sync path; the carrier rotation restores true-RF phase shifts
    SampledSignal rx = propagate(tx, d, std::numeric_limits<double>::infinity(), 0, offset);
    SampledSignal mixed = self_mix(rx, rx, cfg.mixer);
    return measure_tone_phase(mixed, cfg.tones.f_ref_hz());
}

}  // namespace cswarm
