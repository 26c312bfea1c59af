// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "cswarm/signal.hpp"
#include "cswarm/waveform.hpp"

namespace cswarm {

/// Self-mixing chain configuration. The low-pass must sit above the tone
/// separation and below the first mixer spur (2 * lower baseband tone).
struct MixerChainConfig {
    double f_ref_hz = 10e6;
    double lpf_cutoff_hz = 10.7e6;
    double cable_mismatch_c1_rad = 0.0;
    double cable_mismatch_c2_rad = 0.0;
    bool dc_block = true;  ///< IF port is AC coupled

    void validate(double fr1_baseband_hz) const;
};

/// Per-tone and derived phases of the sync chain, tracked unwrapped.
/// phi5 = phi2 - phi1 when the cable mismatch is zero; dphi_c = dphi_c1 + dphi_c2.
struct PhaseState {
    double phi1 = 0.0, phi2 = 0.0, phi3 = 0.0, phi4 = 0.0;
    double phi5 = 0.0;
    double dphi_ref = 0.0;
    double dphi_c1 = 0.0;
    double dphi_c2 = 0.0;
    double dphi_c = 0.0;
};

/// Ideal multiplier mixer followed by a brick-wall low-pass: pointwise
/// product of the real parts of rf and lo, filtered to |f| <= lpf_cutoff
/// (DC removed when dc_block). The dominant output is the f_ref tone with
/// phase phi5; everything else sits >= 60 dB down.
SampledSignal self_mix(const SampledSignal& rf, const SampledSignal& lo,
                       const MixerChainConfig& cfg);

/// Phase of the f_hz tone, via projection over an integer number of periods.
double measure_tone_phase(const SampledSignal& sig, double f_hz);
/// Amplitude of the f_hz tone over an integer number of periods.
double measure_tone_amplitude(const SampledSignal& sig, double f_hz);

/// Delta phi_ref = -2*pi*f_ref*delta_d/c. Negative when separation grows.
double ref_phase_shift(double delta_d_in_m, double f_ref_hz);

/// Delta phi_c1 = (f_c / f_ref) * Delta phi_ref. The composed result
/// -2*pi*f_c*delta_d/c depends only on the carrier.
double carrier_phase_shift_sync(double dphi_ref_rad, double f_c_hz, double f_ref_hz);

/// Per-tone shifts (Delta phi_1, Delta phi_2); their difference equals
/// ref_phase_shift(delta_d, fr2 - fr1) exactly.
std::array<double, 2> tone_phase_shifts(double delta_d_in_m, double fr1_hz, double fr2_hz);

/// Advance the unwrapped phase chain by one displacement step.
PhaseState advance_phase_state(const PhaseState& prev, double delta_d_in_m, double delta_d_t_m,
                               double theta_deg, const SyncToneParams& tones, double f_c_hz);

/// Binary PLL discipline: locked when the demodulated reference tone power
/// clears the threshold; below it the secondary free-runs at the configured
/// fractional frequency offset.
struct PllModel {
    double power_threshold = 1e-3;       ///< min |tone amplitude|^2 for lock
    double free_run_frac_offset = 1e-6;  ///< fractional frequency error when unlocked

    bool locked(const SampledSignal& if_signal, double f_ref_hz) const;
    double frequency_offset_hz(bool is_locked, double f_c_hz) const {
        return is_locked ? 0.0 : free_run_frac_offset * f_c_hz;
    }
};

/// End-to-end helper used by the experiment twin and the sync tests: two-tone
/// transmission displaced by delta_d over the sync path, self-mixed at the
/// secondary, IF phase measured. Tones ride at a baseband offset; the true
/// RF frequencies drive the phase arithmetic through the carrier rotation.
struct SyncLinkConfig {
    SyncToneParams tones{};
    MixerChainConfig mixer{};
    double baseband_fr1_hz = 20e6;   ///< where fr1 lands in the simulation band
    double sample_rate_hz = 102.4e6;
    std::size_t n_samples = 16384;
    double base_distance_m = 1.5;
};

/// Measured IF phase (rad, wrapped to (-pi, pi]) at separation
/// base_distance + delta_d.
double simulate_if_phase(const SyncLinkConfig& cfg, double delta_d_m);

}  // namespace cswarm
