// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "cswarm/signal.hpp"

namespace cswarm {

/// Two-tone stepped frequency waveform parameterization. Per pulse n the
/// waveform carries the tones f1 + n*step and f2 + n*step inside the active
/// window [n*pri, n*pri + duty*pri).
struct TtsfwParams {
    double f1_hz = 500e3;         ///< lower tone of pulse 0
    double bw_hz = 4e6;           ///< total waveform bandwidth BW
    int n_pulses = 1;             ///< N
    double pri_s = 1e-3;          ///< pulse repetition interval T_r
    double duty = 0.5;            ///< active fraction of each PRI, (0, 1]
    double sample_rate_hz = 25e6;

    double freq_step_hz() const { return bw_hz / (2.0 * n_pulses - 1.0); }  // delta f
    double tone_separation_hz() const { return n_pulses * freq_step_hz(); } // Delta f
    double f2_hz() const { return f1_hz + tone_separation_hz(); }
    double pulse_time_s() const { return duty * pri_s; }                    // T
    double center_frequency_hz() const {
        return 0.5 * (f1_hz + f2_hz()) + 0.5 * (n_pulses - 1) * freq_step_hz();
    }

    /// Throws std::invalid_argument on a Nyquist violation or a nonsensical
    /// field.
    void validate() const;
};

/// Two tones separated by the sync reference frequency.
struct SyncToneParams {
    double fr1_hz = 4.30e9;
    double fr2_hz = 4.31e9;

    double f_ref_hz() const { return fr2_hz - fr1_hz; }
    void validate() const;
};

/// Synthesize the ranging waveform: N pulses, two tones per pulse stepping
/// by delta f, amplitude 1/N, zeros outside the active windows. Sample k is
/// active when n*T_r <= t < n*T_r + T (half-open). Sample counts round down.
SampledSignal generate_ttsfw(const TtsfwParams& params);

/// Two-tone frequency-synchronization signal. RF tones are represented at
/// equivalent baseband: both tones are shifted down by baseband_offset_hz
/// for sampling while phase arithmetic elsewhere uses the true frequencies.
/// phase_offsets are the per-tone phases (phi1, phi2).
SampledSignal generate_sync_tones(const SyncToneParams& params, double duration_s,
                                  double sample_rate_hz, std::array<double, 2> phase_offsets_rad,
                                  double baseband_offset_hz = 0.0);

/// CSV export, columns: index,t_seconds,re,im.
void export_signal_csv(const SampledSignal& sig, std::ostream& os);
void export_signal_csv(const SampledSignal& sig, const std::string& path);

/// Binary export: 16-byte header (magic "CSWV", u32 version, f64 sample
/// rate), then little-endian float64 interleaved re/im.
void export_signal_binary(const SampledSignal& sig, std::ostream& os);
void export_signal_binary(const SampledSignal& sig, const std::string& path);
SampledSignal import_signal_binary(std::istream& is);

}  // namespace cswarm
