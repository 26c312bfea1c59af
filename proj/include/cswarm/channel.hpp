// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "cswarm/signal.hpp"

namespace cswarm {

/// Primary/secondary geometry. d_in is the sync-path separation, d_t the
/// beamforming-element baseline; displacement histories accumulate relative
/// motion. In the co-moving configuration the two displacements are equal.
struct NodeGeometry {
    double d_in_m = 1.5;
    double d_t_m = 1.5;
    double theta_deg = 90.0;
    bool co_moving = true;
    std::vector<double> delta_d_in_history_m;
    std::vector<double> delta_d_t_history_m;

    void validate() const;
    void record_displacement(double delta_d_in_m, double delta_d_t_m);
};

/// SNR bookkeeping for the CRLB chain. snr_db is quoted against noise in
/// noise_bw_hz (12.5 MHz for an unfiltered 25 MS/s receiver), not against
/// the full complex sampling band.
struct LinkBudget {
    double snr_db = 30.0;
    double noise_bw_hz = 12.5e6;  ///< BW_n
    double pulse_time_s = 0.5e-3; ///< T
    int pulse_count = 1;          ///< N

    double processing_gain() const;       // N * T * BW_n, linear
    double processing_gain_db() const;
    double post_snr_linear() const;       // 10^(snr/10) * processing gain == E/N0
    double post_snr_db() const;

    /// Per-complex-sample SNR that realizes this budget when white noise is
    /// injected at sample_rate_hz: snr_db + 10*log10(noise_bw / sample_rate).
    double per_sample_snr_db(double sample_rate_hz) const;

    void validate() const;
};

/// One-way propagation: delay by distance/c (integer-sample shift plus a
/// frequency-domain linear-phase fractional part), unit gain, plus complex
/// AWGN at snr_db measured as signal power / noise power per sample over the
/// active (nonzero) samples. snr_db = +inf disables noise. Deterministic in
/// rng_seed. carrier_offset_hz adds the e^{-j2*pi*f0*tau} rotation of a
/// signal represented at baseband f0 below its physical band.
SampledSignal propagate(const SampledSignal& sig, double distance_m, double snr_db,
                        std::uint64_t rng_seed, double carrier_offset_hz = 0.0);

/// Secondary -> primary -> secondary repeater path, turnaround time zero.
double round_trip_delay(double d_in_m);

/// Shift by a (possibly negative, possibly fractional) number of samples.
/// Exposed for the delay-consistency property tests.
SampledSignal fractional_delay(const SampledSignal& sig, double delay_samples);

/// Mean power over the nonzero support (> 1e-12 of peak).
double active_mean_power(const SampledSignal& sig);

/// Complex AWGN at snr_db relative to the given signal power, everywhere in
/// the buffer. Deterministic in rng_seed; infinite snr_db is a no-op.
SampledSignal add_awgn(const SampledSignal& sig, double active_power, double snr_db,
                       std::uint64_t rng_seed);

}  // namespace cswarm
