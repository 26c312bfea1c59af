// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <vector>

#include "cswarm/channel.hpp"
#include "cswarm/signal.hpp"
#include "cswarm/waveform.hpp"

namespace cswarm {

enum class PeakMethod { spline1000, parabolic, fft_zoom };

struct RangeEstimate {
    double distance_m = 0.0;   ///< c * delay / 2 (round-trip repeater path)
    double delay_s = 0.0;
    double peak_value = 0.0;
    PeakMethod method = PeakMethod::spline1000;
};

struct CrlbReport {
    double zeta_f_sq = 0.0;     ///< second spectral moment [rad^2/s^2]
    double sigma_tau_s = 0.0;
    double sigma_x_m = 0.0;
    double e_n0_linear = 0.0;   ///< post-processing E/N0
};

/// Closed-form second spectral moment of the TTSFW (angular frequency,
/// central). For N = 1 this reduces to pi^2 * BW^2.
double second_moment(const TtsfwParams& params);

/// CRLB chain: e_n0 = SNR * N * T * BW_n, sigma_tau = 1/sqrt(2 e_n0 zeta^2),
/// sigma_x = c * sigma_tau / 2. Throws on a non-positive SNR.
CrlbReport crlb(const TtsfwParams& params, const LinkBudget& budget);

/// f_c <= 0.03 c / sigma_x: highest carrier meeting the coherent-gain design
/// point at the given ranging uncertainty.
double max_coherent_frequency(double sigma_x_m);

/// Cross-correlation magnitude vs integer lag. lag(i) = i - zero_index,
/// length rx.size() + ref.size() - 1. Computed in the frequency domain above
/// kFftCrossover points, by direct convolution below (results agree to 1e-9
/// relative, pinned by tests).
struct Correlation {
    std::vector<double> magnitude;
    std::ptrdiff_t zero_index = 0;  ///< index of lag 0
    double sample_rate_hz = 0.0;

    double lag_of(std::size_t i) const { return static_cast<double>(i) - static_cast<double>(zero_index); }
};

inline constexpr std::size_t kFftCrossover = 4096;

Correlation matched_filter(const SampledSignal& rx, const SampledSignal& ref);

/// Reusable matched filter with a cached reference spectrum, for ensemble /
/// experiment loops that correlate many receptions against one reference.
class MatchedFilter {
  public:
    explicit MatchedFilter(const SampledSignal& ref);
    Correlation correlate(const SampledSignal& rx) const;

  private:
    std::size_t ref_len_ = 0;
    std::size_t fft_len_ = 0;
    double sample_rate_hz_ = 0.0;
    std::vector<std::complex<double>> ref_spectrum_;
};

/// Coarse-peak search options. The smoothed envelope (|R|^2 averaged over
/// four beat periods of the two-tone correlation) suppresses the tone-beat
/// ambiguity lobes before the raw argmax picks the lobe center; a delay
/// window encodes the cooperative prior when the expected delay is known,
/// which is how a single-pulse two-tone return is disambiguated.
struct DelaySearch {
    double min_delay_s = -std::numeric_limits<double>::infinity();
    double max_delay_s = std::numeric_limits<double>::infinity();
    int beat_samples = 0;  ///< beat period fs/Delta f; 0 disables the envelope stage

    /// Window of +/- half a beat period around a nominal delay.
    static DelaySearch around(double nominal_delay_s, int beat, double sample_rate_hz);
};

/// Sub-sample delay from the correlation peak. Default method: natural cubic
/// spline through the 7 integer lags centered on the coarse peak, resampled
/// at interp_points uniform points; the winning segment's stationary point
/// removes the scan quantization. Throws when the peak sits too close to the
/// correlation edge or the neighborhood is degenerate (flat).
RangeEstimate estimate_delay(const Correlation& corr, PeakMethod method = PeakMethod::spline1000,
                             int interp_points = 1000, const DelaySearch& search = {});

/// Convenience: beat-period smoothing width for a waveform, round(fs/Delta f).
int beat_period_samples(const TtsfwParams& params);

/// Matched-filter replica with Tukey-tapered pulse edges. Correlating the
/// rect-edged reception against a rect replica leaves a kink at the
/// correlation apex (the triangle-envelope corner carries full-band content)
/// that biases any band-limited peak interpolation by ~1e-4..3e-4 samples;
/// tapering the replica edges over taper_fraction of the active window
/// smooths the apex at a ~0.2 dB mismatch cost and leaves the two-tone beat,
/// which carries the delay information, untouched.
SampledSignal ranging_reference(const TtsfwParams& params, double taper_fraction = 0.05);

}  // namespace cswarm
