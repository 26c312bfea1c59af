// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cswarm {

/// Uniformly sampled complex baseband sequence. This is the universal signal
/// currency of the toolkit: waveform synthesis produces it, the channel
/// transforms it, receivers consume it.
struct SampledSignal {
    std::vector<std::complex<double>> samples;
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;  ///< time of the first sample

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration_s() const {
        return sample_rate_hz > 0.0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }

    /// Mean power over the whole buffer, sum |x|^2 / n.
    double mean_power() const;
    /// Sum |x|^2 over the buffer (signal energy in per-sample units).
    double energy() const;
};

/// Throws std::invalid_argument if the invariants (positive rate, non-empty)
/// do not hold.
void validate(const SampledSignal& sig);

/// Sample count from a duration-rate product: rounds down, with an epsilon
/// guard so exact grid counts survive floating-point representation.
inline std::size_t sample_count(double n) {
    return static_cast<std::size_t>(n + 1e-9);
}

}  // namespace cswarm
