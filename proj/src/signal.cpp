// SPDX-License-Identifier: Apache-2.0
#include "cswarm/signal.hpp"

#include <stdexcept>

#include "cswarm/kernels.hpp"

namespace cswarm {

double SampledSignal::mean_power() const {
    if (samples.empty()) return 0.0;
    return kernels::sum_abs2(samples.data(), samples.size()) / static_cast<double>(samples.size());
}

double SampledSignal::energy() const {
    if (samples.empty()) return 0.0;
    return kernels::sum_abs2(samples.data(), samples.size());
}

void validate(const SampledSignal& sig) {
    if (sig.sample_rate_hz <= 0.0) throw std::invalid_argument("SampledSignal: sample_rate must be positive");
    if (sig.samples.empty()) throw std::invalid_argument("SampledSignal: samples must be non-empty");
}

}  // namespace cswarm
