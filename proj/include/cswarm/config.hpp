// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "cswarm/channel.hpp"
#include "cswarm/experiment.hpp"
#include "cswarm/montecarlo.hpp"
#include "cswarm/sync.hpp"
#include "cswarm/waveform.hpp"

namespace cswarm {

/// Config-file diagnostic with 1-based line/column of the offending token.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, int col, const std::string& message);
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    int line_;
    int col_;
};

/// Structured-text configuration: one `key = value` per line, `#` comments,
/// dotted section prefixes, units spelled in the key names (fc_hz, step_m).
/// Unknown keys are rejected. Defaults reproduce the reference experiment
/// (1.5 GHz carrier, 30 dB SNR, 10 MHz sync reference).
struct RunConfig {
    // global
    std::optional<std::uint64_t> seed;
    int threads = 0;          ///< 0 = hardware concurrency
    std::string out_dir = ".";
    int verbosity = 1;
    double fc_hz = 1.5e9;
    double snr_db = 30.0;

    TtsfwParams waveform{};
    double noise_bw_hz = 12.5e6;

    SyncLinkConfig sync_link{};

    // experiment
    double traverse_m = 0.0;  ///< 0 = lambda_c
    double step_m = 0.02;
    int cycles_per_position = 1500;
    double theta_deg = 90.0;
    CorrectionMode correction = CorrectionMode::both;
    double d0_m = 1.5;
    int pulses_per_position = 8;
    int calibration_pulses = 64;

    McConfig mc{};

    // range-sim
    double rangesim_distance_m = 1.5;
    std::int64_t rangesim_trials = 1000;

    // sync-demo
    double syncdemo_delta_d_m = 1.0;

    LinkBudget budget() const;
    ExperimentConfig experiment_config() const;
    McConfig mc_config() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace cswarm
