// SPDX-License-Identifier: Apache-2.0
#include "cswarm/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cswarm/beamform.hpp"
#include "cswarm/constants.hpp"
#include "cswarm/io.hpp"
#include "cswarm/rng.hpp"

namespace cswarm {

double ExperimentConfig::lambda_c_m() const { return kSpeedOfLight / f_c_hz; }

double ExperimentConfig::traverse_or_default_m() const {
    return traverse_m > 0.0 ? traverse_m : lambda_c_m();
}

std::vector<double> ExperimentConfig::positions_m() const {
    const double traverse = traverse_or_default_m();
    std::vector<double> pos;
    for (double x = 0.0; x <= traverse * (1.0 + 1e-12); x += step_m) pos.push_back(x);
    // the traverse endpoint is recorded even when it falls off the step grid
    // (lambda_c is not a multiple of 2 cm), so the full phase sweep shows
    if (traverse - pos.back() > 1e-9) pos.push_back(traverse);
    return pos;
}

void ExperimentConfig::validate() const {
    if (f_c_hz <= 0.0) throw std::invalid_argument("ExperimentConfig: f_c must be positive");
    if (step_m <= 0.0) throw std::invalid_argument("ExperimentConfig: step must be positive");
    if (traverse_or_default_m() < step_m)
        throw std::invalid_argument("ExperimentConfig: traverse must cover at least one step");
    if (d0_m <= 0.0) throw std::invalid_argument("ExperimentConfig: d0 must be positive");
    if (pulses_per_position < 1 || calibration_pulses < 1)
        throw std::invalid_argument("ExperimentConfig: pulse counts must be >= 1");
    if (cycles_per_position < 1)
        throw std::invalid_argument("ExperimentConfig: cycles_per_position must be >= 1");
    waveform.validate();
}

namespace {

struct RangingRig {
    SampledSignal tx;
    MatchedFilter mf;
    double active_power;
    double per_sample_snr_db;
    int beat;
    double fs;

    RangingRig(const ExperimentConfig& cfg)
        : tx(generate_ttsfw(cfg.waveform)),
          mf(ranging_reference(cfg.waveform)),
          active_power(active_mean_power(tx)),
          per_sample_snr_db(std::isinf(cfg.snr_db)
                                ? cfg.snr_db
                                : [&] {
                                      LinkBudget b = cfg.budget;
                                      b.snr_db = cfg.snr_db;
                                      b.pulse_time_s = cfg.waveform.pulse_time_s();
                                      b.pulse_count = cfg.waveform.n_pulses;
                                      return b.per_sample_snr_db(cfg.waveform.sample_rate_hz);
                                  }()),
          beat(beat_period_samples(cfg.waveform)),
          fs(cfg.waveform.sample_rate_hz) {}

    /// One ranging dwell: n_pulses single-pulse estimates averaged. The
    /// search window is the cooperative prior (the node knows its rough
    /// geometry), half a beat period around the nominal delay.
    double estimate(double d_in, int n_pulses, std::uint64_t seed, std::uint64_t tag) const {
        const double nominal = round_trip_delay(d_in);
        const auto search = DelaySearch::around(nominal, beat, fs);
        const SampledSignal delayed =
            propagate(tx, 2.0 * d_in, std::numeric_limits<double>::infinity(), 0);
        double acc = 0.0;
        for (int p = 0; p < n_pulses; ++p) {
            const SampledSignal rx =
                add_awgn(delayed, active_power, per_sample_snr_db, mix64(seed ^ mix64(tag * 8191 + p)));
            const Correlation corr = mf.correlate(rx);
            acc += estimate_delay(corr, PeakMethod::spline1000, 1000, search).distance_m;
        }
        return acc / n_pulses;
    }
};

}  // namespace

std::vector<TraceRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto positions = cfg.positions_m();
    const double theta = cfg.theta_deg;
    const double f_ref = cfg.sync_link.tones.f_ref_hz();

    RangingRig rig(cfg);

    SyncLinkConfig link = cfg.sync_link;
    link.base_distance_m = cfg.d0_m;

    // power-on calibration: the reference range integrates many pulses
    const double range_ref = rig.estimate(cfg.d0_m, cfg.calibration_pulses, cfg.seed, 0xCA11);

    const bool want_corrected = cfg.correction != CorrectionMode::off;
    const bool want_uncorrected = cfg.correction != CorrectionMode::on;

    Rng amp_rng = Rng::derive(cfg.seed, {0x616d70ULL});
    const double amp_sigma =
        std::isinf(cfg.snr_db)
            ? 0.0
            : std::pow(10.0, -cfg.snr_db / 20.0) / std::sqrt(static_cast<double>(cfg.cycles_per_position));

    std::vector<TraceRow> rows;
    rows.reserve(positions.size());
    double dphi_ref_unwrapped = 0.0;
    double prev_if_phase = simulate_if_phase(link, 0.0);
    double phi0 = 0.0;

    for (std::size_t k = 0; k < positions.size(); ++k) {
        const double pos = positions[k];
        const double d_in = cfg.d0_m + pos;

        // ranging dwell
        double range_est = std::numeric_limits<double>::quiet_NaN();
        double delta_d_hat = 0.0;
        bool ranging_ok = true;
        try {
            range_est = rig.estimate(d_in, cfg.pulses_per_position, cfg.seed, 1 + k);
            delta_d_hat = range_est - range_ref;
        } catch (const std::exception&) {
            ranging_ok = false;  // flagged row; correction holds the last state
        }

        // frequency-transfer chain: measured IF phase accumulates unwrapped
        const double if_phase = simulate_if_phase(link, pos);
        double dp = if_phase - prev_if_phase;
        while (dp > kPi) dp -= kTwoPi;
        while (dp < -kPi) dp += kTwoPi;
        dphi_ref_unwrapped += dp;
        prev_if_phase = if_phase;

        const double dphi_c1_true = carrier_phase_shift_sync(dphi_ref_unwrapped, cfg.f_c_hz, f_ref);
        const double dphi_c2_true = steering_phase(pos, theta, cfg.f_c_hz);
        const double dphi_c_true = total_phase(dphi_c1_true, dphi_c2_true);

        // shared-measurement correction: one range estimate drives both terms
        double correction = 0.0;
        if (ranging_ok) {
            const double dphi_c1_hat =
                carrier_phase_shift_sync(ref_phase_shift(delta_d_hat, f_ref), cfg.f_c_hz, f_ref);
            const double dphi_c2_hat = steering_phase(delta_d_hat, theta, cfg.f_c_hz);
            correction = -(dphi_c1_hat + dphi_c2_hat);
        }
        if (k == 0) phi0 = -(dphi_c_true + correction);  // one-time calibration

        const double residual = dphi_c_true + correction + phi0;

        NodeEmission primary{0.5, {1.0, 0.0}, cfg.f_c_hz, 0.0, 0.0, 0.0};
        NodeEmission secondary{0.5, {1.0, 0.0}, cfg.f_c_hz, correction, residual, 0.0};
        NodeEmission secondary_unc{0.5, {1.0, 0.0}, cfg.f_c_hz, 0.0, dphi_c_true, 0.0};

        TraceRow row;
        row.position_m = pos;
        row.amp_primary = 0.5 + amp_sigma * amp_rng.normal();
        row.amp_secondary = 0.5 + amp_sigma * amp_rng.normal();
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.amp_sum_uncorrected =
            want_uncorrected
                ? std::abs(coherent_sum({primary, secondary_unc})) + amp_sigma * amp_rng.normal()
                : nan;
        if (want_corrected) {
            row.amp_sum_corrected =
                std::abs(coherent_sum({primary, secondary})) + amp_sigma * amp_rng.normal();
            row.gc_corrected = coherent_gain({primary, secondary}).gc;
        } else {
            row.amp_sum_corrected = nan;
            row.gc_corrected = nan;
        }
        row.range_estimate_m = range_est;
        rows.push_back(row);
    }
    return rows;
}

NullAnalysis analyze_uncorrected(const ExperimentConfig& cfg, double fine_step_m) {
    cfg.validate();
    if (fine_step_m <= 0.0) throw std::invalid_argument("analyze_uncorrected: fine_step must be positive");
    // continuous-motion model of the frequency-locked, phase-uncorrected sum;
    // the recorded 2 cm grid never lands inside the narrow nulls
    const double traverse = cfg.traverse_or_default_m();
    const double rate =
        -kTwoPi * (cfg.f_c_hz / kSpeedOfLight) * (1.0 + std::sin(deg_to_rad(cfg.theta_deg)));

    NullAnalysis out;
    out.total_phase_deg = std::fabs(rad_to_deg(rate * traverse));

    bool in_null = false;
    double best_amp = 1.0, best_pos = 0.0;
    for (double pos = 0.0; pos <= traverse * (1.0 + 1e-12); pos += fine_step_m) {
        const double amp = std::fabs(std::cos(0.5 * rate * pos));  // of max 1
        if (amp < 0.1) {
            if (!in_null) {
                in_null = true;
                best_amp = amp;
                best_pos = pos;
            } else if (amp < best_amp) {
                best_amp = amp;
                best_pos = pos;
            }
        } else if (in_null) {
            in_null = false;
            ++out.null_count;
            out.null_positions_m.push_back(best_pos);
        }
    }
    if (in_null) {
        ++out.null_count;
        out.null_positions_m.push_back(best_pos);
    }
    return out;
}

void export_trace(const std::vector<TraceRow>& rows, std::ostream& os) {
    os << "position_m,amp_primary,amp_secondary,amp_sum_uncorrected,amp_sum_corrected,"
          "gc_corrected,range_estimate_m\n";
    for (const auto& r : rows)
        os << fmt_g17(r.position_m) << ',' << fmt_g17(r.amp_primary) << ','
           << fmt_g17(r.amp_secondary) << ',' << fmt_g17(r.amp_sum_uncorrected) << ','
           << fmt_g17(r.amp_sum_corrected) << ',' << fmt_g17(r.gc_corrected) << ','
           << fmt_g17(r.range_estimate_m) << '\n';
}

void export_trace(const std::vector<TraceRow>& rows, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    export_trace(rows, os);
}

std::vector<TraceRow> parse_trace(std::istream& is) {
    std::vector<TraceRow> rows;
    std::string line;
    if (!std::getline(is, line)) return rows;  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        TraceRow r;
        char comma;
        ss >> r.position_m >> comma >> r.amp_primary >> comma >> r.amp_secondary >> comma >>
            r.amp_sum_uncorrected >> comma >> r.amp_sum_corrected >> comma >> r.gc_corrected >>
            comma >> r.range_estimate_m;
        rows.push_back(r);
    }
    return rows;
}

void export_trace_svg(const std::vector<TraceRow>& rows, const std::string& path) {
    SvgSeries primary{"primary", "#d62728", {}, {}};
    SvgSeries secondary{"secondary", "#ff7f0e", {}, {}};
    SvgSeries unc{"sum, frequency lock only", "#9467bd", {}, {}};
    SvgSeries cor{"sum, frequency + phase", "#1f77b4", {}, {}};
    for (const auto& r : rows) {
        primary.x.push_back(r.position_m);
        primary.y.push_back(r.amp_primary);
        secondary.x.push_back(r.position_m);
        secondary.y.push_back(r.amp_secondary);
        unc.x.push_back(r.position_m);
        unc.y.push_back(r.amp_sum_uncorrected);
        cor.x.push_back(r.position_m);
        cor.y.push_back(r.amp_sum_corrected);
    }
    write_svg_chart(path, "two-node traverse", {primary, secondary, unc, cor}, "position [m]",
                    "amplitude (ideal sum = 1)");
}

}  // namespace cswarm
