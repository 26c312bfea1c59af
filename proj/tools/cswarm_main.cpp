// SPDX-License-Identifier: Apache-2.0
//
// cswarm — distributed-beamforming coordination simulator.
// Subcommands: crlb, range-sim, sync-demo, mc-grid, experiment, repro.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "cswarm/channel.hpp"
#include "cswarm/checks.hpp"
#include "cswarm/config.hpp"
#include "cswarm/constants.hpp"
#include "cswarm/experiment.hpp"
#include "cswarm/io.hpp"
#include "cswarm/montecarlo.hpp"
#include "cswarm/parallel.hpp"
#include "cswarm/ranging.hpp"
#include "cswarm/rng.hpp"
#include "cswarm/sync.hpp"
#include "cswarm/waveform.hpp"

namespace {

using namespace cswarm;

/// --seed flag, then config seed, then COHERENT_SWARM_SEED, then a fresh
/// draw (printed, so the run stays reproducible).
std::uint64_t resolve_seed(const RunConfig& cfg, bool flag_set, std::uint64_t flag_value) {
    if (flag_set) return flag_value;
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("COHERENT_SWARM_SEED")) {
        char* end = nullptr;
        const std::uint64_t v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    std::random_device rd;
    const std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::printf("seed = %" PRIu64 " (drawn; pass --seed to reproduce)\n", v);
    return v;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    if (name.empty() || name.front() == '/' || cfg.out_dir.empty() || cfg.out_dir == ".")
        return name;
    return cfg.out_dir + "/" + name;
}

int run_crlb(const RunConfig& cfg, const std::string& csv) {
    const LinkBudget budget = cfg.budget();
    const CrlbReport rep = crlb(cfg.waveform, budget);
    std::printf("waveform            BW %.6g Hz, N %d, f1 %.6g Hz, T %.6g s\n", cfg.waveform.bw_hz,
                cfg.waveform.n_pulses, cfg.waveform.f1_hz, cfg.waveform.pulse_time_s());
    std::printf("zeta_f^2            %.6g Hz^2\n", rep.zeta_f_sq);
    std::printf("snr                 %.6g dB in %.6g Hz\n", budget.snr_db, budget.noise_bw_hz);
    std::printf("processing gain     %.6g (%.4g dB)\n", budget.processing_gain(),
                budget.processing_gain_db());
    std::printf("post E/N0           %.6g (%.4g dB)\n", rep.e_n0_linear,
                linear_to_db(rep.e_n0_linear));
    std::printf("sigma_tau           %.6g s  (sigma_tau^2 %.6g s^2)\n", rep.sigma_tau_s,
                rep.sigma_tau_s * rep.sigma_tau_s);
    std::printf("sigma_x             %.6g m\n", rep.sigma_x_m);
    std::printf("max coherent f_c    %.6g Hz\n", max_coherent_frequency(rep.sigma_x_m));
    if (!csv.empty()) {
        std::string s = "zeta_f_sq,sigma_tau_s,sigma_x_m,e_n0_linear,processing_gain\n";
        s += fmt_g17(rep.zeta_f_sq) + "," + fmt_g17(rep.sigma_tau_s) + "," + fmt_g17(rep.sigma_x_m) +
             "," + fmt_g17(rep.e_n0_linear) + "," + fmt_g17(budget.processing_gain()) + "\n";
        write_text_file(out_path(cfg, csv), s);
    }
    return 0;
}

int run_range_sim(const RunConfig& cfg, std::uint64_t seed, const std::string& out,
                  const std::string& wave_csv, const std::string& wave_bin) {
    const LinkBudget budget = cfg.budget();
    const CrlbReport rep = crlb(cfg.waveform, budget);
    const SampledSignal tx = generate_ttsfw(cfg.waveform);
    if (!wave_csv.empty()) export_signal_csv(tx, out_path(cfg, wave_csv));
    if (!wave_bin.empty()) export_signal_binary(tx, out_path(cfg, wave_bin));

    const MatchedFilter mf(ranging_reference(cfg.waveform));
    const double power = active_mean_power(tx);
    const double snr = budget.per_sample_snr_db(cfg.waveform.sample_rate_hz);
    const double d = cfg.rangesim_distance_m;
    const SampledSignal delayed = propagate(tx, 2.0 * d, std::numeric_limits<double>::infinity(), 0);
    const auto search = DelaySearch::around(round_trip_delay(d), beat_period_samples(cfg.waveform),
                                            cfg.waveform.sample_rate_hz);

    const std::size_t trials = static_cast<std::size_t>(cfg.rangesim_trials);
    std::vector<double> est(trials);
    parallel_for(trials, [&](std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t) {
            const auto rx = add_awgn(delayed, power, snr, mix64(seed) + t);
            est[t] = estimate_delay(mf.correlate(rx), PeakMethod::spline1000, 1000, search).distance_m;
        }
    });
    double mean = 0.0;
    for (double v : est) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : est) var += (v - mean) * (v - mean);
    var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;

    std::printf("distance            %.6g m (%zu trials, %.6g dB in-band SNR)\n", d, trials,
                budget.snr_db);
    std::printf("post E/N0           %.4g dB\n", linear_to_db(rep.e_n0_linear));
    std::printf("mean estimate       %.9g m (bias %+.4g mm)\n", mean, (mean - d) * 1e3);
    std::printf("empirical sigma     %.4g mm\n", std::sqrt(var) * 1e3);
    std::printf("CRLB sigma_x        %.4g mm (ratio %.3f)\n", rep.sigma_x_m * 1e3,
                std::sqrt(var) / rep.sigma_x_m);
    if (!out.empty()) {
        std::string s = "trial,distance_m\n";
        for (std::size_t t = 0; t < trials; ++t)
            s += std::to_string(t) + "," + fmt_g17(est[t]) + "\n";
        write_text_file(out_path(cfg, out), s);
    }
    return 0;
}

int run_sync_demo(const RunConfig& cfg) {
    const double dd = cfg.syncdemo_delta_d_m;
    const SyncToneParams tones = cfg.sync_link.tones;
    const double f_ref = tones.f_ref_hz();
    const auto shifts = tone_phase_shifts(dd, tones.fr1_hz, tones.fr2_hz);
    const double dref = ref_phase_shift(dd, f_ref);
    const double dc1 = carrier_phase_shift_sync(dref, cfg.fc_hz, f_ref);
    std::printf("delta_d             %.6g m\n", dd);
    std::printf("tones               fr1 %.6g Hz, fr2 %.6g Hz, f_ref %.6g Hz\n", tones.fr1_hz,
                tones.fr2_hz, f_ref);
    std::printf("delta phi_1         %.6f deg (unwrapped)\n", rad_to_deg(shifts[0]));
    std::printf("delta phi_2         %.6f deg (unwrapped)\n", rad_to_deg(shifts[1]));
    std::printf("delta phi_ref       %.6f deg\n", rad_to_deg(dref));
    std::printf("delta phi_c1        %.6f deg at f_c %.6g Hz\n", rad_to_deg(dc1), cfg.fc_hz);

    // cross-check over the simulated two-tone link
    SyncLinkConfig link = cfg.sync_link;
    const double p0 = simulate_if_phase(link, 0.0);
    const double p1 = simulate_if_phase(link, dd);
    double meas = rad_to_deg(p1 - p0);
    while (meas > 180.0) meas -= 360.0;
    while (meas < -180.0) meas += 360.0;
    std::printf("measured IF shift   %.6f deg (signal-level self-mixing chain)\n", meas);
    return 0;
}

int run_mc_grid(const RunConfig& cfg, std::uint64_t seed, const std::string& out,
                const std::string& contour_out, const std::string& svg) {
    McConfig mc = cfg.mc_config();
    mc.master_seed = seed;
    const GcSurface surf = run_surface(mc);
    if (!out.empty()) export_surface_csv(surf, out_path(cfg, out));

    std::vector<RequirementContour> contours;
    for (double x : mc.thresholds)
        contours.push_back(requirement_contour(surf, x, mc.probability_target));
    if (!contour_out.empty()) export_contours_csv(contours, out_path(cfg, contour_out));
    if (!svg.empty()) export_contours_svg(contours, mc.sigma_max, out_path(cfg, svg));

    for (const auto& c : contours) {
        double worst = std::numeric_limits<double>::infinity();
        double at = 0.0;
        for (std::size_t t = 0; t < c.theta_deg.size(); ++t) {
            if (c.sigma_max[t] < worst) {
                worst = c.sigma_max[t];
                at = c.theta_deg[t];
            }
        }
        std::printf("P(Gc >= %.2f) >= %.2f: sigma_max %.4g lambda_c at theta %.1f deg (strictest)\n",
                    c.threshold, c.probability, worst, at);
    }
    return 0;
}

int run_experiment_cmd(const RunConfig& cfg, std::uint64_t seed, const std::string& out,
                       const std::string& svg) {
    RunConfig c = cfg;
    c.seed = seed;
    const ExperimentConfig ecfg = c.experiment_config();
    const auto rows = run_experiment(ecfg);
    if (!out.empty()) export_trace(rows, out_path(cfg, out));
    if (!svg.empty()) export_trace_svg(rows, out_path(cfg, svg));

    const auto nulls = analyze_uncorrected(ecfg);
    double min_gc = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) min_gc = std::min(min_gc, r.gc_corrected);
    std::printf("positions           %zu over %.6g m (theta %.1f deg, SNR %.6g dB)\n", rows.size(),
                ecfg.traverse_or_default_m(), ecfg.theta_deg, ecfg.snr_db);
    std::printf("total swept phase   %.2f deg\n", nulls.total_phase_deg);
    std::printf("uncorrected nulls   %d", nulls.null_count);
    for (double p : nulls.null_positions_m) std::printf("  @ %.4f m", p);
    std::printf("\n");
    std::printf("min corrected gain  %.6f\n", min_gc);
    return 0;
}

int run_repro(std::uint64_t seed, double tolerance_scale, std::int64_t mc_iterations,
              std::int64_t trials) {
    ReproOptions opts;
    opts.seed = seed;
    opts.tolerance_scale = tolerance_scale;
    opts.mc_iterations = mc_iterations;
    opts.ensemble_trials = trials;
    const auto results = run_reference_checks(opts);
    std::ostringstream os;
    print_check_table(results, os);
    std::fputs(os.str().c_str(), stdout);
    return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cswarm — open-loop distributed beamforming coordination simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::uint64_t seed_flag = 0;
    int threads = -1;
    std::string out_dir_flag;
    app.add_option("--config", config_path, "structured-text config file");
    auto* seed_opt = app.add_option("--seed", seed_flag, "master seed (env COHERENT_SWARM_SEED as fallback)");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--out-dir", out_dir_flag, "output directory for generated files");

    // crlb
    auto* crlb_cmd = app.add_subcommand("crlb", "print the ranging accuracy budget");
    double bw = 0, snr = 0, pulse_time = 0, noise_bw = 0, f1 = 0;
    int n_pulses = 0;
    std::string crlb_csv;
    auto* o_bw = crlb_cmd->add_option("--bw", bw, "waveform bandwidth [Hz]");
    auto* o_n = crlb_cmd->add_option("--n", n_pulses, "pulse count");
    auto* o_snr = crlb_cmd->add_option("--snr-db", snr, "SNR in the noise bandwidth [dB]");
    auto* o_pt = crlb_cmd->add_option("--pulse-time", pulse_time, "active pulse time [s]");
    auto* o_nbw = crlb_cmd->add_option("--noise-bw", noise_bw, "noise bandwidth [Hz]");
    auto* o_f1 = crlb_cmd->add_option("--f1", f1, "lower tone [Hz]");
    crlb_cmd->add_option("--csv", crlb_csv, "write the report as CSV");

    // range-sim
    auto* rs_cmd = app.add_subcommand("range-sim", "Monte Carlo ranging ensemble");
    double rs_dist = 0, rs_snr = 0;
    std::int64_t rs_trials = 0;
    std::string rs_out, rs_wave_csv, rs_wave_bin;
    auto* o_rsd = rs_cmd->add_option("--distance", rs_dist, "inter-node distance [m]");
    auto* o_rst = rs_cmd->add_option("--trials", rs_trials, "ensemble size");
    auto* o_rss = rs_cmd->add_option("--snr-db", rs_snr, "SNR in the noise bandwidth [dB]");
    rs_cmd->add_option("--out", rs_out, "per-trial estimates CSV");
    rs_cmd->add_option("--export-waveform", rs_wave_csv, "write the TTSFW as CSV");
    rs_cmd->add_option("--export-waveform-bin", rs_wave_bin, "write the TTSFW as binary");

    // sync-demo
    auto* sd_cmd = app.add_subcommand("sync-demo", "displacement-to-phase chain");
    double sd_dd = 0, sd_fref = 0, sd_fc = 0, sd_fr1 = 0;
    auto* o_sdd = sd_cmd->add_option("--delta-d", sd_dd, "displacement [m]");
    auto* o_sdf = sd_cmd->add_option("--fref", sd_fref, "reference frequency [Hz]");
    auto* o_sdc = sd_cmd->add_option("--fc", sd_fc, "carrier frequency [Hz]");
    auto* o_sd1 = sd_cmd->add_option("--fr1", sd_fr1, "lower sync tone [Hz]");

    // mc-grid
    auto* mc_cmd = app.add_subcommand("mc-grid", "coherent-gain requirement surface");
    std::int64_t mc_iters = 0;
    double mc_fc = 0, mc_tstep = 0, mc_smax = 0, mc_sstep = 0, mc_prob = 0;
    std::string mc_thresholds, mc_out, mc_contours, mc_svg, mc_errmodel;
    auto* o_mci = mc_cmd->add_option("--iterations", mc_iters, "trials per grid cell");
    auto* o_mcf = mc_cmd->add_option("--fc", mc_fc, "carrier frequency [Hz]");
    auto* o_mct = mc_cmd->add_option("--thresholds", mc_thresholds, "comma list of Gc thresholds");
    auto* o_mts = mc_cmd->add_option("--theta-step", mc_tstep, "theta grid step [deg]");
    auto* o_msm = mc_cmd->add_option("--sigma-max", mc_smax, "max sigma [lambda_c]");
    auto* o_mss = mc_cmd->add_option("--sigma-step", mc_sstep, "sigma grid step [lambda_c]");
    auto* o_mcp = mc_cmd->add_option("--probability", mc_prob, "target probability");
    auto* o_mce = mc_cmd->add_option("--error-model", mc_errmodel, "shared|independent");
    mc_cmd->add_option("--out", mc_out, "surface CSV");
    mc_cmd->add_option("--contour-out", mc_contours, "requirement contours CSV");
    mc_cmd->add_option("--svg", mc_svg, "contour chart SVG");

    // experiment
    auto* ex_cmd = app.add_subcommand("experiment", "two-node traverse twin");
    double ex_fc = 0, ex_theta = 0, ex_snr = 0, ex_step = 0, ex_trav = 0, ex_d0 = 0;
    int ex_pulses = 0;
    std::string ex_corr, ex_out, ex_svg;
    auto* o_exf = ex_cmd->add_option("--fc", ex_fc, "carrier frequency [Hz]");
    auto* o_ext = ex_cmd->add_option("--theta", ex_theta, "steering angle [deg]");
    auto* o_exs = ex_cmd->add_option("--snr-db", ex_snr, "ranging SNR [dB]");
    auto* o_exc = ex_cmd->add_option("--correction", ex_corr, "on|off|both");
    auto* o_exp = ex_cmd->add_option("--step", ex_step, "position step [m]");
    auto* o_exv = ex_cmd->add_option("--traverse", ex_trav, "traverse length [m] (0 = lambda_c)");
    auto* o_exd = ex_cmd->add_option("--d0", ex_d0, "initial separation [m]");
    auto* o_exn = ex_cmd->add_option("--pulses", ex_pulses, "ranging pulses per position");
    ex_cmd->add_option("--out", ex_out, "trace CSV");
    ex_cmd->add_option("--svg", ex_svg, "trace chart SVG");

    // repro
    auto* rp_cmd = app.add_subcommand("repro", "run every reference-number check");
    double rp_tol = 1.0;
    std::int64_t rp_mc = 5000, rp_trials = 1000;
    rp_cmd->add_option("--tolerance-scale", rp_tol, "scale numeric tolerances (negative control)");
    rp_cmd->add_option("--mc-iterations", rp_mc, "Monte Carlo iterations per cell");
    rp_cmd->add_option("--trials", rp_trials, "ranging ensemble size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (threads >= 0) cfg.threads = threads;
        if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
        set_thread_count(cfg.threads);
        const std::uint64_t seed = resolve_seed(cfg, seed_opt->count() > 0, seed_flag);
        cfg.seed = seed;

        if (crlb_cmd->parsed()) {
            if (o_bw->count()) cfg.waveform.bw_hz = bw;
            if (o_n->count()) cfg.waveform.n_pulses = n_pulses;
            if (o_snr->count()) cfg.snr_db = snr;
            if (o_pt->count()) {
                if (pulse_time <= 0 || pulse_time > cfg.waveform.pri_s)
                    throw std::invalid_argument("--pulse-time must lie in (0, pri]");
                cfg.waveform.duty = pulse_time / cfg.waveform.pri_s;
            }
            if (o_nbw->count()) cfg.noise_bw_hz = noise_bw;
            if (o_f1->count()) cfg.waveform.f1_hz = f1;
            return run_crlb(cfg, crlb_csv);
        }
        if (rs_cmd->parsed()) {
            if (o_rsd->count()) cfg.rangesim_distance_m = rs_dist;
            if (o_rst->count()) cfg.rangesim_trials = rs_trials;
            if (o_rss->count()) cfg.snr_db = rs_snr;
            return run_range_sim(cfg, seed, rs_out, rs_wave_csv, rs_wave_bin);
        }
        if (sd_cmd->parsed()) {
            if (o_sd1->count()) cfg.sync_link.tones.fr1_hz = sd_fr1;
            if (o_sdf->count())
                cfg.sync_link.tones.fr2_hz = cfg.sync_link.tones.fr1_hz + sd_fref;
            if (o_sdc->count()) cfg.fc_hz = sd_fc;
            if (o_sdd->count()) cfg.syncdemo_delta_d_m = sd_dd;
            return run_sync_demo(cfg);
        }
        if (mc_cmd->parsed()) {
            if (o_mci->count()) cfg.mc.iterations = mc_iters;
            if (o_mcf->count()) cfg.fc_hz = mc_fc;
            if (o_mct->count()) {
                std::vector<double> xs;
                std::istringstream ss(mc_thresholds);
                std::string tok;
                while (std::getline(ss, tok, ',')) xs.push_back(std::stod(tok));
                cfg.mc.thresholds = xs;
            }
            if (o_mts->count()) cfg.mc.theta_step_deg = mc_tstep;
            if (o_msm->count()) cfg.mc.sigma_max = mc_smax;
            if (o_mss->count()) cfg.mc.sigma_step = mc_sstep;
            if (o_mcp->count()) cfg.mc.probability_target = mc_prob;
            if (o_mce->count())
                cfg.mc.error_model = mc_errmodel == "independent" ? ErrorModel::independent
                                                                  : ErrorModel::shared;
            return run_mc_grid(cfg, seed, mc_out, mc_contours, mc_svg);
        }
        if (ex_cmd->parsed()) {
            if (o_exf->count()) cfg.fc_hz = ex_fc;
            if (o_ext->count()) cfg.theta_deg = ex_theta;
            if (o_exs->count()) cfg.snr_db = ex_snr;
            if (o_exc->count()) {
                if (ex_corr == "on") cfg.correction = CorrectionMode::on;
                else if (ex_corr == "off") cfg.correction = CorrectionMode::off;
                else if (ex_corr == "both") cfg.correction = CorrectionMode::both;
                else throw std::invalid_argument("--correction expects on|off|both");
            }
            if (o_exp->count()) cfg.step_m = ex_step;
            if (o_exv->count()) cfg.traverse_m = ex_trav;
            if (o_exd->count()) cfg.d0_m = ex_d0;
            if (o_exn->count()) cfg.pulses_per_position = ex_pulses;
            return run_experiment_cmd(cfg, seed, ex_out, ex_svg);
        }
        if (rp_cmd->parsed()) return run_repro(seed, rp_tol, rp_mc, rp_trials);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
