// SPDX-License-Identifier: Apache-2.0
#include "cswarm/config.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "cswarm/io.hpp"

namespace cswarm {

namespace {
std::string fmt_error(int line, int col, const std::string& message) {
    std::ostringstream os;
    os << "line " << line << ", col " << col << ": " << message;
    return os.str();
}
}  // namespace

ConfigError::ConfigError(int line, int col, const std::string& message)
    : std::runtime_error(fmt_error(line, col, message)), line_(line), col_(col) {}

LinkBudget RunConfig::budget() const {
    LinkBudget b;
    b.snr_db = snr_db;
    b.noise_bw_hz = noise_bw_hz;
    b.pulse_time_s = waveform.pulse_time_s();
    b.pulse_count = waveform.n_pulses;
    return b;
}

ExperimentConfig RunConfig::experiment_config() const {
    ExperimentConfig e;
    e.f_c_hz = fc_hz;
    e.traverse_m = traverse_m;
    e.step_m = step_m;
    e.cycles_per_position = cycles_per_position;
    e.snr_db = snr_db;
    e.theta_deg = theta_deg;
    e.correction = correction;
    e.seed = seed.value_or(1);
    e.d0_m = d0_m;
    e.pulses_per_position = pulses_per_position;
    e.calibration_pulses = calibration_pulses;
    e.waveform = waveform;
    e.budget = budget();
    e.sync_link = sync_link;
    e.sync_link.base_distance_m = d0_m;
    return e;
}

McConfig RunConfig::mc_config() const {
    McConfig m = mc;
    m.f_c_hz = fc_hz;
    m.master_seed = seed.value_or(1);
    return m;
}

namespace {

struct Ctx {
    int line = 0;
    int col = 0;
};

double parse_double(const std::string& v, const Ctx& c, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(c.line, c.col, key + ": expected a number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& v, const Ctx& c, const std::string& key) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(c.line, c.col, key + ": expected an integer, got '" + v + "'");
    return x;
}

using Handler = std::function<void(RunConfig&, const std::string&, const Ctx&)>;

Handler pos_double(double RunConfig::* field, const char* key) {
    return [field, key](RunConfig& cfg, const std::string& v, const Ctx& c) {
        const double x = parse_double(v, c, key);
        if (x <= 0.0) throw ConfigError(c.line, c.col, std::string(key) + ": must be positive");
        cfg.*field = x;
    };
}

Handler any_double(double RunConfig::* field, const char* key) {
    return [field, key](RunConfig& cfg, const std::string& v, const Ctx& c) {
        cfg.*field = parse_double(v, c, key);
    };
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"seed",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             char* end = nullptr;
             cfg.seed = std::strtoull(v.c_str(), &end, 10);
             if (end == v.c_str() || *end != '\0')
                 throw ConfigError(c.line, c.col, "seed: expected an unsigned integer");
         }},
        {"threads",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "threads");
             if (x < 0) throw ConfigError(c.line, c.col, "threads: must be >= 0");
             cfg.threads = static_cast<int>(x);
         }},
        {"out_dir",
         [](RunConfig& cfg, const std::string& v, const Ctx&) { cfg.out_dir = v; }},
        {"verbosity",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.verbosity = static_cast<int>(parse_int(v, c, "verbosity"));
         }},
        {"fc_hz", pos_double(&RunConfig::fc_hz, "fc_hz")},
        {"snr_db", any_double(&RunConfig::snr_db, "snr_db")},
        {"waveform.f1_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "waveform.f1_hz");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "waveform.f1_hz: must be positive");
             cfg.waveform.f1_hz = x;
         }},
        {"waveform.bw_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "waveform.bw_hz");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "waveform.bw_hz: must be positive");
             cfg.waveform.bw_hz = x;
         }},
        {"waveform.n_pulses",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "waveform.n_pulses");
             if (x < 1) throw ConfigError(c.line, c.col, "waveform.n_pulses: must be >= 1");
             cfg.waveform.n_pulses = static_cast<int>(x);
         }},
        {"waveform.pri_s",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "waveform.pri_s");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "waveform.pri_s: must be positive");
             cfg.waveform.pri_s = x;
         }},
        {"waveform.duty",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "waveform.duty");
             if (x <= 0.0 || x > 1.0)
                 throw ConfigError(c.line, c.col, "waveform.duty: must be in (0, 1]");
             cfg.waveform.duty = x;
         }},
        {"waveform.sample_rate_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "waveform.sample_rate_hz");
             if (x <= 0.0)
                 throw ConfigError(c.line, c.col, "waveform.sample_rate_hz: must be positive");
             cfg.waveform.sample_rate_hz = x;
         }},
        {"budget.noise_bw_hz", pos_double(&RunConfig::noise_bw_hz, "budget.noise_bw_hz")},
        {"sync.fr1_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.sync_link.tones.fr1_hz = parse_double(v, c, "sync.fr1_hz");
         }},
        {"sync.fr2_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.sync_link.tones.fr2_hz = parse_double(v, c, "sync.fr2_hz");
         }},
        {"sync.lpf_cutoff_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "sync.lpf_cutoff_hz");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "sync.lpf_cutoff_hz: must be positive");
             cfg.sync_link.mixer.lpf_cutoff_hz = x;
         }},
        {"sync.baseband_fr1_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "sync.baseband_fr1_hz");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "sync.baseband_fr1_hz: must be positive");
             cfg.sync_link.baseband_fr1_hz = x;
         }},
        {"sync.sample_rate_hz",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "sync.sample_rate_hz");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "sync.sample_rate_hz: must be positive");
             cfg.sync_link.sample_rate_hz = x;
         }},
        {"sync.n_samples",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "sync.n_samples");
             if (x < 16) throw ConfigError(c.line, c.col, "sync.n_samples: must be >= 16");
             cfg.sync_link.n_samples = static_cast<std::size_t>(x);
         }},
        {"sync.base_distance_m",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "sync.base_distance_m");
             if (x < 0.0) throw ConfigError(c.line, c.col, "sync.base_distance_m: must be >= 0");
             cfg.sync_link.base_distance_m = x;
         }},
        {"experiment.traverse_m",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "experiment.traverse_m");
             if (x < 0.0) throw ConfigError(c.line, c.col, "experiment.traverse_m: must be >= 0");
             cfg.traverse_m = x;
         }},
        {"experiment.step_m", pos_double(&RunConfig::step_m, "experiment.step_m")},
        {"experiment.cycles_per_position",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "experiment.cycles_per_position");
             if (x < 1)
                 throw ConfigError(c.line, c.col, "experiment.cycles_per_position: must be >= 1");
             cfg.cycles_per_position = static_cast<int>(x);
         }},
        {"experiment.theta_deg", any_double(&RunConfig::theta_deg, "experiment.theta_deg")},
        {"experiment.correction",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             if (v == "on") cfg.correction = CorrectionMode::on;
             else if (v == "off") cfg.correction = CorrectionMode::off;
             else if (v == "both") cfg.correction = CorrectionMode::both;
             else throw ConfigError(c.line, c.col, "experiment.correction: expected on|off|both");
         }},
        {"experiment.d0_m", pos_double(&RunConfig::d0_m, "experiment.d0_m")},
        {"experiment.pulses_per_position",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "experiment.pulses_per_position");
             if (x < 1)
                 throw ConfigError(c.line, c.col, "experiment.pulses_per_position: must be >= 1");
             cfg.pulses_per_position = static_cast<int>(x);
         }},
        {"experiment.calibration_pulses",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "experiment.calibration_pulses");
             if (x < 1)
                 throw ConfigError(c.line, c.col, "experiment.calibration_pulses: must be >= 1");
             cfg.calibration_pulses = static_cast<int>(x);
         }},
        {"mc.iterations",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "mc.iterations");
             if (x < 1) throw ConfigError(c.line, c.col, "mc.iterations: must be >= 1");
             cfg.mc.iterations = x;
         }},
        {"mc.thresholds",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             std::vector<double> xs;
             std::istringstream ss(v);
             std::string tok;
             while (std::getline(ss, tok, ',')) xs.push_back(parse_double(tok, c, "mc.thresholds"));
             if (xs.empty()) throw ConfigError(c.line, c.col, "mc.thresholds: empty list");
             for (double x : xs)
                 if (x <= 0.0 || x > 1.0)
                     throw ConfigError(c.line, c.col, "mc.thresholds: values must lie in (0, 1]");
             cfg.mc.thresholds = xs;
         }},
        {"mc.theta_start_deg",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.mc.theta_start_deg = parse_double(v, c, "mc.theta_start_deg");
         }},
        {"mc.theta_stop_deg",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.mc.theta_stop_deg = parse_double(v, c, "mc.theta_stop_deg");
         }},
        {"mc.theta_step_deg",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "mc.theta_step_deg");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "mc.theta_step_deg: must be positive");
             cfg.mc.theta_step_deg = x;
         }},
        {"mc.sigma_max",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "mc.sigma_max");
             if (x < 0.0) throw ConfigError(c.line, c.col, "mc.sigma_max: must be >= 0");
             cfg.mc.sigma_max = x;
         }},
        {"mc.sigma_step",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "mc.sigma_step");
             if (x <= 0.0) throw ConfigError(c.line, c.col, "mc.sigma_step: must be positive");
             cfg.mc.sigma_step = x;
         }},
        {"mc.probability_target",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const double x = parse_double(v, c, "mc.probability_target");
             if (x <= 0.0 || x > 1.0)
                 throw ConfigError(c.line, c.col, "mc.probability_target: must be in (0, 1]");
             cfg.mc.probability_target = x;
         }},
        {"mc.error_model",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             if (v == "shared") cfg.mc.error_model = ErrorModel::shared;
             else if (v == "independent") cfg.mc.error_model = ErrorModel::independent;
             else throw ConfigError(c.line, c.col, "mc.error_model: expected shared|independent");
         }},
        {"rangesim.distance_m", pos_double(&RunConfig::rangesim_distance_m, "rangesim.distance_m")},
        {"rangesim.trials",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             const long long x = parse_int(v, c, "rangesim.trials");
             if (x < 1) throw ConfigError(c.line, c.col, "rangesim.trials: must be >= 1");
             cfg.rangesim_trials = x;
         }},
        {"syncdemo.delta_d_m",
         [](RunConfig& cfg, const std::string& v, const Ctx& c) {
             cfg.syncdemo_delta_d_m = parse_double(v, c, "syncdemo.delta_d_m");
         }},
    };
    return h;
}

std::string trim(const std::string& s, std::size_t* first_col = nullptr) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) {
        if (first_col) *first_col = 0;
        return "";
    }
    if (first_col) *first_col = a;
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        const std::string uncommented = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::size_t key_col = 0;
        const std::string line = trim(uncommented, &key_col);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, static_cast<int>(key_col) + 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::size_t val_off = 0;
        const std::string value = trim(line.substr(eq + 1), &val_off);
        Ctx ctx{line_no, static_cast<int>(key_col + eq + 1 + val_off) + 1};
        const auto& h = handlers();
        auto it = h.find(key);
        if (it == h.end())
            throw ConfigError(line_no, static_cast<int>(key_col) + 1, "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(ctx.line, ctx.col, key + ": empty value");
        it->second(cfg, value, ctx);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) { return parse_config(read_text_file(path)); }

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    if (cfg.seed) os << "seed = " << *cfg.seed << '\n';
    os << "threads = " << cfg.threads << '\n';
    os << "out_dir = " << cfg.out_dir << '\n';
    os << "verbosity = " << cfg.verbosity << '\n';
    os << "fc_hz = " << fmt_g17(cfg.fc_hz) << '\n';
    os << "snr_db = " << fmt_g17(cfg.snr_db) << '\n';
    os << "waveform.f1_hz = " << fmt_g17(cfg.waveform.f1_hz) << '\n';
    os << "waveform.bw_hz = " << fmt_g17(cfg.waveform.bw_hz) << '\n';
    os << "waveform.n_pulses = " << cfg.waveform.n_pulses << '\n';
    os << "waveform.pri_s = " << fmt_g17(cfg.waveform.pri_s) << '\n';
    os << "waveform.duty = " << fmt_g17(cfg.waveform.duty) << '\n';
    os << "waveform.sample_rate_hz = " << fmt_g17(cfg.waveform.sample_rate_hz) << '\n';
    os << "budget.noise_bw_hz = " << fmt_g17(cfg.noise_bw_hz) << '\n';
    os << "sync.fr1_hz = " << fmt_g17(cfg.sync_link.tones.fr1_hz) << '\n';
    os << "sync.fr2_hz = " << fmt_g17(cfg.sync_link.tones.fr2_hz) << '\n';
    os << "sync.lpf_cutoff_hz = " << fmt_g17(cfg.sync_link.mixer.lpf_cutoff_hz) << '\n';
    os << "sync.baseband_fr1_hz = " << fmt_g17(cfg.sync_link.baseband_fr1_hz) << '\n';
    os << "sync.sample_rate_hz = " << fmt_g17(cfg.sync_link.sample_rate_hz) << '\n';
    os << "sync.n_samples = " << cfg.sync_link.n_samples << '\n';
    os << "sync.base_distance_m = " << fmt_g17(cfg.sync_link.base_distance_m) << '\n';
    os << "experiment.traverse_m = " << fmt_g17(cfg.traverse_m) << '\n';
    os << "experiment.step_m = " << fmt_g17(cfg.step_m) << '\n';
    os << "experiment.cycles_per_position = " << cfg.cycles_per_position << '\n';
    os << "experiment.theta_deg = " << fmt_g17(cfg.theta_deg) << '\n';
    os << "experiment.correction = "
       << (cfg.correction == CorrectionMode::on
               ? "on"
               : cfg.correction == CorrectionMode::off ? "off" : "both")
       << '\n';
    os << "experiment.d0_m = " << fmt_g17(cfg.d0_m) << '\n';
    os << "experiment.pulses_per_position = " << cfg.pulses_per_position << '\n';
    os << "experiment.calibration_pulses = " << cfg.calibration_pulses << '\n';
    os << "mc.iterations = " << cfg.mc.iterations << '\n';
    os << "mc.thresholds = ";
    for (std::size_t i = 0; i < cfg.mc.thresholds.size(); ++i)
        os << (i ? "," : "") << fmt_g17(cfg.mc.thresholds[i]);
    os << '\n';
    os << "mc.theta_start_deg = " << fmt_g17(cfg.mc.theta_start_deg) << '\n';
    os << "mc.theta_stop_deg = " << fmt_g17(cfg.mc.theta_stop_deg) << '\n';
    os << "mc.theta_step_deg = " << fmt_g17(cfg.mc.theta_step_deg) << '\n';
    os << "mc.sigma_max = " << fmt_g17(cfg.mc.sigma_max) << '\n';
    os << "mc.sigma_step = " << fmt_g17(cfg.mc.sigma_step) << '\n';
    os << "mc.probability_target = " << fmt_g17(cfg.mc.probability_target) << '\n';
    os << "mc.error_model = "
       << (cfg.mc.error_model == ErrorModel::shared ? "shared" : "independent") << '\n';
    os << "rangesim.distance_m = " << fmt_g17(cfg.rangesim_distance_m) << '\n';
    os << "rangesim.trials = " << cfg.rangesim_trials << '\n';
    os << "syncdemo.delta_d_m = " << fmt_g17(cfg.syncdemo_delta_d_m) << '\n';
    return os.str();
}

}  // namespace cswarm
