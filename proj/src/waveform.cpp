// SPDX-License-Identifier: Apache-2.0
#include "cswarm/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cswarm/constants.hpp"
#include "cswarm/io.hpp"
#include "cswarm/kernels.hpp"

namespace cswarm {

void TtsfwParams::validate() const {
    if (f1_hz <= 0.0) throw std::invalid_argument("TtsfwParams: f1 must be positive");
    if (bw_hz <= 0.0) throw std::invalid_argument("TtsfwParams: bw must be positive");
    if (n_pulses < 1) throw std::invalid_argument("TtsfwParams: n_pulses must be >= 1");
    if (pri_s <= 0.0) throw std::invalid_argument("TtsfwParams: pri must be positive");
    if (duty <= 0.0 || duty > 1.0) throw std::invalid_argument("TtsfwParams: duty must be in (0, 1]");
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("TtsfwParams: sample_rate must be positive");
    const double f_max = f2_hz() + (n_pulses - 1) * freq_step_hz();
    if (f_max >= sample_rate_hz / 2.0)
        throw std::invalid_argument("TtsfwParams: highest tone violates Nyquist");
}

void SyncToneParams::validate() const {
    if (fr2_hz <= fr1_hz) throw std::invalid_argument("SyncToneParams: fr2 must exceed fr1");
}

SampledSignal generate_ttsfw(const TtsfwParams& p) {
    p.validate();
    const double fs = p.sample_rate_hz;
    const std::size_t total = sample_count(p.n_pulses * p.pri_s * fs);
    const std::size_t per_pri = sample_count(p.pri_s * fs);  // rounds down
    const std::size_t active = sample_count(p.pulse_time_s() * fs);

    SampledSignal sig;
    sig.sample_rate_hz = fs;
    sig.samples.assign(total, {0.0, 0.0});

    const double amp = 1.0 / static_cast<double>(p.n_pulses);
    const double step = p.freq_step_hz();
    for (int n = 0; n < p.n_pulses; ++n) {
        const std::size_t start = static_cast<std::size_t>(n) * per_pri;
        const std::size_t len = std::min(active, total - start);
        if (len == 0) continue;
        const double fa = p.f1_hz + n * step;
        const double fb = p.f2_hz() + n * step;
        const double w1 = kTwoPi * fa / fs;
        const double w2 = kTwoPi * fb / fs;
        // tone phases are referenced to absolute t = 0 (continuous across pulses)
        const double t0 = static_cast<double>(start);
        kernels::two_tone_accum(sig.samples.data() + start, len, w1, t0 * w1, w2, t0 * w2);
    }
    if (amp != 1.0) {
        for (auto& s : sig.samples) s *= amp;
    }
    return sig;
}

SampledSignal generate_sync_tones(const SyncToneParams& p, double duration_s, double sample_rate_hz,
                                  std::array<double, 2> phase_offsets_rad, double baseband_offset_hz) {
    p.validate();
    const double fa = p.fr1_hz - baseband_offset_hz;
    const double fb = p.fr2_hz - baseband_offset_hz;
    if (fa <= 0.0) throw std::invalid_argument("generate_sync_tones: baseband tone below DC");
    if (fb >= sample_rate_hz / 2.0)
        throw std::invalid_argument("generate_sync_tones: baseband tone violates Nyquist");
    const std::size_t n = sample_count(duration_s * sample_rate_hz);
    if (n == 0) throw std::invalid_argument("generate_sync_tones: empty duration");

    SampledSignal sig;
    sig.sample_rate_hz = sample_rate_hz;
    sig.samples.assign(n, {0.0, 0.0});
    kernels::two_tone_accum(sig.samples.data(), n, kTwoPi * fa / sample_rate_hz,
                            phase_offsets_rad[0], kTwoPi * fb / sample_rate_hz,
                            phase_offsets_rad[1]);
    return sig;
}

void export_signal_csv(const SampledSignal& sig, std::ostream& os) {
    os << "index,t_seconds,re,im\n";
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const double t = sig.t0_s + static_cast<double>(i) / sig.sample_rate_hz;
        os << i << ',' << fmt_g17(t) << ',' << fmt_g17(sig.samples[i].real()) << ','
           << fmt_g17(sig.samples[i].imag()) << '\n';
    }
}

void export_signal_csv(const SampledSignal& sig, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    export_signal_csv(sig, os);
}

namespace {
constexpr char kMagic[4] = {'C', 'S', 'W', 'V'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void export_signal_binary(const SampledSignal& sig, std::ostream& os) {
    os.write(kMagic, 4);
    std::uint32_t ver = kVersion;
    os.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    os.write(reinterpret_cast<const char*>(&sig.sample_rate_hz), sizeof(double));
    // interleaved re/im float64, little-endian (native on every supported target)
    for (const auto& s : sig.samples) {
        const double re = s.real(), im = s.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof(double));
        os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    if (!os) throw std::runtime_error("binary signal write failed");
}

void export_signal_binary(const SampledSignal& sig, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    export_signal_binary(sig, os);
}

SampledSignal import_signal_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("binary signal: bad magic");
    std::uint32_t ver = 0;
    is.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    if (!is || ver != kVersion) throw std::runtime_error("binary signal: unsupported version");
    SampledSignal sig;
    is.read(reinterpret_cast<char*>(&sig.sample_rate_hz), sizeof(double));
    double buf[2];
    while (is.read(reinterpret_cast<char*>(buf), sizeof(buf)))
        sig.samples.emplace_back(buf[0], buf[1]);
    return sig;
}

}  // namespace cswarm
