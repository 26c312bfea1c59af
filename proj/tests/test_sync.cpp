// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "cswarm/channel.hpp"
#include "cswarm/constants.hpp"
#include "cswarm/fft.hpp"
#include "cswarm/sync.hpp"
#include "cswarm/waveform.hpp"

using namespace cswarm;
using cd = std::complex<double>;

namespace {

/// Two-tone real mixer input at baseband 20/30 MHz, 102.4 MS/s, with the
/// given per-tone phases.
SampledSignal mixer_input(double phi1, double phi2) {
    SyncToneParams tones{};
    const double offset = tones.fr1_hz - 20e6;
    return generate_sync_tones(tones, 16384.0 / 102.4e6, 102.4e6, {phi1, phi2}, offset);
}

double wrap_deg(double deg) {
    while (deg > 180.0) deg -= 360.0;
    while (deg < -180.0) deg += 360.0;
    return deg;
}

}  // namespace

TEST_CASE("mixer output phase is phi2 - phi1") {
    MixerChainConfig cfg{};
    {
        const auto rf = mixer_input(0.0, 0.0);
        const auto out = self_mix(rf, rf, cfg);
        CHECK(std::fabs(measure_tone_phase(out, 10e6)) < 1e-9);
    }
    {
        const auto rf = mixer_input(deg_to_rad(30.0), deg_to_rad(75.0));
        const auto out = self_mix(rf, rf, cfg);
        CHECK(rad_to_deg(measure_tone_phase(out, 10e6)) == doctest::Approx(45.0).epsilon(1e-9));
    }
}

TEST_CASE("mixer spur rejection: 60 dB contract") {
    MixerChainConfig cfg{};
    const auto rf = mixer_input(0.3, -0.7);

    // product before filtering carries the mixer spurs
    const std::size_t n = rf.size();
    std::vector<cd> prod(n);
    for (std::size_t i = 0; i < n; ++i)
        prod[i] = {rf.samples[i].real() * rf.samples[i].real(), 0.0};
    auto spec_raw = fft_forward_padded(prod, n);
    const double bin_hz = 102.4e6 / static_cast<double>(n);
    auto bin_mag = [&](const std::vector<cd>& s, double f) {
        return std::abs(s[static_cast<std::size_t>(std::llround(f / bin_hz))]);
    };
    const double ref_mag = bin_mag(spec_raw, 10e6);
    CHECK(bin_mag(spec_raw, 40e6) / ref_mag > 0.1);  // 2*fr1 spur present pre-filter
    CHECK(bin_mag(spec_raw, 50e6) / ref_mag > 0.1);  // fr1+fr2
    CHECK(std::abs(spec_raw[0]) / ref_mag > 0.1);    // DC product term

    // after the chain every non-reference component sits >= 60 dB down
    const auto out = self_mix(rf, rf, cfg);
    auto spec = fft_forward_padded(out.samples, n);
    const std::size_t ref_bin = static_cast<std::size_t>(std::llround(10e6 / bin_hz));
    const double main = std::abs(spec[ref_bin]);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k >= ref_bin - 2 && k <= ref_bin + 2) continue;
        if (n - k >= ref_bin - 2 && n - k <= ref_bin + 2) continue;  // conjugate image
        worst = std::max(worst, std::abs(spec[k]));
    }
    CHECK(linear_to_db(main * main / (worst * worst)) >= 60.0);
}

TEST_CASE("mixer rejects a cutoff at or below the reference") {
    MixerChainConfig bad{};
    bad.lpf_cutoff_hz = 9e6;
    CHECK_THROWS_AS(bad.validate(20e6), std::invalid_argument);
    MixerChainConfig spur{};
    spur.lpf_cutoff_hz = 45e6;  // would pass the 40 MHz spur
    CHECK_THROWS_AS(spur.validate(20e6), std::invalid_argument);
}

TEST_CASE("reference phase shift formula") {
    CHECK(ref_phase_shift(0.0, 10e6) == 0.0);
    CHECK(rad_to_deg(ref_phase_shift(1.0, 10e6)) == doctest::Approx(-12.0083).epsilon(1e-4));
    CHECK(ref_phase_shift(2.0, 10e6) < ref_phase_shift(1.0, 10e6));  // grows more negative
}

TEST_CASE("carrier scaling of the reference shift") {
    const double f_c = 1.5e9;
    const double lambda = kSpeedOfLight / f_c;
    // one wavelength of displacement: exactly one carrier cycle
    const double dref = ref_phase_shift(lambda, 10e6);
    CHECK(rad_to_deg(carrier_phase_shift_sync(dref, f_c, 10e6)) == doctest::Approx(-360.0));
    // 1 m: the x150 scaling of -12.0083 deg
    CHECK(rad_to_deg(carrier_phase_shift_sync(ref_phase_shift(1.0, 10e6), f_c, 10e6)) ==
          doctest::Approx(-1801.25).epsilon(1e-4));
    CHECK(carrier_phase_shift_sync(0.0, f_c, 10e6) == 0.0);
    CHECK_THROWS_AS(carrier_phase_shift_sync(1.0, f_c, 0.0), std::invalid_argument);
}

TEST_CASE("per-tone shifts and their difference") {
    const auto zero = tone_phase_shifts(0.0, 4.30e9, 4.31e9);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    const auto one = tone_phase_shifts(1.0, 4.30e9, 4.31e9);
    CHECK(rad_to_deg(one[0]) == doctest::Approx(-5163.6).epsilon(1e-4));
    for (double dd : {0.1, 0.5, 1.7, 3.2}) {
        const auto s = tone_phase_shifts(dd, 4.30e9, 4.31e9);
        CHECK(s[1] - s[0] == doctest::Approx(ref_phase_shift(dd, 10e6)).epsilon(1e-12));
    }
}

TEST_CASE("phase shifts are linear in displacement and frequency") {
    CHECK(ref_phase_shift(2.0, 10e6) == doctest::Approx(2.0 * ref_phase_shift(1.0, 10e6)));
    CHECK(ref_phase_shift(1.0, 20e6) == doctest::Approx(2.0 * ref_phase_shift(1.0, 10e6)));
}

TEST_CASE("signal-level chain matches the formula within 0.1 deg") {
    SyncLinkConfig link{};
    const double base = simulate_if_phase(link, 0.0);
    for (double dd : {0.2, 1.0, 2.5}) {
        const double meas = wrap_deg(rad_to_deg(simulate_if_phase(link, dd) - base));
        const double want = wrap_deg(rad_to_deg(ref_phase_shift(dd, 10e6)));
        CHECK(std::fabs(meas - want) < 0.1);
    }
}

TEST_CASE("carrier correction is invariant to the tone pair at fixed f_ref") {
    double first = 0.0;
    bool have_first = false;
    for (double fr1 : {4.30e9, 2.0e9, 3.1e9, 5.0e9, 6.1637e9}) {
        SyncLinkConfig link{};
        link.tones.fr1_hz = fr1;
        link.tones.fr2_hz = fr1 + 10e6;
        const double dphi =
            wrap_deg(rad_to_deg(simulate_if_phase(link, 1.0) - simulate_if_phase(link, 0.0)));
        const double dphi_c1 = dphi * (1.5e9 / 10e6);
        if (!have_first) {
            first = dphi_c1;
            have_first = true;
        } else {
            CHECK(dphi_c1 == doctest::Approx(first).epsilon(1e-8));
        }
    }
}

TEST_CASE("cable mismatch shifts the constant, not the displacement response") {
    // LO = RF through a short mismatch cable (per-tone constants c1, c2)
    SyncLinkConfig link{};
    MixerChainConfig cfg{};
    const double cable_delay_s = 0.8e-9;
    auto with_mismatch = [&](double dd) {
        const double offset = link.tones.fr1_hz - link.baseband_fr1_hz;
        const double duration = static_cast<double>(link.n_samples) / link.sample_rate_hz;
        auto tx = generate_sync_tones(link.tones, duration, link.sample_rate_hz, {0.0, 0.0}, offset);
        auto rf = propagate(tx, link.base_distance_m + dd,
                            std::numeric_limits<double>::infinity(), 0, offset);
        auto lo = propagate(rf, cable_delay_s * kSpeedOfLight,
                            std::numeric_limits<double>::infinity(), 0, offset);
        return measure_tone_phase(self_mix(rf, lo, cfg), 10e6);
    };
    SyncLinkConfig clean = link;
    const double base_clean = simulate_if_phase(clean, 0.0);
    const double base_mis = with_mismatch(0.0);
    const double shift_const = wrap_deg(rad_to_deg(base_mis - base_clean));
    CHECK(std::fabs(shift_const) > 0.01);  // the constant actually moved
    for (double dd : {0.5, 1.5}) {
        const double resp_clean = wrap_deg(rad_to_deg(simulate_if_phase(clean, dd) - base_clean));
        const double resp_mis = wrap_deg(rad_to_deg(with_mismatch(dd) - base_mis));
        CHECK(std::fabs(resp_mis - resp_clean) < 0.05);  // displacement response unchanged
    }
}

TEST_CASE("phase state accumulates the unwrapped chain") {
    SyncToneParams tones{};
    PhaseState s{};
    const double f_c = 1.5e9;
    s = advance_phase_state(s, 0.02, 0.02, 90.0, tones, f_c);
    s = advance_phase_state(s, 0.02, 0.02, 90.0, tones, f_c);
    CHECK(s.phi5 == doctest::Approx(s.phi2 - s.phi1));
    CHECK(s.dphi_ref == doctest::Approx(ref_phase_shift(0.04, 10e6)));
    CHECK(s.dphi_c == doctest::Approx(s.dphi_c1 + s.dphi_c2));
    // co-moving at 90 deg: the two carrier terms match
    CHECK(s.dphi_c1 == doctest::Approx(s.dphi_c2).epsilon(1e-9));
}

TEST_CASE("pll lock follows the demodulated tone power") {
    MixerChainConfig cfg{};
    const auto rf = mixer_input(0.0, 0.0);
    const auto out = self_mix(rf, rf, cfg);
    PllModel pll{};
    CHECK(pll.locked(out, 10e6));
    CHECK(pll.frequency_offset_hz(true, 1.5e9) == 0.0);
    CHECK(pll.frequency_offset_hz(false, 1.5e9) == doctest::Approx(1.5e3));

    SampledSignal quiet = out;
    for (auto& v : quiet.samples) v *= 1e-4;
    CHECK_FALSE(pll.locked(quiet, 10e6));
}

TEST_CASE("reference separation of the experiment tones is 10 MHz") {
    SyncToneParams tones{};
    CHECK(tones.fr1_hz == doctest::Approx(4.30e9));
    CHECK(tones.fr2_hz == doctest::Approx(4.31e9));
    CHECK(tones.f_ref_hz() == doctest::Approx(10e6));
}
