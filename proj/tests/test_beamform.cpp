// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cswarm/beamform.hpp"
#include "cswarm/constants.hpp"

using namespace cswarm;
using cd = std::complex<double>;

namespace {
const double kFc = 1.5e9;
const double kLambda = kSpeedOfLight / kFc;
}  // namespace

TEST_CASE("steering phase") {
    CHECK(steering_phase(0.37, 0.0, kFc) == 0.0);
    CHECK(rad_to_deg(steering_phase(kLambda, 90.0, kFc)) == doctest::Approx(-360.0));
    CHECK(rad_to_deg(steering_phase(kLambda, 270.0, kFc)) == doctest::Approx(360.0));
    // at 270 deg the steering term cancels the sync term exactly
    const double dphi_c1 = -kTwoPi * kFc / kSpeedOfLight * kLambda;  // one wavelength
    CHECK(total_phase(dphi_c1, steering_phase(kLambda, 270.0, kFc)) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("total phase") {
    CHECK(total_phase(0.0, 0.0) == 0.0);
    const double dphi_c1 = -kTwoPi;  // one wavelength on the sync path
    const double dphi_c2 = steering_phase(kLambda, 90.0, kFc);
    CHECK(rad_to_deg(total_phase(dphi_c1, dphi_c2)) == doctest::Approx(-720.0));
}

TEST_CASE("coherent sum") {
    NodeEmission a{}, b{};
    CHECK(std::abs(coherent_sum({a, b}) - cd{2.0, 0.0}) < 1e-15);

    b.residual_error_rad = kPi;
    CHECK(std::abs(coherent_sum({a, b})) < 1e-15);

    b.residual_error_rad = deg_to_rad(36.87);
    const double gc = std::norm(coherent_sum({a, b})) / 4.0;
    CHECK(gc == doctest::Approx(0.900).epsilon(2e-4));
}

TEST_CASE("coherent sum rejects a frequency mismatch") {
    NodeEmission a{}, b{};
    b.carrier_hz = a.carrier_hz * 1.000001;
    CHECK_THROWS_AS(coherent_sum({a, b}), std::invalid_argument);
}

TEST_CASE("coherent gain closed form over 100 angles") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double psi = -6.0 + 12.0 * static_cast<double>(i) / 99.0;
        NodeEmission a{}, b{};
        b.residual_error_rad = psi;
        const double gc = coherent_gain({a, b}).gc;
        worst = std::max(worst, std::fabs(gc - std::cos(psi / 2) * std::cos(psi / 2)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("gc of 0.9 is about half a dB of degradation") {
    CHECK(linear_to_db(0.9) == doctest::Approx(-0.458).epsilon(1e-3));
}

TEST_CASE("gc bounds and trivial cases") {
    NodeEmission a{}, b{}, c{};
    b.residual_error_rad = 0.4;
    c.residual_error_rad = -1.1;
    const auto r = coherent_gain({a, b, c});
    CHECK(r.gc >= 0.0);
    CHECK(r.gc <= 1.0);
    CHECK(r.gc == doctest::Approx(r.coherent_power / r.ideal_power));

    const auto perfect = coherent_gain({a, a, a});
    CHECK(perfect.gc == doctest::Approx(1.0));
}

TEST_CASE("gc invariances") {
    NodeEmission a{}, b{};
    a.residual_error_rad = 0.2;
    b.residual_error_rad = 0.9;
    const double base = coherent_gain({a, b}).gc;

    // common rotation
    NodeEmission ar = a, br = b;
    ar.residual_error_rad += 1.234;
    br.residual_error_rad += 1.234;
    CHECK(coherent_gain({ar, br}).gc == doctest::Approx(base).epsilon(1e-12));

    // uniform amplitude scale
    NodeEmission as = a, bs = b;
    as.amplitude *= 3.7;
    bs.amplitude *= 3.7;
    CHECK(coherent_gain({as, bs}).gc == doctest::Approx(base).epsilon(1e-12));

    // gc = 1 iff residual phases coincide (mod 2 pi)
    NodeEmission eq1{}, eq2{};
    eq1.residual_error_rad = 0.7;
    eq2.residual_error_rad = 0.7 + kTwoPi;
    CHECK(coherent_gain({eq1, eq2}).gc == doctest::Approx(1.0).epsilon(1e-12));
    eq2.residual_error_rad = 0.71;
    CHECK(coherent_gain({eq1, eq2}).gc < 1.0);
}

TEST_CASE("all-zero amplitudes rejected") {
    NodeEmission a{}, b{};
    a.amplitude = 0.0;
    b.amplitude = 0.0;
    CHECK_THROWS_AS(coherent_gain({a, b}), std::invalid_argument);
}

TEST_CASE("complex channel gains participate in both sums") {
    NodeEmission a{}, b{};
    a.channel_gain = {0.0, 1.0};
    b.channel_gain = {0.0, 1.0};
    b.residual_error_rad = 0.5;
    CHECK(coherent_gain({a, b}).gc ==
          doctest::Approx(std::cos(0.25) * std::cos(0.25)).epsilon(1e-12));
}
