// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "cswarm/montecarlo.hpp"
#include "cswarm/parallel.hpp"
#include "cswarm/rng.hpp"

using namespace cswarm;

namespace {

McConfig desk_config() {
    McConfig cfg{};
    cfg.iterations = 5000;
    cfg.master_seed = 1;
    return cfg;
}

std::size_t theta_index(const GcSurface& s, double theta) {
    for (std::size_t i = 0; i < s.theta_deg.size(); ++i)
        if (s.theta_deg[i] == theta) return i;
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_CASE("zero ranging error passes every threshold everywhere") {
    McConfig cfg = desk_config();
    cfg.iterations = 500;
    cfg.theta_step_deg = 30.0;
    const auto surf = run_surface(cfg);
    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t)
        for (std::size_t x = 0; x < surf.thresholds.size(); ++x)
            CHECK(surf.at(t, 0, x) == 1.0);  // sigma grid starts at 0
}

TEST_CASE("shared error model cancels exactly at 270 degrees") {
    const auto surf = run_surface(desk_config());
    const std::size_t t = theta_index(surf, 270.0);
    for (std::size_t s = 0; s < surf.sigma_over_lambda.size(); ++s)
        for (std::size_t x = 0; x < surf.thresholds.size(); ++x)
            CHECK(surf.at(t, s, x) == 1.0);
}

TEST_CASE("requirement contour at the design point") {
    const auto surf = run_surface(desk_config());
    const auto contour = requirement_contour(surf, 0.9, 0.9);
    const double at90 = contour.sigma_max[theta_index(surf, 90.0)];
    CHECK(at90 >= 0.029);
    CHECK(at90 <= 0.033);
    CHECK(std::isinf(contour.sigma_max[theta_index(surf, 270.0)]));

    // nested thresholds: the 0.6 contour sits strictly above the 0.9 contour
    const auto loose = requirement_contour(surf, 0.6, 0.9);
    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t) {
        if (std::isinf(contour.sigma_max[t])) continue;
        CHECK(loose.sigma_max[t] > contour.sigma_max[t]);
    }
}

TEST_CASE("surface is monotone non-increasing in sigma away from 270") {
    const auto surf = run_surface(desk_config());
    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t) {
        if (surf.theta_deg[t] == 270.0) continue;
        for (std::size_t x = 0; x < surf.thresholds.size(); ++x)
            for (std::size_t s = 1; s < surf.sigma_over_lambda.size(); ++s)
                CHECK(surf.at(t, s, x) <= surf.at(t, s - 1, x));
    }
}

TEST_CASE("symmetry about end-fire: theta and 180 - theta agree") {
    const auto surf = run_surface(desk_config());
    const double tol = 2.0 / std::sqrt(5000.0);
    for (double th : {30.0, 60.0, 89.0}) {
        const std::size_t a = theta_index(surf, th);
        const std::size_t b = theta_index(surf, 180.0 - th);
        for (std::size_t s = 0; s < surf.sigma_over_lambda.size(); ++s)
            for (std::size_t x = 0; x < surf.thresholds.size(); ++x)
                CHECK(std::fabs(surf.at(a, s, x) - surf.at(b, s, x)) <= tol);
    }
}

TEST_CASE("strictest requirement sits at end-fire") {
    const auto surf = run_surface(desk_config());
    const auto contour = requirement_contour(surf, 0.9, 0.9);
    double global_min = std::numeric_limits<double>::infinity();
    for (double v : contour.sigma_max) global_min = std::min(global_min, v);
    const double at90 = contour.sigma_max[theta_index(surf, 90.0)];
    CHECK(at90 <= global_min * (1.0 + 1e-12));
}

TEST_CASE("reported standard errors follow the binomial formula") {
    McConfig cfg = desk_config();
    cfg.iterations = 777;
    cfg.theta_step_deg = 45.0;
    const auto surf = run_surface(cfg);
    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t)
        for (std::size_t s = 0; s < surf.sigma_over_lambda.size(); ++s)
            for (std::size_t x = 0; x < surf.thresholds.size(); ++x) {
                const double p = surf.at(t, s, x);
                CHECK(surf.stderr_at(t, s, x) ==
                      doctest::Approx(std::sqrt(p * (1.0 - p) / 777.0)).epsilon(1e-12));
            }
}

TEST_CASE("monte carlo matches the Gaussian closed form") {
    const auto surf = run_surface(desk_config());
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const auto t = static_cast<std::size_t>(rng.uniform() * surf.theta_deg.size());
        const auto s = static_cast<std::size_t>(rng.uniform() * surf.sigma_over_lambda.size());
        const auto x = static_cast<std::size_t>(rng.uniform() * surf.thresholds.size());
        const double p_mc = surf.at(t, s, x);
        const double p_an =
            analytic_probability(surf.thresholds[x], surf.sigma_over_lambda[s], surf.theta_deg[t]);
        const double se = std::max(std::sqrt(p_an * (1.0 - p_an) / 5000.0), 1.0 / 5000.0);
        CHECK(std::fabs(p_mc - p_an) <= 3.0 * se);
    }
}

TEST_CASE("independent error model breaks the 270-degree cancellation") {
    McConfig cfg = desk_config();
    cfg.iterations = 2000;
    cfg.error_model = ErrorModel::independent;
    cfg.theta_start_deg = 270.0;
    cfg.theta_stop_deg = 270.0;
    const auto surf = run_surface(cfg);
    // at the largest sigma some trials must fail the 0.9 threshold
    const std::size_t last_sigma = surf.sigma_over_lambda.size() - 1;
    CHECK(surf.at(0, last_sigma, 3) < 1.0);
}

TEST_CASE("deterministic across seeds and thread counts") {
    McConfig cfg = desk_config();
    cfg.iterations = 1500;
    cfg.theta_step_deg = 20.0;
    const auto a = run_surface(cfg);
    const auto b = run_surface(cfg);
    CHECK(a.probability == b.probability);

    const int saved = thread_count();
    set_thread_count(1);
    const auto s1 = run_surface(cfg);
    set_thread_count(8);
    const auto s8 = run_surface(cfg);
    set_thread_count(saved);
    CHECK(s1.probability == s8.probability);
    CHECK(s1.stderr_ == s8.stderr_);

    McConfig other = cfg;
    other.master_seed = 2;
    const auto c = run_surface(other);
    CHECK(a.probability != c.probability);
}

TEST_CASE("csv export shape and stability") {
    McConfig cfg = desk_config();
    cfg.iterations = 200;
    cfg.theta_step_deg = 90.0;
    const auto surf = run_surface(cfg);
    std::ostringstream a, b;
    export_surface_csv(surf, a);
    export_surface_csv(surf, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("theta_deg,sigma_over_lambda,threshold,probability,stderr\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : a.str()) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == 1 + surf.theta_deg.size() * surf.sigma_over_lambda.size() * surf.thresholds.size());

    std::ostringstream c;
    export_contours_csv({requirement_contour(surf, 0.9, 0.9)}, c);
    CHECK(c.str().find("inf") != std::string::npos);  // 270-degree column
}

TEST_CASE("config validation") {
    McConfig cfg{};
    cfg.iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = McConfig{};
    cfg.thresholds = {0.9, 0.6};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = McConfig{};
    cfg.thresholds = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = McConfig{};
    CHECK_THROWS_AS(requirement_contour(run_surface(desk_config()), 0.85, 0.9),
                    std::invalid_argument);
}
