// SPDX-License-Identifier: Apache-2.0
#include "cswarm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cswarm/constants.hpp"
#include "cswarm/io.hpp"
#include "cswarm/kernels.hpp"
#include "cswarm/parallel.hpp"
#include "cswarm/rng.hpp"

namespace cswarm {

void McConfig::validate() const {
    if (iterations < 1) throw std::invalid_argument("McConfig: iterations must be >= 1");
    if (thresholds.empty()) throw std::invalid_argument("McConfig: thresholds must be non-empty");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("McConfig: thresholds must be sorted ascending");
    for (double x : thresholds)
        if (x <= 0.0 || x > 1.0) throw std::invalid_argument("McConfig: thresholds must lie in (0, 1]");
    if (theta_step_deg <= 0.0) throw std::invalid_argument("McConfig: theta_step must be positive");
    if (sigma_step <= 0.0) throw std::invalid_argument("McConfig: sigma_step must be positive");
    if (sigma_max < 0.0) throw std::invalid_argument("McConfig: sigma_max must be >= 0");
    if (f_c_hz <= 0.0) throw std::invalid_argument("McConfig: f_c must be positive");
    if (probability_target <= 0.0 || probability_target > 1.0)
        throw std::invalid_argument("McConfig: probability_target must lie in (0, 1]");
}

std::vector<double> McConfig::theta_grid_deg() const {
    std::vector<double> grid;
    for (double th = theta_start_deg; th <= theta_stop_deg + 1e-9; th += theta_step_deg)
        grid.push_back(th);
    return grid;
}

std::vector<double> McConfig::sigma_grid() const {
    std::vector<double> grid;
    for (double s = 0.0; s <= sigma_max + 1e-12; s += sigma_step) grid.push_back(s);
    return grid;
}

double GcSurface::at(std::size_t i_theta, std::size_t i_sigma, std::size_t i_thr) const {
    return probability[(i_theta * sigma_over_lambda.size() + i_sigma) * thresholds.size() + i_thr];
}

double GcSurface::stderr_at(std::size_t i_theta, std::size_t i_sigma, std::size_t i_thr) const {
    return stderr_[(i_theta * sigma_over_lambda.size() + i_sigma) * thresholds.size() + i_thr];
}

GcSurface run_surface(const McConfig& cfg) {
    cfg.validate();
    GcSurface surf;
    surf.config = cfg;
    surf.theta_deg = cfg.theta_grid_deg();
    surf.sigma_over_lambda = cfg.sigma_grid();
    surf.thresholds = cfg.thresholds;

    const std::size_t n_theta = surf.theta_deg.size();
    const std::size_t n_sigma = surf.sigma_over_lambda.size();
    const std::size_t n_thr = surf.thresholds.size();
    const std::size_t trials = static_cast<std::size_t>(cfg.iterations);
    surf.probability.assign(n_theta * n_sigma * n_thr, 0.0);
    surf.stderr_.assign(n_theta * n_sigma * n_thr, 0.0);

    // Common random numbers: every grid cell reuses the same error draws, so
    // the surface is exactly monotone in sigma and in (1 + sin theta) rather
    // than monotone-up-to-noise, and contours compare cells without MC
    // jitter. The true displacement draw is part of the documented procedure
    // but cannot influence the residual, which depends only on the error.
    {
        Rng dd = Rng::derive(cfg.master_seed, {0x6d632e64ULL});  // "mc.d" stream
        const double lambda = kSpeedOfLight / cfg.f_c_hz;
        volatile double sink = 0.0;
        for (std::size_t i = 0; i < trials; ++i) sink = dd.uniform(0.0, lambda);
        (void)sink;
    }
    std::vector<double> eps1(trials), eps2;
    {
        Rng re = Rng::derive(cfg.master_seed, {0x6d632e65ULL});  // "mc.e" stream
        for (auto& v : eps1) v = re.normal();
        if (cfg.error_model == ErrorModel::independent) {
            eps2.resize(trials);
            Rng r2 = Rng::derive(cfg.master_seed, {0x6d632e66ULL});
            for (auto& v : eps2) v = r2.normal();
        }
    }

    const double inv_trials = 1.0 / static_cast<double>(trials);
    parallel_for(n_theta, [&](std::size_t begin, std::size_t end) {
        std::vector<double> combo;
        std::vector<std::uint64_t> counts(n_thr);
        for (std::size_t it = begin; it < end; ++it) {
            const double sin_th = std::sin(deg_to_rad(surf.theta_deg[it]));
            const double* normals = eps1.data();
            double unit_scale = 1.0 + sin_th;
            if (cfg.error_model == ErrorModel::independent) {
                combo.resize(trials);
                for (std::size_t i = 0; i < trials; ++i) combo[i] = eps1[i] + eps2[i] * sin_th;
                normals = combo.data();
                unit_scale = 1.0;
            }
            for (std::size_t is = 0; is < n_sigma; ++is) {
                const double sigma_psi = kTwoPi * surf.sigma_over_lambda[is] * unit_scale;
                std::fill(counts.begin(), counts.end(), 0);
                kernels::gc_threshold_count(normals, trials, sigma_psi, surf.thresholds.data(),
                                            n_thr, counts.data());
                for (std::size_t ix = 0; ix < n_thr; ++ix) {
                    const double p = static_cast<double>(counts[ix]) * inv_trials;
                    const std::size_t idx = (it * n_sigma + is) * n_thr + ix;
                    surf.probability[idx] = p;
                    surf.stderr_[idx] = std::sqrt(p * (1.0 - p) * inv_trials);
                }
            }
        }
    });
    return surf;
}

RequirementContour requirement_contour(const GcSurface& surf, double threshold, double probability) {
    auto it = std::find(surf.thresholds.begin(), surf.thresholds.end(), threshold);
    if (it == surf.thresholds.end())
        throw std::invalid_argument("requirement_contour: threshold not present in surface");
    const std::size_t ix = static_cast<std::size_t>(it - surf.thresholds.begin());

    RequirementContour c;
    c.threshold = threshold;
    c.probability = probability;
    c.theta_deg = surf.theta_deg;
    c.sigma_max.resize(surf.theta_deg.size());
    const std::size_t n_sigma = surf.sigma_over_lambda.size();

    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t) {
        // largest grid sigma still meeting the target, scanned from the top
        std::ptrdiff_t last_pass = -1;
        for (std::ptrdiff_t is = static_cast<std::ptrdiff_t>(n_sigma) - 1; is >= 0; --is) {
            if (surf.at(t, is, ix) >= probability) {
                last_pass = is;
                break;
            }
        }
        if (last_pass < 0) {
            c.sigma_max[t] = 0.0;
        } else if (last_pass + 1 >= static_cast<std::ptrdiff_t>(n_sigma)) {
            c.sigma_max[t] = std::numeric_limits<double>::infinity();  // never fails
        } else {
            const double s0 = surf.sigma_over_lambda[last_pass];
            const double s1 = surf.sigma_over_lambda[last_pass + 1];
            const double p0 = surf.at(t, last_pass, ix);
            const double p1 = surf.at(t, last_pass + 1, ix);
            c.sigma_max[t] = p0 > p1 ? s0 + (s1 - s0) * (p0 - probability) / (p0 - p1) : s0;
        }
    }
    return c;
}

double analytic_probability(double threshold, double sigma_over_lambda, double theta_deg) {
    const double psi_max = 2.0 * std::acos(std::sqrt(threshold));
    const double sigma_psi = kTwoPi * sigma_over_lambda * (1.0 + std::sin(deg_to_rad(theta_deg)));
    if (sigma_psi <= 0.0) return 1.0;
    return std::erf(psi_max / sigma_psi / std::sqrt(2.0));
}

void export_surface_csv(const GcSurface& surf, std::ostream& os) {
    os << "theta_deg,sigma_over_lambda,threshold,probability,stderr\n";
    for (std::size_t t = 0; t < surf.theta_deg.size(); ++t)
        for (std::size_t s = 0; s < surf.sigma_over_lambda.size(); ++s)
            for (std::size_t x = 0; x < surf.thresholds.size(); ++x)
                os << fmt_g17(surf.theta_deg[t]) << ',' << fmt_g17(surf.sigma_over_lambda[s]) << ','
                   << fmt_g17(surf.thresholds[x]) << ',' << fmt_g17(surf.at(t, s, x)) << ','
                   << fmt_g17(surf.stderr_at(t, s, x)) << '\n';
}

void export_surface_csv(const GcSurface& surf, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    export_surface_csv(surf, os);
}

void export_contours_csv(const std::vector<RequirementContour>& contours, std::ostream& os) {
    os << "threshold,probability,theta_deg,sigma_max\n";
    for (const auto& c : contours)
        for (std::size_t t = 0; t < c.theta_deg.size(); ++t)
            os << fmt_g17(c.threshold) << ',' << fmt_g17(c.probability) << ','
               << fmt_g17(c.theta_deg[t]) << ','
               << (std::isinf(c.sigma_max[t]) ? "inf" : fmt_g17(c.sigma_max[t])) << '\n';
}

void export_contours_csv(const std::vector<RequirementContour>& contours, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    export_contours_csv(contours, os);
}

void export_contours_svg(const std::vector<RequirementContour>& contours, double sigma_axis_max,
                         const std::string& path) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b"};
    std::vector<SvgSeries> series;
    for (std::size_t i = 0; i < contours.size(); ++i) {
        SvgSeries s;
        s.label = "Gc >= " + fmt_sig(contours[i].threshold, 3);
        s.color = colors[i % 6];
        s.x = contours[i].theta_deg;
        s.y = contours[i].sigma_max;
        for (auto& v : s.y)
            if (std::isinf(v)) v = sigma_axis_max;
        series.push_back(std::move(s));
    }
    write_svg_chart(path, "ranging requirement contours", series, "steering angle [deg]",
                    "sigma_max / lambda_c");
}

}  // namespace cswarm
