// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cswarm {

enum class ErrorModel {
    shared,      ///< one ranging error drives both phase corrections
    independent  ///< separate errors on the sync and steering corrections
};

/// Monte Carlo configuration for the coherent-gain requirement surface.
struct McConfig {
    std::int64_t iterations = 50'000;
    std::vector<double> thresholds = {0.6, 0.7, 0.8, 0.9};
    double theta_start_deg = 0.0;
    double theta_stop_deg = 359.0;
    double theta_step_deg = 1.0;
    double sigma_max = 0.10;     ///< in units of lambda_c
    double sigma_step = 0.005;
    double f_c_hz = 1.5e9;
    double probability_target = 0.90;
    std::uint64_t master_seed = 1;
    ErrorModel error_model = ErrorModel::shared;

    void validate() const;
    std::vector<double> theta_grid_deg() const;
    std::vector<double> sigma_grid() const;
};

/// P(Gc >= X) gridded over (theta, sigma, threshold), plus the per-cell
/// binomial standard error.
struct GcSurface {
    McConfig config;
    std::vector<double> theta_deg;
    std::vector<double> sigma_over_lambda;
    std::vector<double> thresholds;
    /// probability[(it*n_sigma + is)*n_thr + ix]
    std::vector<double> probability;
    std::vector<double> stderr_;

    double at(std::size_t i_theta, std::size_t i_sigma, std::size_t i_thr) const;
    double stderr_at(std::size_t i_theta, std::size_t i_sigma, std::size_t i_thr) const;
};

/// Run the surface. Per trial the true displacement is drawn uniform over
/// one wavelength (immaterial to the result, kept for the documented
/// procedure) and a ranging error eps ~ N(0, sigma^2); the residual carrier
/// phase is psi = 2*pi*(f_c/c)*eps*(1 + sin theta) in the shared model and
/// the two-error variant under ErrorModel::independent. The same error draws
/// are reused for every grid cell (common random numbers), which makes the
/// monotonicity and symmetry of the surface exact rather than statistical.
/// Deterministic under master_seed for any thread count.
GcSurface run_surface(const McConfig& cfg);

/// Largest sigma (linearly interpolated between grid points) with
/// P(Gc >= X) >= p, per theta. +inf marks columns that never fail
/// (theta = 270 deg in the shared model).
struct RequirementContour {
    double threshold = 0.0;
    double probability = 0.0;
    std::vector<double> theta_deg;
    std::vector<double> sigma_max;  ///< +inf where unbounded
};

RequirementContour requirement_contour(const GcSurface& surface, double threshold,
                                       double probability);

/// Closed-form cross-check: P(Gc >= X) = 2*Phi(psi_max/sigma_psi) - 1 with
/// psi_max = 2*acos(sqrt(X)), sigma_psi = 2*pi*sigma*(1 + sin theta).
double analytic_probability(double threshold, double sigma_over_lambda, double theta_deg);

/// CSV schema: theta_deg,sigma_over_lambda,threshold,probability,stderr.
void export_surface_csv(const GcSurface& surface, std::ostream& os);
void export_surface_csv(const GcSurface& surface, const std::string& path);
void export_contours_csv(const std::vector<RequirementContour>& contours, std::ostream& os);
void export_contours_csv(const std::vector<RequirementContour>& contours, const std::string& path);

/// Static SVG with one sigma_max(theta) polyline per threshold.
void export_contours_svg(const std::vector<RequirementContour>& contours, double sigma_axis_max,
                         const std::string& path);

}  // namespace cswarm
