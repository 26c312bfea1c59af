// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cswarm {

struct CheckResult {
    std::string id;
    std::string description;
    std::string expected;
    std::string actual;
    std::string tolerance;
    bool pass = false;
};

struct ReproOptions {
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;  ///< scales numeric tolerances (negative-control hook)
    std::int64_t mc_iterations = 5000;   ///< desk-scale preset
    std::int64_t ensemble_trials = 1000;
};

/// Every reference-number check at desk scale: the spectral moment, the CRLB
/// chain, the frequency rule, the estimator-vs-bound ensemble, the sync
/// chain, the requirement surface, the traverse experiment, the Gc closed
/// form, and in-process determinism across thread counts.
std::vector<CheckResult> run_reference_checks(const ReproOptions& opts);

void print_check_table(const std::vector<CheckResult>& results, std::ostream& os);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace cswarm
