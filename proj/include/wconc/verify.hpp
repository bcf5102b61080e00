#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wconc/qstate.hpp"

namespace wconc {

struct VerifyConfig {
    int n_min = 2;
    int n_max = 6;
    /// Random coefficient vectors per photon number; each is checked once
    /// with real and once with randomly phased complex coefficients.
    int instances = 100;
    int max_m = 4;
    std::uint64_t seed = 20120815;  // default suite seed
    double tol = 1e-12;
    /// Test hook: added to every analytic value to prove the suite detects
    /// broken formulas. Always 0 in production use.
    double inject_error = 0.0;
};

/// Aggregate result for one closed-form expression.
struct EquationStat {
    std::string name;
    int checks = 0;
    int failures = 0;
    double max_abs_err = 0.0;
};

struct VerifyReport {
    bool all_pass = true;
    std::vector<EquationStat> equations;
    /// JSON dumps of the offending instances, for replay.
    std::vector<std::string> mismatch_dumps;
    /// Notes on formula adjudications (e.g. the general iteration term for
    /// k >= 3, m >= 2, whose displayed form needed confirming).
    std::vector<std::string> notes;
};

/// Cross-validates every closed-form probability against the brute-force
/// state-vector simulator on randomized instances: per-step per-iteration
/// branch probabilities, the single-round total (two algebraic routes), and
/// the truncated iteration table.
VerifyReport run_verification(const VerifyConfig& config);

}  // namespace wconc
