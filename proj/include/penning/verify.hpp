#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "penning/report.hpp"
#include "penning/trap.hpp"

namespace penning {

struct VerifyOptions {
    int grid_points = 96;
    double sigma_multiple = 8.0;
    double tolerance_scale = 1.0;  ///< multiplies every tolerance, 1 = defaults
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Each suite runs the invariant battery of its module family and returns the
/// measured residuals. Checks marked negative_control pass when the residual
/// EXCEEDS the bound (detector sensitivity).
std::vector<CheckResult> verify_classical(const TrapParameters& params, const VerifyOptions& opt);
std::vector<CheckResult> verify_stationary(const TrapParameters& params, const VerifyOptions& opt);
std::vector<CheckResult> verify_ict(const TrapParameters& params, const VerifyOptions& opt);
std::vector<CheckResult> verify_superposition(const TrapParameters& params,
                                              const VerifyOptions& opt);
std::vector<CheckResult> verify_fidelity(const TrapParameters& params, const VerifyOptions& opt);

/// Runs one named suite, or every suite for "all". Throws std::invalid_argument
/// for unknown suite names.
std::vector<CheckResult> run_suite(const std::string& suite, const TrapParameters& params,
                                   const VerifyOptions& opt);

}  // namespace penning
