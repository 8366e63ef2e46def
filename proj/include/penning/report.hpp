#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace penning {

/// One verification entry: a measured residual against its tolerance.
/// For negative controls `pass` means the residual EXCEEDED the tolerance,
/// i.e. the detector fired as it should.
struct CheckResult {
    std::string name;
    int points_tested = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool negative_control = false;
};

inline nlohmann::json to_json(const CheckResult& c) {
    return {{"check_name", c.name},
            {"points_tested", c.points_tested},
            {"max_residual", c.max_residual},
            {"tolerance", c.tolerance},
            {"pass", c.pass},
            {"negative_control", c.negative_control}};
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

}  // namespace penning
