#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace covario {

// Outcome of one checked identity or inequality.
struct VerificationReport {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    // Signed slack of the claim; negative means violated by that much.
    double worst_margin = 0.0;
    double tolerance = 0.0;
    double error_estimate = 0.0;
    bool pass = false;
    std::string detail;

    nlohmann::json to_json() const;
};

} // namespace covario
