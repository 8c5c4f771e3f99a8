#include "covario/report.hpp"

#include <nlohmann/json.hpp>

namespace covario {

nlohmann::json VerificationReport::to_json() const {
    return nlohmann::json{{"check", check},
                          {"lhs", lhs},
                          {"rhs", rhs},
                          {"worst_margin", worst_margin},
                          {"tolerance", tolerance},
                          {"error_estimate", error_estimate},
                          {"pass", pass},
                          {"detail", detail}};
}

} // namespace covario
