#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "covario/bodies.hpp"
#include "covario/covariogram.hpp"
#include "covario/report.hpp"

namespace covario {

struct Theorem1Config {
    Covariogram::Backend backend = Covariogram::Backend::Auto;
    bool normalize = false;
    std::size_t samples = 100000;
    std::size_t dirs = 0; // 0: 256 in the plane, 4096 otherwise
    std::uint64_t seed = 7;
    double tol = 1e-9;         // quadrature tolerance
    double equality_tol = 0.0; // 0: 1e-4 closed form, 3x combined error MC
};

// One body through the reduction chain: L_K, |K_{n+2}(g_K)|, the isotropic
// constant of the Ball body via L^2 = 2 L_K^2 / V^{1+2/n}, and the ratio
// L_K / (D_n L_{K_{n+2}(g_K)}).
struct Theorem1Report {
    std::string body;
    int n = 0;
    double L_K = 0.0, L_K_err = 0.0;
    double V = 0.0, V_err = 0.0;
    double L_ball = 0.0;
    double D_n = 0.0;
    double ratio = 0.0;
    double combined_tol = 0.0;
    double equality_tol = 0.0;
    bool pass = false;
    bool equality = false;
    std::uint64_t seed = 0;
    std::string method;

    static std::string csv_header();
    std::string csv_row() const;
    nlohmann::json to_json() const;
};

Theorem1Report theorem1_verify(const ConvexBody& K, const Theorem1Config& cfg = {},
                               const std::string& label = "");

// |K_{n+2}(g_K)| <= C(2n,n) / C(2n+2,n)^{n/(n+2)} for |K| = 1; equality
// exactly for simplices.
VerificationReport volume_bound_check(const ConvexBody& K,
                                      const Theorem1Config& cfg = {},
                                      const std::string& label = "");

// T = |K_{n+2}(g_K)|^{-1/n} K_{n+2}(g_K): radial table, central symmetry,
// unit volume, and the reduction constant C = D_n.
struct ReductionReport {
    std::string body;
    int n = 0;
    double volume_T = 0.0, volume_T_err = 0.0;
    double symmetry_defect = 0.0;
    double constant = 0.0; // C = D_n in L_K <= C L_T
    bool pass = false;
    std::vector<Eigen::VectorXd> directions;
    std::vector<double> radial_T;

    nlohmann::json to_json() const;
};

ReductionReport symmetric_reduction_report(const ConvexBody& K,
                                           const Theorem1Config& cfg = {},
                                           const std::string& label = "");

struct DnScanRow {
    unsigned n = 0;
    double value = 0.0;
    double gap = 0.0; // sqrt(2) - D_n
    bool certified = false;
};

std::vector<DnScanRow> dn_limit_scan(const std::vector<unsigned>& ns);

} // namespace covario
