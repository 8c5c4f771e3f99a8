#include "covario/verifier.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "covario/ballbodies.hpp"
#include "covario/combinatorics.hpp"
#include "covario/numerics.hpp"
#include "covario/rng.hpp"

namespace covario {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t default_dirs(int n, std::size_t dirs) {
    if (dirs != 0) return dirs;
    return n == 2 ? 256 : 4096;
}

// Exactly recenter and rescale a polytopal body to barycenter 0, volume 1.
ConvexBody exact_unit_position(const ConvexBody& K) {
    if (!K.polytopal() || K.dim() > 3) return K;
    const double vol = K.volume().value;
    const Eigen::VectorXd c = K.barycenter();
    const double s = std::pow(vol, -1.0 / K.dim());
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(K.vertices().size());
    for (const auto& v : K.vertices()) verts.push_back(s * (v - c));
    return ConvexBody::vpolytope(std::move(verts));
}

} // namespace

std::string Theorem1Report::csv_header() {
    return "body,n,L_K,V,L_ball,D_n,ratio,pass,equality";
}

std::string Theorem1Report::csv_row() const {
    return body + "," + std::to_string(n) + "," + fmt(L_K) + "," + fmt(V) + "," +
           fmt(L_ball) + "," + fmt(D_n) + "," + fmt(ratio) + "," +
           (pass ? "true" : "false") + "," + (equality ? "true" : "false");
}

nlohmann::json Theorem1Report::to_json() const {
    return nlohmann::json{
        {"body", body},     {"n", n},
        {"L_K", L_K},       {"L_K_err", L_K_err},
        {"V", V},           {"V_err", V_err},
        {"L_ball", L_ball}, {"D_n", D_n},
        {"ratio", ratio},   {"combined_tol", combined_tol},
        {"equality_tol", equality_tol}, {"pass", pass},
        {"equality", equality}, {"seed", seed},
        {"method", method}};
}

Theorem1Report theorem1_verify(const ConvexBody& K, const Theorem1Config& cfg,
                               const std::string& label) {
    const int n = K.dim();
    ConvexBody K0 = K;

    if (cfg.normalize) {
        const IsotropyData pre = isotropy_data(
            K, "auto", std::max<std::size_t>(cfg.samples, 100000),
            substream(cfg.seed, 101));
        K0 = isotropic_normalize(K, pre).materialized();
        // The affine step carries Monte Carlo error; pin volume 1 and
        // barycenter 0 exactly where the polytope allows it.
        K0 = exact_unit_position(K0);
    } else {
        const VolumeEstimate v = K.volume(cfg.samples, substream(cfg.seed, 100));
        if (std::abs(v.value - 1.0) > std::max(1e-9, 3.0 * v.std_error))
            throw std::domain_error(
                "theorem1_verify: |K| must be 1 (request normalization)");
    }

    const IsotropyData data =
        isotropy_data(K0, "auto", cfg.samples, substream(cfg.seed, 102));
    const Covariogram g(K0, cfg.backend, cfg.samples, substream(cfg.seed, 103));
    const std::size_t dirs = default_dirs(n, cfg.dirs);
    const VolumeEstimate vol =
        ballbody_volume(g, n + 2.0, dirs, substream(cfg.seed, 104), cfg.tol);

    Theorem1Report rep;
    rep.body = label.empty() ? K.describe() : label;
    rep.n = n;
    rep.L_K = data.isotropic_constant;
    rep.L_K_err = data.L_err;
    rep.V = vol.value;
    rep.V_err = vol.std_error;
    rep.L_ball = std::sqrt(2.0 * rep.L_K * rep.L_K /
                           std::pow(rep.V, 1.0 + 2.0 / n));
    rep.D_n = dn(static_cast<unsigned>(n)).value_d();
    rep.ratio = rep.L_K / (rep.D_n * rep.L_ball);
    rep.seed = cfg.seed;
    rep.method = g.closed_form() ? "closed-form" : "monte-carlo";

    // L_K cancels in the ratio, so only the Ball-body volume error remains.
    const double rel_v = (3.0 * vol.std_error + 1e-12) / vol.value;
    rep.combined_tol = (n + 2.0) / (2.0 * n) * rel_v + 1e-9;
    rep.equality_tol = cfg.equality_tol > 0.0
                           ? cfg.equality_tol
                           : (g.closed_form() ? 1e-4
                                              : std::max(rep.combined_tol, 1e-4));
    rep.pass = rep.ratio <= 1.0 + rep.combined_tol;
    rep.equality = std::abs(rep.ratio - 1.0) <= rep.equality_tol;
    return rep;
}

VerificationReport volume_bound_check(const ConvexBody& K,
                                      const Theorem1Config& cfg,
                                      const std::string& label) {
    const int n = K.dim();
    const VolumeEstimate v = K.volume(cfg.samples, substream(cfg.seed, 100));
    if (std::abs(v.value - 1.0) > std::max(1e-9, 3.0 * v.std_error))
        throw std::domain_error("volume_bound_check: |K| must be 1");
    const Covariogram g(K, cfg.backend, cfg.samples, substream(cfg.seed, 103));
    const std::size_t dirs = default_dirs(n, cfg.dirs);
    const VolumeEstimate vol =
        ballbody_volume(g, n + 2.0, dirs, substream(cfg.seed, 104), cfg.tol);
    const double bound =
        static_cast<double>(ballbody_volume_bound(static_cast<unsigned>(n)));

    VerificationReport rep;
    rep.check = "ballbody_volume_bound";
    rep.lhs = vol.value;
    rep.rhs = bound;
    rep.error_estimate = vol.std_error;
    rep.tolerance = 3.0 * vol.std_error + 1e-8;
    rep.worst_margin = bound + rep.tolerance - vol.value;
    rep.pass = rep.worst_margin >= 0.0;
    rep.detail = (label.empty() ? K.describe() : label) +
                 (std::abs(vol.value - bound) <= std::max(1e-6, rep.tolerance)
                      ? " equality"
                      : " strict");
    return rep;
}

nlohmann::json ReductionReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < directions.size(); ++i) {
        nlohmann::json u = nlohmann::json::array();
        for (int k = 0; k < directions[i].size(); ++k) u.push_back(directions[i](k));
        rows.push_back(nlohmann::json{{"u", u}, {"rho_T", radial_T[i]}});
    }
    return nlohmann::json{{"body", body},
                          {"n", n},
                          {"volume_T", volume_T},
                          {"volume_T_err", volume_T_err},
                          {"symmetry_defect", symmetry_defect},
                          {"constant", constant},
                          {"pass", pass},
                          {"radial_table", rows}};
}

ReductionReport symmetric_reduction_report(const ConvexBody& K,
                                           const Theorem1Config& cfg,
                                           const std::string& label) {
    const int n = K.dim();
    const VolumeEstimate v = K.volume(cfg.samples, substream(cfg.seed, 100));
    if (std::abs(v.value - 1.0) > std::max(1e-9, 3.0 * v.std_error))
        throw std::domain_error("symmetric_reduction_report: |K| must be 1");
    const Covariogram g(K, cfg.backend, cfg.samples, substream(cfg.seed, 103));
    const std::size_t dirs = default_dirs(n, cfg.dirs);
    const VolumeEstimate vol =
        ballbody_volume(g, n + 2.0, dirs, substream(cfg.seed, 104), cfg.tol);
    const double scale = std::pow(vol.value, -1.0 / n);

    const BallBodyQuery q(g, n + 2.0);
    // Antipodal pairs so the symmetry defect is directly measurable.
    const std::size_t half = std::max<std::size_t>(dirs / 2, 8);
    const DirectionSet ds = sphere_directions(n, half, substream(cfg.seed, 105));

    ReductionReport rep;
    rep.body = label.empty() ? K.describe() : label;
    rep.n = n;
    rep.constant = dn(static_cast<unsigned>(n)).value_d();
    rep.directions.resize(2 * half);
    rep.radial_T.resize(2 * half);
    std::vector<double> defect(half);
    for (std::size_t i = 0; i < half; ++i) {
        const Eigen::VectorXd u = ds.dir(i);
        const double rp = scale * q.radial(u, cfg.tol).value;
        const double rm = scale * q.radial(-u, cfg.tol).value;
        rep.directions[2 * i] = u;
        rep.directions[2 * i + 1] = -u;
        rep.radial_T[2 * i] = rp;
        rep.radial_T[2 * i + 1] = rm;
        defect[i] = std::abs(rp - rm);
    }
    rep.symmetry_defect = 0.0;
    for (double d : defect) rep.symmetry_defect = std::max(rep.symmetry_defect, d);

    // Volume of T recomputed from the emitted radial table. Halving the
    // distinct-direction count estimates the discretization error (the
    // antipodal copies carry no new information for an even source).
    double mean_full = 0.0, mean_half = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        const double r = 0.5 * (std::pow(rep.radial_T[2 * i], n) +
                                std::pow(rep.radial_T[2 * i + 1], n));
        mean_full += r;
        if (i % 2 == 0) mean_half += r;
    }
    mean_full /= static_cast<double>(half);
    mean_half /= static_cast<double>((half + 1) / 2);
    rep.volume_T = unit_ball_volume(n) * mean_full;
    rep.volume_T_err = unit_ball_volume(n) * std::abs(mean_full - mean_half) +
                       rep.volume_T * vol.std_error / vol.value;

    double max_sigma = 0.0;
    for (std::size_t i = 0; i < half; ++i)
        max_sigma = std::max(max_sigma,
                             scale * q.radial(ds.dir(i), cfg.tol).std_error);
    const double sym_tol = g.closed_form() ? 1e-9 : std::max(6.0 * max_sigma, 1e-6);
    const double vol_tol = std::max(3.0 * rep.volume_T_err, 1e-3);
    rep.pass = rep.symmetry_defect <= sym_tol &&
               std::abs(rep.volume_T - 1.0) <= vol_tol;
    return rep;
}

std::vector<DnScanRow> dn_limit_scan(const std::vector<unsigned>& ns) {
    if (ns.empty()) throw std::invalid_argument("dn_limit_scan: empty n list");
    std::vector<DnScanRow> rows;
    rows.reserve(ns.size());
    const double sqrt2 = std::sqrt(2.0);
    for (unsigned n : ns) {
        const DnValue d = dn(n);
        rows.push_back({n, d.value_d(), sqrt2 - d.value_d(), d.certified});
    }
    return rows;
}

} // namespace covario
