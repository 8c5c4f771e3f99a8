#pragma once

#include <cstdint>

#include "covario/alpha1d.hpp"
#include "covario/covariogram.hpp"

namespace covario {

// A 1-D alpha-concave profile as an even source on the line, so the
// Ball-body machinery can run on it directly.
class Alpha1DRadial : public RayFunction {
public:
    explicit Alpha1DRadial(AlphaConcave1D f) : f_(std::move(f)) {}

    const AlphaConcave1D& profile() const { return f_; }

    int dim() const override { return 1; }
    double at_zero() const override { return 1.0; }
    double eval_ray(const Eigen::VectorXd& u, double t) const override {
        return f_.value(std::abs(t) * std::abs(u(0)));
    }
    double support_radial(const Eigen::VectorXd& u) const override {
        return f_.support_end() / std::abs(u(0));
    }

private:
    AlphaConcave1D f_;
};

// K_p(g) = { x : int_0^inf p t^{p-1} g(tx) dt >= g(0) }, accessed through
// its radial function rho(u) = ((1/g(0)) int p t^{p-1} g(tu) dt)^{1/p}.
class BallBodyQuery {
public:
    BallBodyQuery(const RayFunction& g, double p) : g_(&g), p_(p) {
        if (!(p > 0.0)) throw std::domain_error("BallBodyQuery: p > 0");
    }

    double p() const { return p_; }
    const RayFunction& source() const { return *g_; }

    RayValue radial(const Eigen::VectorXd& u, double tol = 1e-9) const;

private:
    const RayFunction* g_;
    double p_;
};

// |K_p(g)| by polar integration of rho^n: deterministic angular panels in
// the plane, Monte Carlo directions otherwise.
VolumeEstimate ballbody_volume(const RayFunction& g, double p, std::size_t dirs,
                               std::uint64_t seed, double tol = 1e-9);

// int_{K_{n+p}(g)} |<x,theta>|^p dx  vs  (1/g(0)) int |<x,theta>|^p g(x) dx.
// Left side by Monte Carlo over the body with membership through the radial
// oracle; right side by integration against g.
VerificationReport moment_transfer_check(const RayFunction& g, double p,
                                         const Eigen::VectorXd& theta,
                                         std::size_t dirs = 256,
                                         std::size_t mc_samples = 200000,
                                         std::uint64_t seed = 7);

// Gamma(1+p)^{1/p} / Gamma(1+q)^{1/q} K_q(g) <= K_p(g) <= K_q(g) per
// direction, for log-concave g with g(0) = ||g||_inf.
VerificationReport inclusion_logconcave_check(const RayFunction& g, double p,
                                              double q, std::size_t dirs = 64,
                                              std::uint64_t seed = 7,
                                              double tol = 1e-8);

// binom(1/a+q, 1/a)^{1/q} rho_q(u) <= binom(1/a+p, 1/a)^{1/p} rho_p(u)
// per direction, for alpha-concave g.
VerificationReport inclusion_alpha_check(const RayFunction& g, double alpha,
                                         double p, double q,
                                         std::size_t dirs = 64,
                                         std::uint64_t seed = 7,
                                         double tol = 1e-8);

// sup |g(tu)/g(0) - (1 - t/R(u))^{1/alpha}| over sampled rays: zero exactly
// on the equality case of the sharp inclusion.
VerificationReport equality_case_fingerprint(const RayFunction& g, double alpha,
                                             std::size_t rays = 64,
                                             std::size_t points_per_ray = 64,
                                             std::uint64_t seed = 7,
                                             double tol = 1e-8);

} // namespace covario
