#pragma once

#include <cstdint>
#include <vector>

#include "covario/report.hpp"

namespace covario {

// One-dimensional alpha-concave function g = phi^{1/alpha}, where phi is a
// concave piecewise-linear profile with phi(0) = 1, phi >= 0 on [0, M], and
// zero beyond. Concavity holds by construction: the slope sequence is
// non-increasing.
class AlphaConcave1D {
public:
    // h(t) = (1 - t/M)^{1/alpha} on [0, M]: the profile that makes G constant.
    static AlphaConcave1D extremal(double alpha, double M);

    // knot_t strictly increasing from 0 to M; knot_phi the profile values,
    // knot_phi[0] = 1.
    static AlphaConcave1D from_profile(double alpha, std::vector<double> knot_t,
                                       std::vector<double> knot_phi);

    // Deterministic in seed. `pieces` linear panels (>= 2): breakpoints
    // uniform in (0, M), slopes sampled then sorted decreasingly, rescaled
    // so the profile stays nonnegative.
    static AlphaConcave1D random(std::uint64_t seed, double alpha, double M,
                                 int pieces);

    double alpha() const { return alpha_; }
    double support_end() const { return knot_t_.back(); }
    std::size_t pieces() const { return knot_t_.size() - 1; }
    const std::vector<double>& knot_t() const { return knot_t_; }
    const std::vector<double>& knot_phi() const { return knot_phi_; }

    double profile(double t) const; // phi(t)
    double operator()(double t) const { return value(t); }
    double value(double t) const; // g(t)

    // G_g(p) = ( binom(1/a + p, 1/a) * (1/g(0)) * int p t^{p-1} g(t) dt )^{1/p}
    double g_function(double p, double tol = 1e-11) const;

private:
    AlphaConcave1D() = default;
    double alpha_ = 1.0;
    std::vector<double> knot_t_, knot_phi_;
};

// Random-function sweep of the claim that G is decreasing on the p grid.
VerificationReport monotonicity_suite(std::size_t trials_per_alpha,
                                      const std::vector<double>& alphas,
                                      const std::vector<double>& p_grid,
                                      std::uint64_t seed, double tol = 1e-7);

// If G(p) = G(q), g must be the extremal profile: fits M = G(p) and reports
// the sup distance to it.
VerificationReport equality_detect(const AlphaConcave1D& f, double p, double q,
                                   double tol = 1e-9);

} // namespace covario
