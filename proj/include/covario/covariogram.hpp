#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "covario/bodies.hpp"
#include "covario/numerics.hpp"
#include "covario/report.hpp"

namespace covario {

struct RayValue {
    double value = 0.0;
    double std_error = 0.0;
};

// Nonnegative function with g(0) > 0 and compact support, seen through rays:
// the access pattern every Ball-body computation needs.
class RayFunction {
public:
    virtual ~RayFunction() = default;
    virtual int dim() const = 0;
    virtual double at_zero() const = 0;
    virtual double eval_ray(const Eigen::VectorXd& u, double t) const = 0;
    // R(u): g(tu) = 0 for t > R(u).
    virtual double support_radial(const Eigen::VectorXd& u) const = 0;
    // Sources that can integrate p t^{p-1} g(tu) dt exactly in their own
    // representation (sample sets) report it here.
    virtual std::optional<RayValue> ray_moment_exact(const Eigen::VectorXd& u,
                                                     double p) const {
        (void)u;
        (void)p;
        return std::nullopt;
    }
    // False for statistical estimates of pointwise values.
    virtual bool pointwise_exact() const { return true; }
    // |supp g| when known exactly; enables a control variate in direction
    // Monte Carlo (E_sigma[R(u)^n] = |supp g| / |B_2^n|).
    virtual std::optional<double> support_volume_exact() const {
        return std::nullopt;
    }
};

struct SphereMeanValue {
    double value = 0.0;
    double err = 0.0;
};

// E_sigma[ w(u) * ray_moment(u, p) ] over the unit sphere. Pointwise-exact
// planar sources get a deterministic angular grid with an adaptive rule per
// panel; other sources average over a direction set.
SphereMeanValue sphere_weighted_ray_moment(
    const RayFunction& g, double p,
    const std::function<double(const Eigen::VectorXd&)>& weight,
    std::size_t dirs, std::uint64_t seed, double tol = 1e-9);

// integral of p t^{p-1} g(tu) dt over [0, R(u)]; relative tolerance `tol`
// on the quadrature path.
RayValue ray_moment(const RayFunction& g, const Eigen::VectorXd& u, double p,
                    double tol = 1e-9);

// Covariogram g_K(x) = |K cap (x + K)|.
class Covariogram : public RayFunction {
public:
    enum class Backend { Auto, ClosedForm, MonteCarlo };

    explicit Covariogram(ConvexBody K, Backend backend = Backend::Auto,
                         std::size_t samples = 100000, std::uint64_t seed = 2024);

    const ConvexBody& body() const { return body_; }
    const ConvexBody& support_body() const { return diff_; } // K - K
    double body_volume() const { return volume_; }           // |K| = g(0)
    bool closed_form() const { return form_ != Form::MonteCarlo; }
    std::size_t samples() const { return samples_; }
    std::uint64_t seed() const { return seed_; }

    RayValue eval(const Eigen::VectorXd& x) const;

    int dim() const override { return body_.dim(); }
    double at_zero() const override { return volume_; }
    double eval_ray(const Eigen::VectorXd& u, double t) const override;
    double support_radial(const Eigen::VectorXd& u) const override;
    std::optional<RayValue> ray_moment_exact(const Eigen::VectorXd& u,
                                             double p) const override;
    bool pointwise_exact() const override { return closed_form(); }
    std::optional<double> support_volume_exact() const override;

    // Standard error, over the stored samples, of sum_u coeff[u] * m(u)
    // where m(u) is the exact-in-samples ray moment. The per-sample
    // aggregate captures the correlation across directions that the
    // per-direction errors cannot. Zero for closed forms.
    double weighted_ray_moment_sample_error(const DirectionSet& ds,
                                            const std::vector<double>& coeff,
                                            double p) const;

    // Difference of two independent uniform points of K: a sample from the
    // probability density g_K / |K|^2.
    Eigen::VectorXd sample_difference(std::uint64_t pair_index) const;
    // Uniform point of K (stream independent of the stored MC samples).
    Eigen::VectorXd sample_body(std::uint64_t index) const;

private:
    enum class Form { Cube, Ball, Simplex, MonteCarlo };

    double minkowski_diff(const Eigen::VectorXd& x) const; // ||x||_{K-K}
    // max { t >= 0 : y + t d in K } for y in K; raw pointers keep the
    // per-sample loop allocation-free.
    double exit_parameter(const double* y, const double* d) const;

    ConvexBody body_;
    ConvexBody diff_;
    Form form_ = Form::MonteCarlo;
    double volume_ = 0.0;
    std::size_t samples_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> sample_flat_; // MC backend: stored points of K
    std::vector<double> facet_flat_;  // MC backend: (normal, offset) per facet
};

// integral of g against Lebesgue measure vs |K|^2.
VerificationReport check_probability_density(const Covariogram& g,
                                             std::size_t dirs = 256,
                                             std::uint64_t seed = 7);

// g((x+y)/2)^{1/n} >= (g(x)^{1/n} + g(y)^{1/n}) / 2 on random pairs.
VerificationReport check_one_over_n_concavity(const Covariogram& g,
                                              std::size_t trials,
                                              std::uint64_t seed,
                                              double tol = -1.0);

// integral of <x,theta>^2 g_K(x) dx vs 2 * integral over K of <x,theta>^2.
VerificationReport second_moment_identity(const Covariogram& g,
                                          const Eigen::VectorXd& theta,
                                          std::size_t dirs = 256,
                                          std::uint64_t seed = 11);

// Super-level-set radii of g_K against (1 - theta^{1/n}) rho_{K-K}.
VerificationReport simplex_levelset_check(const ConvexBody& K,
                                          const std::vector<double>& levels,
                                          std::size_t dirs = 64,
                                          std::uint64_t seed = 13,
                                          Covariogram::Backend backend =
                                              Covariogram::Backend::Auto,
                                          std::size_t samples = 100000);

} // namespace covario
