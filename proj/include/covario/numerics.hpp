#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace covario {

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Generalized binomial coefficient Gamma(1+x) / (Gamma(1+y) Gamma(1+x-y)),
// restricted to x >= y > 0.
double gen_binom(double x, double y);

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. `tol` is an absolute target;
// panels are bisected until the embedded estimate drops below their share
// of the budget or `max_depth` is reached (reported, never silent).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_depth = 60);

// Integral of p t^{p-1} f(t) over [0, upper]. For p < 1 the endpoint
// singularity is removed exactly by the substitution s = t^p.
QuadratureResult integrate_power_weighted(const std::function<double(double)>& f,
                                          double p, double upper, double tol,
                                          int max_depth = 60);

// Unit directions on S^{n-1}. For n = 2 a deterministic equispaced angular
// grid (seed ignored); for n >= 3 counter-seeded normalized Gaussians.
class DirectionSet {
public:
    DirectionSet(int dim, std::size_t count, std::uint64_t seed, bool grid,
                 std::vector<double> pts)
        : dim_(dim), count_(count), seed_(seed), grid_(grid),
          pts_(std::move(pts)) {}

    int dim() const { return dim_; }
    std::size_t count() const { return count_; }
    std::uint64_t seed() const { return seed_; }
    bool grid() const { return grid_; }

    Eigen::Map<const Eigen::VectorXd> dir(std::size_t i) const {
        return Eigen::Map<const Eigen::VectorXd>(pts_.data() + i * dim_, dim_);
    }

private:
    int dim_;
    std::size_t count_;
    std::uint64_t seed_;
    bool grid_;
    std::vector<double> pts_;
};

DirectionSet sphere_directions(int n, std::size_t count, std::uint64_t seed);

} // namespace covario
