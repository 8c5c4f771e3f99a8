#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "covario/hull.hpp"
#include "covario/rng.hpp"

namespace covario {

double unit_ball_volume(int n);

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    bool exact = true;
};

// Convex body in R^n: an analytic variant (cube / Euclidean ball / regular
// simplex), a V-polytope, or an affine image of one of those.
class ConvexBody {
public:
    enum class Kind { Cube, Ball, Simplex, VPolytope, Affine };

    static ConvexBody cube(int dim, double side = 1.0);
    static ConvexBody ball(int dim, double radius);
    static ConvexBody unit_volume_ball(int dim);
    // Volume 1, barycenter 0, first vertex on axis 1.
    static ConvexBody regular_simplex(int dim);
    static ConvexBody vpolytope(std::vector<Eigen::VectorXd> vertices);
    static ConvexBody affine_image(ConvexBody base, Eigen::MatrixXd map,
                                   Eigen::VectorXd shift);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double side() const { return side_; }
    double radius() const { return radius_; }
    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const ConvexBody& base() const { return *base_; }
    const Eigen::MatrixXd& affine_map() const { return map_; }
    const Eigen::VectorXd& affine_shift() const { return shift_; }

    // Membership; exact facet test where facets are available, linear
    // feasibility over convex coefficients otherwise.
    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
    // The linear-feasibility route, available for any V-polytope dimension;
    // kept callable on its own so the two routes can be checked against
    // each other.
    bool contains_lp(const Eigen::VectorXd& x, double tol = 1e-9) const;
    // ||x||_K = inf { l > 0 : x in l K }; needs 0 in the interior.
    double minkowski_functional(const Eigen::VectorXd& x) const;
    // rho_K(u) = 1 / ||u||_K, extended homogeneously.
    double radial(const Eigen::VectorXd& u) const;
    // sup_{y in K} <u, y>
    double support(const Eigen::VectorXd& u) const;

    VolumeEstimate volume(std::size_t mc_samples = 200000,
                          std::uint64_t seed = 1234) const;
    Eigen::VectorXd barycenter(std::size_t mc_samples = 200000,
                               std::uint64_t seed = 1234) const;
    std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;

    // Uniform point, a pure function of (rng.seed, index).
    Eigen::VectorXd sample_point(const CounterRng& rng, std::uint64_t index) const;

    // Pushes affine wrappers into vertex lists where possible.
    ConvexBody materialized() const;

    bool polytopal() const { return kind_ == Kind::Simplex || kind_ == Kind::VPolytope; }
    // Exact facets: polytopes in dim <= 3, simplices in any dim. Null otherwise.
    const HRep* hrep() const;
    bool exact_moments_available() const;

    std::string describe() const;
    nlohmann::json to_json() const;
    static ConvexBody from_json(const nlohmann::json& j);

private:
    ConvexBody() = default;

    bool contains_fast(const Eigen::VectorXd& x, double tol) const;

    Kind kind_ = Kind::Cube;
    int dim_ = 0;
    double side_ = 0.0;
    double radius_ = 0.0;
    std::vector<Eigen::VectorXd> vertices_;
    std::shared_ptr<const ConvexBody> base_;
    Eigen::MatrixXd map_, map_inv_;
    Eigen::VectorXd shift_;
    double map_det_ = 1.0;

    // Computed at construction for polytopal kinds.
    std::shared_ptr<const HRep> hrep_;
    double exact_volume_ = -1.0;
    Eigen::VectorXd exact_centroid_;
    double max_vertex_norm_ = 0.0;

    friend ConvexBody difference_body(const ConvexBody& K);
};

// K - K as a body; centrally symmetric.
ConvexBody difference_body(const ConvexBody& K);

struct IsotropyData {
    Eigen::VectorXd barycenter;
    Eigen::MatrixXd second_moment; // integral of (x-b)(x-b)^T over K
    Eigen::MatrixXd moment_err;    // per-entry standard errors (zero if exact)
    double volume = 0.0;
    double volume_err = 0.0;
    double isotropic_constant = 0.0; // L_K = (det M)^{1/2n} / V^{(n+2)/2n}
    double L_err = 0.0;
    std::string method; // "exact" | "monte-carlo"
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

// method: "auto" (exact when the body supports it), "exact", "mc".
IsotropyData isotropy_data(const ConvexBody& K, const std::string& method = "auto",
                           std::size_t samples = 200000, std::uint64_t seed = 99);

// Affine image with volume 1, barycenter 0, second moment L^2 * Id.
ConvexBody isotropic_normalize(const ConvexBody& K, const IsotropyData& data);

} // namespace covario
