#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace covario {

// Halfspace <a, x> <= b with unit normal.
struct Halfspace {
    Eigen::VectorXd normal;
    double offset = 0.0;
};

struct HRep {
    std::vector<Halfspace> facets;

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
    // max { t : t*u inside }, for bodies with 0 in the interior.
    double radial(const Eigen::VectorXd& u) const;
};

// Parameter interval { t : origin + t*dir inside }, empty if it misses.
std::optional<std::pair<double, double>> clip_ray(const HRep& h,
                                                  const Eigen::VectorXd& origin,
                                                  const Eigen::VectorXd& dir);

// Indices of the convex hull of a planar point set in CCW order; collinear
// intermediate points are dropped.
std::vector<int> hull2d_indices(const std::vector<Eigen::VectorXd>& pts);

// Indices of the extreme points (LP filter; any dimension).
std::vector<int> extreme_point_indices(const std::vector<Eigen::VectorXd>& pts);

// Facet description of conv(pts) for dim 2 or 3 (brute-force supporting
// planes; fine for the few dozen vertices this project handles).
HRep polytope_hrep(const std::vector<Eigen::VectorXd>& pts, int dim);

// Facets of a nondegenerate simplex (dim+1 vertices), any dimension.
HRep simplex_hrep(const std::vector<Eigen::VectorXd>& verts);

// Exact volume / centroid of conv(pts), dim 2 or 3.
double polytope_volume_exact(const std::vector<Eigen::VectorXd>& pts, int dim);
Eigen::VectorXd polytope_centroid_exact(const std::vector<Eigen::VectorXd>& pts,
                                        int dim);

} // namespace covario
