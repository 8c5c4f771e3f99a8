#pragma once

#include <Eigen/Dense>
#include <vector>

namespace covario {

// Phase-1 simplex feasibility test for x in conv{verts}: find lambda >= 0
// with sum lambda_i = 1 and sum lambda_i v_i = x. Bland's rule, dense
// tableau; sized for a few dozen vertices in dimension <= 10.
bool in_convex_hull(const std::vector<Eigen::VectorXd>& verts,
                    const Eigen::VectorXd& x, double tol = 1e-9);

} // namespace covario
