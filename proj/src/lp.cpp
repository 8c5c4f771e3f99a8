#include "covario/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace covario {

bool in_convex_hull(const std::vector<Eigen::VectorXd>& verts,
                    const Eigen::VectorXd& x, double tol) {
    if (verts.empty()) return false;
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(verts.size());
    const int rows = n + 1;

    double scale = 1.0;
    for (const auto& v : verts) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    scale = std::max(scale, x.lpNorm<Eigen::Infinity>());

    // Columns: m lambda variables, then `rows` artificials, then the RHS.
    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows, m + rows + 1);
    for (int j = 0; j < m; ++j) {
        if (verts[j].size() != n)
            throw std::invalid_argument("in_convex_hull: dimension mismatch");
        for (int i = 0; i < n; ++i) tab(i, j) = verts[j](i) / scale;
        tab(rows - 1, j) = 1.0;
    }
    for (int i = 0; i < n; ++i) tab(i, m + rows) = x(i) / scale;
    tab(rows - 1, m + rows) = 1.0;

    // Flip rows so the RHS is nonnegative, then seed an artificial basis.
    std::vector<int> basis(rows);
    for (int i = 0; i < rows; ++i) {
        if (tab(i, m + rows) < 0.0) tab.row(i) = -tab.row(i);
        tab(i, m + i) = 1.0;
        basis[i] = m + i;
    }

    // Reduced costs for minimizing the artificial sum: with the artificial
    // basis, cost_j = sum_i tab(i,j) - [j is artificial].
    Eigen::VectorXd cost(m + rows);
    for (int j = 0; j < m + rows; ++j)
        cost(j) = tab.col(j).sum() - (j >= m ? 1.0 : 0.0);

    const double eps = 1e-11;
    const int max_iters = 200 * (m + rows);
    for (int iter = 0; iter < max_iters; ++iter) {
        int enter = -1;
        for (int j = 0; j < m + rows; ++j) {
            if (cost(j) > eps) { // Bland: first improving column
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows; ++i) {
            if (tab(i, enter) > eps) {
                const double ratio = tab(i, m + rows) / tab(i, enter);
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break; // cannot happen for a bounded phase-1

        tab.row(leave) /= tab(leave, enter);
        for (int i = 0; i < rows; ++i) {
            if (i != leave && tab(i, enter) != 0.0)
                tab.row(i) -= tab(i, enter) * tab.row(leave);
        }
        cost -= cost(enter) * tab.row(leave).head(m + rows);
        basis[leave] = enter;
    }

    double residual = 0.0;
    for (int i = 0; i < rows; ++i)
        if (basis[i] >= m) residual += std::abs(tab(i, m + rows));
    return residual <= tol;
}

} // namespace covario
