#include "covario/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "covario/lp.hpp"

namespace covario {

bool HRep::contains(const Eigen::VectorXd& x, double tol) const {
    for (const auto& f : facets)
        if (f.normal.dot(x) > f.offset + tol) return false;
    return true;
}

double HRep::radial(const Eigen::VectorXd& u) const {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) {
        const double d = f.normal.dot(u);
        if (d > 0.0) t = std::min(t, f.offset / d);
    }
    return t;
}

std::optional<std::pair<double, double>> clip_ray(const HRep& h,
                                                  const Eigen::VectorXd& origin,
                                                  const Eigen::VectorXd& dir) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& f : h.facets) {
        const double d = f.normal.dot(dir);
        const double rhs = f.offset - f.normal.dot(origin);
        if (std::abs(d) < 1e-14) {
            if (rhs < 0.0) return std::nullopt;
        } else if (d > 0.0) {
            hi = std::min(hi, rhs / d);
        } else {
            lo = std::max(lo, rhs / d);
        }
        if (lo > hi) return std::nullopt;
    }
    return std::make_pair(lo, hi);
}

namespace {

double cross2(const Eigen::VectorXd& o, const Eigen::VectorXd& a,
              const Eigen::VectorXd& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

} // namespace

std::vector<int> hull2d_indices(const std::vector<Eigen::VectorXd>& pts) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (pts[i](0) != pts[j](0)) return pts[i](0) < pts[j](0);
        return pts[i](1) < pts[j](1);
    });
    order.erase(std::unique(order.begin(), order.end(),
                            [&](int i, int j) {
                                return pts[i](0) == pts[j](0) &&
                                       pts[i](1) == pts[j](1);
                            }),
                order.end());
    const int mu = static_cast<int>(order.size());
    if (mu < 3) return {};

    std::vector<int> hull(2 * mu);
    int k = 0;
    for (int idx = 0; idx < mu; ++idx) { // lower chain
        const int i = order[idx];
        while (k >= 2 && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0)
            --k;
        hull[k++] = i;
    }
    const int lower = k + 1;
    for (int idx = mu - 2; idx >= 0; --idx) { // upper chain
        const int i = order[idx];
        while (k >= lower && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0)
            --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    if (static_cast<int>(hull.size()) < 3) return {};
    return hull;
}

std::vector<int> extreme_point_indices(const std::vector<Eigen::VectorXd>& pts) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
        bool duplicate = false;
        for (int j : keep) {
            if ((pts[i] - pts[j]).lpNorm<Eigen::Infinity>() < 1e-12) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        std::vector<Eigen::VectorXd> others;
        others.reserve(m - 1);
        for (int j = 0; j < m; ++j) {
            if (j != i &&
                (pts[i] - pts[j]).lpNorm<Eigen::Infinity>() >= 1e-12)
                others.push_back(pts[j]);
        }
        if (others.empty() || !in_convex_hull(others, pts[i], 1e-10))
            keep.push_back(i);
    }
    return keep;
}

namespace {

HRep hrep_2d(const std::vector<Eigen::VectorXd>& pts) {
    const std::vector<int> hull = hull2d_indices(pts);
    if (hull.empty()) throw std::domain_error("polytope_hrep: degenerate polygon");
    HRep h;
    const int k = static_cast<int>(hull.size());
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd& a = pts[hull[i]];
        const Eigen::VectorXd& b = pts[hull[(i + 1) % k]];
        Eigen::VectorXd normal(2);
        normal << b(1) - a(1), a(0) - b(0); // outward for CCW order
        const double len = normal.norm();
        normal /= len;
        h.facets.push_back({normal, normal.dot(a)});
    }
    return h;
}

HRep hrep_3d(const std::vector<Eigen::VectorXd>& pts) {
    const std::vector<int> ext = extreme_point_indices(pts);
    const int m = static_cast<int>(ext.size());
    if (m < 4) throw std::domain_error("polytope_hrep: degenerate polytope");
    double scale = 0.0;
    for (int i : ext) scale = std::max(scale, pts[i].lpNorm<Eigen::Infinity>());
    const double tol = 1e-9 * std::max(1.0, scale);

    HRep h;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            for (int c = b + 1; c < m; ++c) {
                Eigen::Vector3d u = pts[ext[b]].head<3>() - pts[ext[a]].head<3>();
                Eigen::Vector3d v = pts[ext[c]].head<3>() - pts[ext[a]].head<3>();
                Eigen::Vector3d normal = u.cross(v);
                const double len = normal.norm();
                if (len < 1e-12) continue;
                normal /= len;
                const double off = normal.dot(pts[ext[a]].head<3>());
                bool all_below = true, all_above = true;
                for (int d = 0; d < m; ++d) {
                    const double s = normal.dot(pts[ext[d]].head<3>()) - off;
                    if (s > tol) all_below = false;
                    if (s < -tol) all_above = false;
                    if (!all_below && !all_above) break;
                }
                if (!all_below && !all_above) continue;
                Eigen::VectorXd nn(3);
                nn = all_below ? normal : Eigen::Vector3d(-normal);
                const double bb = all_below ? off : -off;
                bool known = false;
                for (const auto& f : h.facets) {
                    if ((f.normal - nn).lpNorm<Eigen::Infinity>() < 1e-8 &&
                        std::abs(f.offset - bb) < 1e-8 * std::max(1.0, scale)) {
                        known = true;
                        break;
                    }
                }
                if (!known) h.facets.push_back({nn, bb});
            }
        }
    }
    if (h.facets.size() < 4) throw std::domain_error("polytope_hrep: degenerate polytope");
    return h;
}

} // namespace

HRep polytope_hrep(const std::vector<Eigen::VectorXd>& pts, int dim) {
    if (dim == 2) return hrep_2d(pts);
    if (dim == 3) return hrep_3d(pts);
    throw std::domain_error("polytope_hrep: exact facets only for dim 2 or 3");
}

HRep simplex_hrep(const std::vector<Eigen::VectorXd>& verts) {
    const int n = static_cast<int>(verts.front().size());
    if (static_cast<int>(verts.size()) != n + 1)
        throw std::domain_error("simplex_hrep: needs dim+1 vertices");
    HRep h;
    for (int skip = 0; skip <= n; ++skip) {
        // Hyperplane through all vertices except verts[skip].
        std::vector<int> face;
        for (int j = 0; j <= n; ++j)
            if (j != skip) face.push_back(j);
        Eigen::MatrixXd edges(n - 1, n);
        for (int r = 1; r < n; ++r)
            edges.row(r - 1) = (verts[face[r]] - verts[face[0]]).transpose();
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(edges);
        Eigen::MatrixXd kern = lu.kernel();
        if (kern.cols() < 1) throw std::domain_error("simplex_hrep: degenerate simplex");
        Eigen::VectorXd normal = kern.col(0);
        normal.normalize();
        if (normal.dot(verts[skip] - verts[face[0]]) > 0.0) normal = -normal;
        h.facets.push_back({normal, normal.dot(verts[face[0]])});
    }
    return h;
}

namespace {

// Ordered vertex cycle of the facet lying in the given plane.
std::vector<Eigen::Vector3d> facet_cycle(const std::vector<Eigen::VectorXd>& pts,
                                         const Halfspace& f, double tol) {
    std::vector<Eigen::Vector3d> on_face;
    for (const auto& p : pts) {
        if (std::abs(f.normal.dot(p) - f.offset) <= tol)
            on_face.push_back(p.head<3>());
    }
    if (on_face.size() < 3) return {};
    // In-plane frame.
    Eigen::Vector3d nrm = f.normal.head<3>();
    Eigen::Vector3d any = std::abs(nrm(0)) < 0.9 ? Eigen::Vector3d::UnitX()
                                                 : Eigen::Vector3d::UnitY();
    Eigen::Vector3d e1 = nrm.cross(any).normalized();
    Eigen::Vector3d e2 = nrm.cross(e1);
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& p : on_face) center += p;
    center /= static_cast<double>(on_face.size());
    std::sort(on_face.begin(), on_face.end(),
              [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
                  const double ta = std::atan2(e2.dot(a - center), e1.dot(a - center));
                  const double tb = std::atan2(e2.dot(b - center), e1.dot(b - center));
                  return ta < tb;
              });
    return on_face;
}

} // namespace

double polytope_volume_exact(const std::vector<Eigen::VectorXd>& pts, int dim) {
    if (dim == 2) {
        const std::vector<int> hull = hull2d_indices(pts);
        if (hull.empty())
            throw std::domain_error("polytope_volume_exact: degenerate polygon");
        double twice = 0.0;
        const int k = static_cast<int>(hull.size());
        for (int i = 0; i < k; ++i) {
            const auto& a = pts[hull[i]];
            const auto& b = pts[hull[(i + 1) % k]];
            twice += a(0) * b(1) - b(0) * a(1);
        }
        return 0.5 * std::abs(twice);
    }
    if (dim != 3)
        throw std::domain_error("polytope_volume_exact: dim 2 or 3 only");
    const HRep h = polytope_hrep(pts, 3);
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
    const double tol = 1e-8 * std::max(1.0, scale);
    double vol = 0.0;
    for (const auto& f : h.facets) {
        const auto cyc = facet_cycle(pts, f, tol);
        if (cyc.size() < 3) continue;
        // Divergence theorem: V = (1/3) sum_f offset(f) * area(f).
        double area2 = 0.0;
        for (std::size_t i = 1; i + 1 < cyc.size(); ++i)
            area2 += (cyc[i] - cyc[0]).cross(cyc[i + 1] - cyc[0]).dot(f.normal.head<3>());
        vol += f.offset * 0.5 * area2;
    }
    return vol / 3.0;
}

Eigen::VectorXd polytope_centroid_exact(const std::vector<Eigen::VectorXd>& pts,
                                        int dim) {
    if (dim == 2) {
        const std::vector<int> hull = hull2d_indices(pts);
        if (hull.empty())
            throw std::domain_error("polytope_centroid_exact: degenerate polygon");
        double twice = 0.0;
        Eigen::Vector2d c = Eigen::Vector2d::Zero();
        const int k = static_cast<int>(hull.size());
        for (int i = 0; i < k; ++i) {
            const auto& a = pts[hull[i]];
            const auto& b = pts[hull[(i + 1) % k]];
            const double w = a(0) * b(1) - b(0) * a(1);
            twice += w;
            c(0) += (a(0) + b(0)) * w;
            c(1) += (a(1) + b(1)) * w;
        }
        Eigen::VectorXd out(2);
        out = c / (3.0 * twice);
        return out;
    }
    if (dim != 3)
        throw std::domain_error("polytope_centroid_exact: dim 2 or 3 only");
    const HRep h = polytope_hrep(pts, 3);
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
    const double tol = 1e-8 * std::max(1.0, scale);
    // Tetrahedra from the vertex mean over triangulated facets.
    Eigen::Vector3d inner = Eigen::Vector3d::Zero();
    const std::vector<int> ext = extreme_point_indices(pts);
    for (int i : ext) inner += pts[i].head<3>();
    inner /= static_cast<double>(ext.size());
    double vol = 0.0;
    Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
    for (const auto& f : h.facets) {
        const auto cyc = facet_cycle(pts, f, tol);
        for (std::size_t i = 1; i + 1 < cyc.size(); ++i) {
            const Eigen::Vector3d a = cyc[0] - inner;
            const Eigen::Vector3d b = cyc[i] - inner;
            const Eigen::Vector3d c = cyc[i + 1] - inner;
            const double v = std::abs(a.cross(b).dot(c)) / 6.0;
            vol += v;
            weighted += v * (inner + (a + b + c) / 4.0);
        }
    }
    Eigen::VectorXd out(3);
    out = weighted / vol;
    return out;
}

} // namespace covario
