#include "covario/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "covario/lp.hpp"
#include "covario/parallel.hpp"

namespace covario {

using json = nlohmann::json;

double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

void require_dim(int dim) {
    if (dim < 1) throw std::domain_error("ConvexBody: dimension must be >= 1");
}

double simplex_det_volume(const std::vector<Eigen::VectorXd>& verts) {
    const int n = static_cast<int>(verts.front().size());
    Eigen::MatrixXd e(n, n);
    for (int i = 0; i < n; ++i) e.col(i) = verts[i + 1] - verts[0];
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return std::abs(e.determinant()) / fact;
}

} // namespace

ConvexBody ConvexBody::cube(int dim, double side) {
    require_dim(dim);
    if (!(side > 0.0)) throw std::domain_error("cube: side must be positive");
    ConvexBody b;
    b.kind_ = Kind::Cube;
    b.dim_ = dim;
    b.side_ = side;
    return b;
}

ConvexBody ConvexBody::ball(int dim, double radius) {
    require_dim(dim);
    if (!(radius > 0.0)) throw std::domain_error("ball: radius must be positive");
    ConvexBody b;
    b.kind_ = Kind::Ball;
    b.dim_ = dim;
    b.radius_ = radius;
    return b;
}

ConvexBody ConvexBody::unit_volume_ball(int dim) {
    return ball(dim, std::pow(unit_ball_volume(dim), -1.0 / dim));
}

ConvexBody ConvexBody::regular_simplex(int dim) {
    require_dim(dim);
    const int n = dim;
    // Vertices e_i - 1/(n+1) of the standard simplex in R^{n+1}, expressed in
    // an orthonormal basis of their span; Gram-Schmidt order puts the first
    // vertex on axis 1.
    std::vector<Eigen::VectorXd> w(n + 1, Eigen::VectorXd::Constant(n + 1, -1.0 / (n + 1)));
    for (int i = 0; i <= n; ++i) w[i](i) += 1.0;
    std::vector<Eigen::VectorXd> basis;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = w[i];
        for (const auto& b : basis) v -= b.dot(w[i]) * b;
        v.normalize();
        basis.push_back(v);
    }
    std::vector<Eigen::VectorXd> verts(n + 1, Eigen::VectorXd::Zero(n));
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k < n; ++k) verts[i](k) = basis[k].dot(w[i]);
    const double vol = simplex_det_volume(verts);
    const double scale = std::pow(vol, -1.0 / n);
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (auto& v : verts) centroid += v;
    centroid /= n + 1.0;
    for (auto& v : verts) v = scale * (v - centroid);

    ConvexBody b;
    b.kind_ = Kind::Simplex;
    b.dim_ = n;
    b.vertices_ = std::move(verts);
    b.hrep_ = std::make_shared<HRep>(simplex_hrep(b.vertices_));
    b.exact_volume_ = 1.0;
    b.exact_centroid_ = Eigen::VectorXd::Zero(n);
    for (const auto& v : b.vertices_)
        b.max_vertex_norm_ = std::max(b.max_vertex_norm_, v.norm());
    return b;
}

ConvexBody ConvexBody::vpolytope(std::vector<Eigen::VectorXd> vertices) {
    if (vertices.empty()) throw std::domain_error("vpolytope: empty vertex list");
    const int n = static_cast<int>(vertices.front().size());
    require_dim(n);
    for (const auto& v : vertices)
        if (v.size() != n) throw std::invalid_argument("vpolytope: mixed dimensions");
    // Nonempty interior: vertices must affinely span R^n.
    Eigen::MatrixXd e(n, static_cast<int>(vertices.size()) - 1);
    for (int j = 1; j < static_cast<int>(vertices.size()); ++j)
        e.col(j - 1) = vertices[j] - vertices[0];
    if (vertices.size() < static_cast<std::size_t>(n) + 1 ||
        Eigen::FullPivLU<Eigen::MatrixXd>(e).rank() < n)
        throw std::domain_error("vpolytope: vertices do not span the space");

    ConvexBody b;
    b.kind_ = Kind::VPolytope;
    b.dim_ = n;
    b.vertices_ = std::move(vertices);
    for (const auto& v : b.vertices_)
        b.max_vertex_norm_ = std::max(b.max_vertex_norm_, v.norm());
    if (n <= 3) {
        if (n == 1) {
            double lo = b.vertices_[0](0), hi = lo;
            for (const auto& v : b.vertices_) {
                lo = std::min(lo, v(0));
                hi = std::max(hi, v(0));
            }
            auto h = std::make_shared<HRep>();
            Eigen::VectorXd plus(1), minus(1);
            plus << 1.0;
            minus << -1.0;
            h->facets.push_back({plus, hi});
            h->facets.push_back({minus, -lo});
            b.hrep_ = h;
            b.exact_volume_ = hi - lo;
            b.exact_centroid_ = Eigen::VectorXd::Constant(1, 0.5 * (lo + hi));
        } else {
            b.hrep_ = std::make_shared<HRep>(polytope_hrep(b.vertices_, n));
            b.exact_volume_ = polytope_volume_exact(b.vertices_, n);
            b.exact_centroid_ = polytope_centroid_exact(b.vertices_, n);
        }
    }
    return b;
}

ConvexBody ConvexBody::affine_image(ConvexBody base, Eigen::MatrixXd map,
                                    Eigen::VectorXd shift) {
    const int n = base.dim();
    if (map.rows() != n || map.cols() != n || shift.size() != n)
        throw std::invalid_argument("affine_image: shape mismatch");
    const double det = map.determinant();
    if (std::abs(det) < 1e-14)
        throw std::domain_error("affine_image: singular map");
    ConvexBody b;
    b.kind_ = Kind::Affine;
    b.dim_ = n;
    b.base_ = std::make_shared<ConvexBody>(std::move(base));
    b.map_ = std::move(map);
    b.map_inv_ = b.map_.inverse();
    b.shift_ = std::move(shift);
    b.map_det_ = det;
    return b;
}

const HRep* ConvexBody::hrep() const { return hrep_ ? hrep_.get() : nullptr; }

bool ConvexBody::contains_fast(const Eigen::VectorXd& x, double tol) const {
    switch (kind_) {
    case Kind::Cube:
        return x.lpNorm<Eigen::Infinity>() <= 0.5 * side_ + tol;
    case Kind::Ball:
        return x.norm() <= radius_ + tol;
    case Kind::Simplex:
        return hrep_->contains(x, tol);
    case Kind::VPolytope:
        if (hrep_) return hrep_->contains(x, tol);
        return in_convex_hull(vertices_, x, tol);
    case Kind::Affine:
        return base_->contains_fast(map_inv_ * (x - shift_), tol);
    }
    return false;
}

bool ConvexBody::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != dim_)
        throw std::invalid_argument("contains: dimension mismatch");
    return contains_fast(x, tol);
}

bool ConvexBody::contains_lp(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != dim_)
        throw std::invalid_argument("contains_lp: dimension mismatch");
    switch (kind_) {
    case Kind::Simplex:
    case Kind::VPolytope:
        return in_convex_hull(vertices_, x, std::max(tol, 1e-10));
    case Kind::Affine:
        return base_->contains_lp(map_inv_ * (x - shift_), tol);
    default:
        return contains_fast(x, tol);
    }
}

double ConvexBody::minkowski_functional(const Eigen::VectorXd& x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("minkowski_functional: dimension mismatch");
    switch (kind_) {
    case Kind::Cube:
        return x.lpNorm<Eigen::Infinity>() / (0.5 * side_);
    case Kind::Ball:
        return x.norm() / radius_;
    case Kind::Simplex: {
        double worst = 0.0;
        for (const auto& f : hrep_->facets) {
            if (!(f.offset > 0.0))
                throw std::domain_error("minkowski_functional: origin not interior");
            worst = std::max(worst, f.normal.dot(x) / f.offset);
        }
        return std::max(worst, 0.0);
    }
    case Kind::VPolytope:
    case Kind::Affine: {
        // Bisection over the feasibility test, relative tolerance 1e-10.
        const auto feasible = [&](const Eigen::VectorXd& y) {
            return kind_ == Kind::VPolytope ? contains_lp(y, 1e-10)
                                            : contains(y, 1e-12);
        };
        if (!feasible(Eigen::VectorXd::Zero(dim_)))
            throw std::domain_error("minkowski_functional: origin not interior");
        const double nx = x.norm();
        if (nx == 0.0) return 0.0;
        double lo = 0.0;
        double hi = kind_ == Kind::VPolytope ? nx / max_vertex_norm_ : 1e-8;
        int guard = 0;
        while (!feasible(x / hi)) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 300)
                throw std::domain_error("minkowski_functional: unbounded search");
        }
        while (hi - lo > 1e-10 * hi) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (feasible(x / mid))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }
    }
    return 0.0;
}

double ConvexBody::radial(const Eigen::VectorXd& u) const {
    return 1.0 / minkowski_functional(u);
}

double ConvexBody::support(const Eigen::VectorXd& u) const {
    switch (kind_) {
    case Kind::Cube:
        return 0.5 * side_ * u.lpNorm<1>();
    case Kind::Ball:
        return radius_ * u.norm();
    case Kind::Simplex:
    case Kind::VPolytope: {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : vertices_) best = std::max(best, u.dot(v));
        return best;
    }
    case Kind::Affine:
        return base_->support(map_.transpose() * u) + shift_.dot(u);
    }
    return 0.0;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ConvexBody::bounding_box() const {
    Eigen::VectorXd lo(dim_), hi(dim_);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
        e(i) = 1.0;
        hi(i) = support(e);
        e(i) = -1.0;
        lo(i) = -support(e);
        e(i) = 0.0;
    }
    return {lo, hi};
}

VolumeEstimate ConvexBody::volume(std::size_t mc_samples, std::uint64_t seed) const {
    switch (kind_) {
    case Kind::Cube:
        return {std::pow(side_, dim_), 0.0, true};
    case Kind::Ball:
        return {unit_ball_volume(dim_) * std::pow(radius_, dim_), 0.0, true};
    case Kind::Simplex:
        return {exact_volume_, 0.0, true};
    case Kind::VPolytope: {
        if (exact_volume_ >= 0.0) return {exact_volume_, 0.0, true};
        // Rejection estimate from the bounding box, dim >= 4.
        const auto [lo, hi] = bounding_box();
        double box = 1.0;
        for (int i = 0; i < dim_; ++i) box *= hi(i) - lo(i);
        const CounterRng rng(seed);
        const double hits = blocked_sum(mc_samples, [&](std::size_t idx) {
            Eigen::VectorXd x(dim_);
            for (int k = 0; k < dim_; ++k)
                x(k) = lo(k) + (hi(k) - lo(k)) * rng.uniform(idx, k);
            return contains_fast(x, 0.0) ? 1.0 : 0.0;
        });
        const double p = hits / static_cast<double>(mc_samples);
        const double err = box * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                           static_cast<double>(mc_samples));
        return {box * p, err, false};
    }
    case Kind::Affine: {
        VolumeEstimate v = base_->volume(mc_samples, seed);
        v.value *= std::abs(map_det_);
        v.std_error *= std::abs(map_det_);
        return v;
    }
    }
    return {};
}

Eigen::VectorXd ConvexBody::barycenter(std::size_t mc_samples, std::uint64_t seed) const {
    switch (kind_) {
    case Kind::Cube:
    case Kind::Ball:
    case Kind::Simplex:
        return Eigen::VectorXd::Zero(dim_);
    case Kind::VPolytope: {
        if (exact_centroid_.size() == dim_) return exact_centroid_;
        const CounterRng rng(seed);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim_);
        for (int k = 0; k < dim_; ++k) {
            acc(k) = blocked_sum(mc_samples, [&](std::size_t idx) {
                return sample_point(rng, idx)(k);
            }) / static_cast<double>(mc_samples);
        }
        return acc;
    }
    case Kind::Affine:
        return map_ * base_->barycenter(mc_samples, seed) + shift_;
    }
    return Eigen::VectorXd::Zero(dim_);
}

Eigen::VectorXd ConvexBody::sample_point(const CounterRng& rng,
                                         std::uint64_t index) const {
    Eigen::VectorXd x(dim_);
    switch (kind_) {
    case Kind::Cube:
        for (int k = 0; k < dim_; ++k)
            x(k) = side_ * (rng.uniform(index, k) - 0.5);
        return x;
    case Kind::Ball: {
        double norm_sq = 0.0;
        for (int k = 0; k < dim_; ++k) {
            x(k) = rng.gaussian(index, k);
            norm_sq += x(k) * x(k);
        }
        const double r = radius_ * std::pow(rng.uniform_open(index, 2 * dim_), 1.0 / dim_);
        return x * (r / std::sqrt(norm_sq));
    }
    case Kind::Simplex: {
        // Dirichlet(1,...,1) weights from exponential spacings.
        Eigen::VectorXd w(dim_ + 1);
        double total = 0.0;
        for (int k = 0; k <= dim_; ++k) {
            w(k) = -std::log(rng.uniform_open(index, k));
            total += w(k);
        }
        x.setZero();
        for (int k = 0; k <= dim_; ++k) x += (w(k) / total) * vertices_[k];
        return x;
    }
    case Kind::VPolytope: {
        const auto [lo, hi] = bounding_box();
        for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
            for (int k = 0; k < dim_; ++k)
                x(k) = lo(k) + (hi(k) - lo(k)) *
                                   rng.uniform(index, attempt * dim_ + k);
            if (contains_fast(x, 0.0)) return x;
        }
        throw std::runtime_error("sample_point: rejection sampling failed");
    }
    case Kind::Affine:
        return map_ * base_->sample_point(rng, index) + shift_;
    }
    return x;
}

ConvexBody ConvexBody::materialized() const {
    if (kind_ != Kind::Affine) return *this;
    ConvexBody base = base_->materialized();
    Eigen::MatrixXd T = map_;
    Eigen::VectorXd a = shift_;
    while (base.kind_ == Kind::Affine) { // flatten nested wrappers
        a = T * base.shift_ + a;
        T = T * base.map_;
        base = *base.base_;
    }
    if (base.polytopal()) {
        std::vector<Eigen::VectorXd> verts;
        verts.reserve(base.vertices_.size());
        for (const auto& v : base.vertices_) verts.push_back(T * v + a);
        return vpolytope(std::move(verts));
    }
    if ((base.kind_ == Kind::Ball || base.kind_ == Kind::Cube) &&
        a.lpNorm<Eigen::Infinity>() < 1e-12) {
        // Scalar maps keep the analytic kinds analytic.
        const double c = T(0, 0);
        if ((T - c * Eigen::MatrixXd::Identity(dim_, dim_)).lpNorm<Eigen::Infinity>() <
            1e-12 * std::abs(c)) {
            return base.kind_ == Kind::Ball ? ball(dim_, std::abs(c) * base.radius_)
                                            : cube(dim_, std::abs(c) * base.side_);
        }
    }
    return affine_image(std::move(base), std::move(T), std::move(a));
}

bool ConvexBody::exact_moments_available() const {
    switch (kind_) {
    case Kind::Cube:
    case Kind::Ball:
    case Kind::Simplex:
        return true;
    case Kind::VPolytope:
        return false;
    case Kind::Affine:
        return base_->exact_moments_available();
    }
    return false;
}

std::string ConvexBody::describe() const {
    switch (kind_) {
    case Kind::Cube:
        return "cube(dim=" + std::to_string(dim_) + ",side=" + std::to_string(side_) + ")";
    case Kind::Ball:
        return "ball(dim=" + std::to_string(dim_) + ",radius=" + std::to_string(radius_) + ")";
    case Kind::Simplex:
        return "simplex(dim=" + std::to_string(dim_) + ")";
    case Kind::VPolytope:
        return "vpolytope(dim=" + std::to_string(dim_) +
               ",vertices=" + std::to_string(vertices_.size()) + ")";
    case Kind::Affine:
        return "affine(" + base_->describe() + ")";
    }
    return "?";
}

json ConvexBody::to_json() const {
    switch (kind_) {
    case Kind::Cube:
        return json{{"type", "cube"}, {"dim", dim_}, {"side", side_}};
    case Kind::Ball:
        return json{{"type", "ball"}, {"dim", dim_}, {"radius", radius_}};
    case Kind::Simplex:
        return json{{"type", "simplex"}, {"dim", dim_}};
    case Kind::VPolytope: {
        json verts = json::array();
        for (const auto& v : vertices_) {
            json row = json::array();
            for (int i = 0; i < dim_; ++i) row.push_back(v(i));
            verts.push_back(row);
        }
        return json{{"type", "vpolytope"}, {"dim", dim_}, {"vertices", verts}};
    }
    case Kind::Affine: {
        json mat = json::array();
        for (int i = 0; i < dim_; ++i) {
            json row = json::array();
            for (int j = 0; j < dim_; ++j) row.push_back(map_(i, j));
            mat.push_back(row);
        }
        json sh = json::array();
        for (int i = 0; i < dim_; ++i) sh.push_back(shift_(i));
        return json{{"affine",
                     json{{"matrix", mat}, {"shift", sh}, {"base", base_->to_json()}}}};
    }
    }
    return json{};
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw std::invalid_argument("unknown field '" + it.key() + "' in " + where);
    }
}

} // namespace

ConvexBody ConvexBody::from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("body JSON: expected object");
    if (j.contains("affine")) {
        reject_unknown(j, {"affine"}, "body");
        const json& a = j.at("affine");
        reject_unknown(a, {"matrix", "shift", "base"}, "affine");
        ConvexBody base = from_json(a.at("base"));
        const int n = base.dim();
        Eigen::MatrixXd T(n, n);
        const auto& mat = a.at("matrix");
        if (static_cast<int>(mat.size()) != n)
            throw std::invalid_argument("affine matrix: wrong shape");
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) T(i, k) = mat.at(i).at(k).get<double>();
        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        if (a.contains("shift"))
            for (int i = 0; i < n; ++i) s(i) = a.at("shift").at(i).get<double>();
        return affine_image(std::move(base), std::move(T), std::move(s));
    }
    reject_unknown(j, {"type", "dim", "side", "radius", "vertices"}, "body");
    const std::string type = j.at("type").get<std::string>();
    const int dim = j.at("dim").get<int>();
    if (type == "cube") return cube(dim, j.value("side", 1.0));
    if (type == "ball") {
        if (j.contains("radius")) return ball(dim, j.at("radius").get<double>());
        return unit_volume_ball(dim);
    }
    if (type == "simplex") return regular_simplex(dim);
    if (type == "vpolytope") {
        std::vector<Eigen::VectorXd> verts;
        for (const auto& row : j.at("vertices")) {
            Eigen::VectorXd v(dim);
            if (static_cast<int>(row.size()) != dim)
                throw std::invalid_argument("vpolytope vertex: wrong dimension");
            for (int i = 0; i < dim; ++i) v(i) = row.at(i).get<double>();
            verts.push_back(std::move(v));
        }
        return vpolytope(std::move(verts));
    }
    throw std::invalid_argument("body JSON: unknown type '" + type + "'");
}

ConvexBody difference_body(const ConvexBody& K) {
    switch (K.kind()) {
    case ConvexBody::Kind::Cube:
        return ConvexBody::cube(K.dim(), 2.0 * K.side());
    case ConvexBody::Kind::Ball:
        return ConvexBody::ball(K.dim(), 2.0 * K.radius());
    case ConvexBody::Kind::Simplex:
    case ConvexBody::Kind::VPolytope: {
        const auto& vs = K.vertices();
        std::vector<Eigen::VectorXd> diffs;
        diffs.reserve(vs.size() * vs.size());
        for (const auto& a : vs)
            for (const auto& b : vs) diffs.push_back(a - b);
        std::vector<Eigen::VectorXd> extremes;
        if (K.dim() == 2) {
            for (int i : hull2d_indices(diffs)) extremes.push_back(diffs[i]);
        } else {
            for (int i : extreme_point_indices(diffs)) extremes.push_back(diffs[i]);
        }
        return ConvexBody::vpolytope(std::move(extremes));
    }
    case ConvexBody::Kind::Affine:
        return ConvexBody::affine_image(difference_body(K.base()), K.affine_map(),
                                        Eigen::VectorXd::Zero(K.dim()));
    }
    throw std::logic_error("difference_body: unreachable");
}

namespace {

// Exact second moment about the barycenter for the analytic kinds, pushed
// through affine wrappers.
struct ExactMoments {
    Eigen::VectorXd barycenter;
    Eigen::MatrixXd moment;
    double volume;
};

ExactMoments exact_moments(const ConvexBody& K) {
    const int n = K.dim();
    switch (K.kind()) {
    case ConvexBody::Kind::Cube: {
        const double v = std::pow(K.side(), n);
        const double m = std::pow(K.side(), n + 2) / 12.0;
        return {Eigen::VectorXd::Zero(n), m * Eigen::MatrixXd::Identity(n, n), v};
    }
    case ConvexBody::Kind::Ball: {
        const double v = unit_ball_volume(n) * std::pow(K.radius(), n);
        const double m = unit_ball_volume(n) * std::pow(K.radius(), n + 2) / (n + 2.0);
        return {Eigen::VectorXd::Zero(n), m * Eigen::MatrixXd::Identity(n, n), v};
    }
    case ConvexBody::Kind::Simplex: {
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
        for (const auto& v : K.vertices()) sum += v * v.transpose();
        const double w = 1.0 / ((n + 1.0) * (n + 2.0)); // |K| = 1
        return {Eigen::VectorXd::Zero(n), w * sum, 1.0};
    }
    case ConvexBody::Kind::Affine: {
        const ExactMoments base = exact_moments(K.base());
        const Eigen::MatrixXd& T = K.affine_map();
        const double jac = std::abs(T.determinant());
        return {T * base.barycenter + K.affine_shift(),
                jac * T * base.moment * T.transpose(), jac * base.volume};
    }
    default:
        throw std::domain_error("exact moments unavailable for this body");
    }
}

} // namespace

IsotropyData isotropy_data(const ConvexBody& K, const std::string& method,
                           std::size_t samples, std::uint64_t seed) {
    const int n = K.dim();
    IsotropyData data;
    data.seed = seed;
    const bool exact = method == "exact" ||
                       (method == "auto" && K.exact_moments_available());
    if (method != "exact" && method != "mc" && method != "auto")
        throw std::invalid_argument("isotropy_data: method must be auto|exact|mc");
    if (exact) {
        const ExactMoments em = exact_moments(K);
        data.barycenter = em.barycenter;
        data.second_moment = em.moment;
        data.volume = em.volume;
        data.method = "exact";
        data.moment_err = Eigen::MatrixXd::Zero(n, n);
    } else {
        if (samples < 1000)
            throw std::invalid_argument("isotropy_data: MC needs >= 1000 samples");
        const CounterRng rng(substream(seed, 17));
        const std::size_t N = samples;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k)
            mean(k) = blocked_sum(N, [&](std::size_t i) {
                return K.sample_point(rng, i)(k);
            }) / static_cast<double>(N);
        Eigen::MatrixXd mom = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd err = Eigen::MatrixXd::Zero(n, n);
        const VolumeEstimate vol = K.volume(samples, substream(seed, 23));
        for (int r = 0; r < n; ++r) {
            for (int c = r; c < n; ++c) {
                const SumPair s = blocked_sum2(N, [&](std::size_t i) {
                    const Eigen::VectorXd x = K.sample_point(rng, i);
                    return (x(r) - mean(r)) * (x(c) - mean(c));
                });
                const double m = s.sum / static_cast<double>(N);
                const double var =
                    std::max(s.sum_sq / static_cast<double>(N) - m * m, 0.0);
                mom(r, c) = mom(c, r) = vol.value * m;
                err(r, c) = err(c, r) =
                    vol.value * std::sqrt(var / static_cast<double>(N));
            }
        }
        data.barycenter = mean;
        data.second_moment = mom;
        data.moment_err = err;
        data.volume = vol.value;
        data.volume_err = vol.std_error;
        data.method = "monte-carlo";
        data.samples = samples;
    }
    const double det = data.second_moment.determinant();
    if (!(det > 0.0))
        throw std::domain_error("isotropy_data: singular second-moment matrix");
    data.isotropic_constant = std::sqrt(std::pow(det, 1.0 / n) /
                                        std::pow(data.volume, (n + 2.0) / n));
    if (data.method == "monte-carlo") {
        double rel = 0.0;
        for (int i = 0; i < n; ++i)
            rel += data.moment_err(i, i) / data.second_moment(i, i);
        rel = rel / (2.0 * n) +
              (n + 2.0) / (2.0 * n) * data.volume_err / data.volume;
        data.L_err = data.isotropic_constant * rel;
    }
    return data;
}

ConvexBody isotropic_normalize(const ConvexBody& K, const IsotropyData& data) {
    const int n = K.dim();
    if (data.second_moment.rows() != n)
        throw std::invalid_argument("isotropic_normalize: data/body mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(data.second_moment);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::domain_error("isotropic_normalize: moment matrix not PD");
    const Eigen::MatrixXd inv_sqrt =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
    const double det = data.second_moment.determinant();
    const double c = std::pow(std::sqrt(det) / data.volume, 1.0 / n);
    const Eigen::MatrixXd A = c * inv_sqrt;
    return ConvexBody::affine_image(K, A, -A * data.barycenter);
}

} // namespace covario
