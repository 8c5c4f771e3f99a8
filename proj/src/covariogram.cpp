#include "covario/covariogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "covario/numerics.hpp"
#include "covario/parallel.hpp"
#include "covario/rng.hpp"

namespace covario {

RayValue ray_moment(const RayFunction& g, const Eigen::VectorXd& u, double p,
                    double tol) {
    if (const auto exact = g.ray_moment_exact(u, p)) return *exact;
    const double R = g.support_radial(u);
    if (!(R > 0.0)) return {0.0, 0.0};
    const auto f = [&](double t) { return g.eval_ray(u, t); };
    const double crude = g.at_zero() * std::pow(R, p);
    QuadratureResult q = integrate_power_weighted(f, p, R, tol * crude);
    if (q.value > 0.0 && q.abs_error > tol * q.value) {
        // Refine relative to the actual magnitude.
        q = integrate_power_weighted(f, p, R, tol * q.value);
    }
    return {q.value, q.abs_error};
}

namespace {

double pow_small(double base, double p) {
    const int ip = static_cast<int>(p);
    if (p == static_cast<double>(ip) && ip >= 0 && ip <= 8) {
        double r = 1.0;
        for (int k = 0; k < ip; ++k) r *= base;
        return r;
    }
    return std::pow(base, p);
}

double ball_cap_volume(int n, double r, double h) {
    // Spherical cap of height h (0 <= h <= r) via the regularized
    // incomplete Beta function.
    if (h <= 0.0) return 0.0;
    const double x = std::clamp((2.0 * r * h - h * h) / (r * r), 0.0, 1.0);
    return 0.5 * unit_ball_volume(n) * std::pow(r, n) *
           boost::math::ibeta(0.5 * (n + 1.0), 0.5, x);
}

} // namespace

Covariogram::Covariogram(ConvexBody K, Backend backend, std::size_t samples,
                         std::uint64_t seed)
    : body_(K.materialized()), diff_(difference_body(body_)), seed_(seed) {
    const VolumeEstimate vol = body_.volume(std::max<std::size_t>(samples, 200000),
                                            substream(seed, 3));
    volume_ = vol.value;

    const bool simplex_like =
        body_.kind() == ConvexBody::Kind::Simplex ||
        (body_.kind() == ConvexBody::Kind::VPolytope &&
         body_.vertices().size() == static_cast<std::size_t>(body_.dim()) + 1);
    switch (body_.kind()) {
    case ConvexBody::Kind::Cube:
        form_ = Form::Cube;
        break;
    case ConvexBody::Kind::Ball:
        form_ = Form::Ball;
        break;
    default:
        form_ = simplex_like ? Form::Simplex : Form::MonteCarlo;
        break;
    }
    if (backend == Backend::MonteCarlo) form_ = Form::MonteCarlo;
    if (backend == Backend::ClosedForm && form_ == Form::MonteCarlo)
        throw std::invalid_argument(
            "Covariogram: no closed form for this body; use MonteCarlo");

    if (form_ == Form::MonteCarlo) {
        const int n = body_.dim();
        const bool analytic_rays = body_.kind() == ConvexBody::Kind::Cube ||
                                   body_.kind() == ConvexBody::Kind::Ball;
        if (!analytic_rays) {
            const HRep* h = body_.polytopal() ? body_.hrep() : nullptr;
            if (!h)
                throw std::domain_error(
                    "Covariogram: MC backend needs exact facets (dim <= 3)");
            for (const auto& f : h->facets) {
                for (int k = 0; k < n; ++k) facet_flat_.push_back(f.normal(k));
                facet_flat_.push_back(f.offset);
            }
        }
        samples_ = samples;
        sample_flat_.resize(samples_ * static_cast<std::size_t>(n));
        const CounterRng rng(substream(seed, 1));
        map_index(samples_, [&](std::size_t i) {
            const Eigen::VectorXd x = body_.sample_point(rng, i);
            for (int k = 0; k < n; ++k) sample_flat_[i * n + k] = x(k);
        });
    }
}

double Covariogram::minkowski_diff(const Eigen::VectorXd& x) const {
    switch (form_) {
    case Form::Cube:
        return x.lpNorm<Eigen::Infinity>() / body_.side();
    case Form::Ball:
        return x.norm() / (2.0 * body_.radius());
    default:
        break;
    }
    if (const HRep* h = diff_.hrep()) {
        double worst = 0.0;
        for (const auto& f : h->facets)
            worst = std::max(worst, f.normal.dot(x) / f.offset);
        return worst;
    }
    return diff_.minkowski_functional(x);
}

double Covariogram::exit_parameter(const double* y, const double* d) const {
    const int n = body_.dim();
    switch (body_.kind()) {
    case ConvexBody::Kind::Cube: {
        const double half = 0.5 * body_.side();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (d[i] > 1e-15)
                hi = std::min(hi, (half - y[i]) / d[i]);
            else if (d[i] < -1e-15)
                hi = std::min(hi, (-half - y[i]) / d[i]);
        }
        return std::max(hi, 0.0);
    }
    case ConvexBody::Kind::Ball: {
        const double r = body_.radius();
        double a = 0.0, b = 0.0, c = -r * r;
        for (int i = 0; i < n; ++i) {
            a += d[i] * d[i];
            b += y[i] * d[i];
            c += y[i] * y[i];
        }
        const double disc = std::max(b * b - a * c, 0.0);
        return std::max((-b + std::sqrt(disc)) / a, 0.0);
    }
    default: {
        // The facet list exists for every polytopal MC backend.
        double hi = std::numeric_limits<double>::infinity();
        const std::size_t stride = static_cast<std::size_t>(n) + 1;
        for (std::size_t f = 0; f < facet_flat_.size(); f += stride) {
            const double* a = facet_flat_.data() + f;
            double ad = 0.0, ay = 0.0;
            for (int i = 0; i < n; ++i) {
                ad += a[i] * d[i];
                ay += a[i] * y[i];
            }
            if (ad > 1e-15) hi = std::min(hi, (a[n] - ay) / ad);
        }
        return std::max(hi, 0.0);
    }
    }
}

RayValue Covariogram::eval(const Eigen::VectorXd& x) const {
    if (x.size() != body_.dim())
        throw std::invalid_argument("Covariogram::eval: dimension mismatch");
    const int n = body_.dim();
    switch (form_) {
    case Form::Cube: {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) {
            const double overlap = body_.side() - std::abs(x(i));
            if (overlap <= 0.0) return {0.0, 0.0};
            prod *= overlap;
        }
        return {prod, 0.0};
    }
    case Form::Ball: {
        const double d = x.norm();
        if (d >= 2.0 * body_.radius()) return {0.0, 0.0};
        return {2.0 * ball_cap_volume(n, body_.radius(), body_.radius() - 0.5 * d),
                0.0};
    }
    case Form::Simplex: {
        const double m = minkowski_diff(x);
        if (m >= 1.0) return {0.0, 0.0};
        return {volume_ * std::pow(1.0 - m, n), 0.0};
    }
    case Form::MonteCarlo: {
        const double* flat = sample_flat_.data();
        SumPair s;
        if (body_.kind() == ConvexBody::Kind::Cube) {
            const double half = 0.5 * body_.side();
            s = blocked_sum2(samples_, [&](std::size_t i) {
                const double* y = flat + i * n;
                for (int k = 0; k < n; ++k)
                    if (std::abs(y[k] - x(k)) > half) return 0.0;
                return 1.0;
            });
        } else if (body_.kind() == ConvexBody::Kind::Ball) {
            const double r_sq = body_.radius() * body_.radius();
            s = blocked_sum2(samples_, [&](std::size_t i) {
                const double* y = flat + i * n;
                double d = 0.0;
                for (int k = 0; k < n; ++k)
                    d += (y[k] - x(k)) * (y[k] - x(k));
                return d <= r_sq ? 1.0 : 0.0;
            });
        } else {
            // y - x in K iff <a, y> <= b + <a, x> facet by facet.
            const std::size_t stride = static_cast<std::size_t>(n) + 1;
            std::vector<double> threshold;
            for (std::size_t f = 0; f < facet_flat_.size(); f += stride) {
                const double* a = facet_flat_.data() + f;
                double ax = a[n];
                for (int k = 0; k < n; ++k) ax += a[k] * x(k);
                threshold.push_back(ax);
            }
            const std::size_t nf = threshold.size();
            s = blocked_sum2(samples_, [&](std::size_t i) {
                const double* y = flat + i * n;
                for (std::size_t f = 0; f < nf; ++f) {
                    const double* a = facet_flat_.data() + f * stride;
                    double ay = 0.0;
                    for (int k = 0; k < n; ++k) ay += a[k] * y[k];
                    if (ay > threshold[f]) return 0.0;
                }
                return 1.0;
            });
        }
        const double p = s.sum / static_cast<double>(samples_);
        const double err = volume_ * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                               static_cast<double>(samples_));
        return {volume_ * p, err};
    }
    }
    return {0.0, 0.0};
}

double Covariogram::eval_ray(const Eigen::VectorXd& u, double t) const {
    return eval(t * u).value;
}

double Covariogram::support_radial(const Eigen::VectorXd& u) const {
    switch (form_) {
    case Form::Cube:
        return body_.side() / u.lpNorm<Eigen::Infinity>();
    case Form::Ball:
        return 2.0 * body_.radius() / u.norm();
    default:
        break;
    }
    if (const HRep* h = diff_.hrep()) return h->radial(u);
    return diff_.radial(u);
}

std::optional<RayValue> Covariogram::ray_moment_exact(const Eigen::VectorXd& u,
                                                      double p) const {
    if (form_ != Form::MonteCarlo) return std::nullopt;
    const int n = body_.dim();
    double mu[12];
    if (n > 12)
        throw std::domain_error("Covariogram: MC ray moments support dim <= 12");
    for (int k = 0; k < n; ++k) mu[k] = -u(k);
    const double* flat = sample_flat_.data();
    const SumPair s = blocked_sum2(samples_, [&](std::size_t i) {
        // {t >= 0 : y - t u in K} = [0, b]; the sample contributes b^p.
        const double b = exit_parameter(flat + i * n, mu);
        return pow_small(b, p);
    });
    const double mean = s.sum / static_cast<double>(samples_);
    const double var =
        std::max(s.sum_sq / static_cast<double>(samples_) - mean * mean, 0.0);
    return RayValue{volume_ * mean,
                    volume_ * std::sqrt(var / static_cast<double>(samples_))};
}

double Covariogram::weighted_ray_moment_sample_error(
    const DirectionSet& ds, const std::vector<double>& coeff, double p) const {
    if (form_ != Form::MonteCarlo) return 0.0;
    const int n = body_.dim();
    if (n > 12) throw std::domain_error("sample error: dim <= 12");
    std::vector<double> z(samples_, 0.0);
    const double* flat = sample_flat_.data();
    for (std::size_t d = 0; d < ds.count(); ++d) {
        if (coeff[d] == 0.0) continue;
        double mu[12];
        for (int k = 0; k < n; ++k) mu[k] = -ds.dir(d)(k);
        const double c = coeff[d] * volume_;
        map_index(samples_, [&](std::size_t j) {
            z[j] += c * pow_small(exit_parameter(flat + j * n, mu), p);
        });
    }
    const SumPair s = blocked_sum2(samples_, [&](std::size_t j) { return z[j]; });
    const double mean = s.sum / static_cast<double>(samples_);
    const double var =
        std::max(s.sum_sq / static_cast<double>(samples_) - mean * mean, 0.0);
    return std::sqrt(var / static_cast<double>(samples_));
}

std::optional<double> Covariogram::support_volume_exact() const {
    const VolumeEstimate v = diff_.volume();
    if (v.exact) return v.value;
    return std::nullopt;
}

Eigen::VectorXd Covariogram::sample_difference(std::uint64_t pair_index) const {
    const CounterRng rng(substream(seed_, 5));
    return body_.sample_point(rng, 2 * pair_index) -
           body_.sample_point(rng, 2 * pair_index + 1);
}

Eigen::VectorXd Covariogram::sample_body(std::uint64_t index) const {
    const CounterRng rng(substream(seed_, 6));
    return body_.sample_point(rng, index);
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::VectorXd angle_dir(double theta) {
    Eigen::VectorXd u(2);
    u << std::cos(theta), std::sin(theta);
    return u;
}

} // namespace

// The sample-level error of an MC source is bounded conservatively: the same
// body samples back every direction, so it does not shrink with the
// direction count.
SphereMeanValue sphere_weighted_ray_moment(
    const RayFunction& g, double p,
    const std::function<double(const Eigen::VectorXd&)>& w, std::size_t dirs,
    std::uint64_t seed, double tol) {
    if (g.dim() == 2 && g.pointwise_exact()) {
        const std::size_t panels = std::max<std::size_t>(dirs, 16);
        // Inner ray integrals run a factor tighter than the angular rule, so
        // their noise stays below each panel's share of the budget.
        const double inner_tol = 0.05 * tol;
        const auto f = [&](double theta) {
            const Eigen::VectorXd u = angle_dir(theta);
            return w(u) * ray_moment(g, u, p, inner_tol).value;
        };
        double probe = 0.0;
        for (int k = 0; k < 8; ++k) probe += std::abs(f(0.7853981633974483 * k));
        probe = std::max(probe / 8.0, 1e-12 * g.at_zero());
        const double panel_tol = tol * probe * kTwoPi / static_cast<double>(panels);
        std::vector<double> values(panels), errs(panels);
        map_index(panels, [&](std::size_t k) {
            const double a = kTwoPi * static_cast<double>(k) / panels;
            const double b = kTwoPi * static_cast<double>(k + 1) / panels;
            const QuadratureResult q = integrate_adaptive(f, a, b, panel_tol);
            values[k] = q.value;
            errs[k] = q.abs_error;
        });
        SphereMeanValue out;
        for (std::size_t k = 0; k < panels; ++k) {
            out.value += values[k];
            out.err += errs[k];
        }
        out.value /= kTwoPi;
        out.err /= kTwoPi;
        return out;
    }

    std::size_t count = dirs;
    bool grid = false;
    if (g.dim() == 2) {
        count = std::max<std::size_t>(dirs, 512);
        grid = true;
    }
    const DirectionSet ds = sphere_directions(g.dim(), count, seed);
    std::vector<double> vals(count), errs(count);
    map_index(count, [&](std::size_t i) {
        const Eigen::VectorXd u = ds.dir(i);
        const RayValue rv = ray_moment(g, u, p, tol);
        vals[i] = w(u) * rv.value;
        errs[i] = std::abs(w(u)) * rv.std_error;
    });
    double sum = 0.0, sum_sq = 0.0, err_mean = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sum += vals[i];
        sum_sq += vals[i] * vals[i];
        err_mean += errs[i];
    }
    const double mean = sum / static_cast<double>(count);
    err_mean /= static_cast<double>(count);
    double dir_err = 0.0;
    if (!grid) {
        const double var =
            std::max(sum_sq / static_cast<double>(count) - mean * mean, 0.0);
        dir_err = std::sqrt(var / static_cast<double>(count));
    }
    return {mean, dir_err + err_mean};
}

namespace {

// Rejection sample from K - K through the support radial oracle.
Eigen::VectorXd sample_in_support(const Covariogram& g, const CounterRng& rng,
                                  std::uint64_t index) {
    const auto [lo, hi] = g.support_body().bounding_box();
    const int n = g.dim();
    Eigen::VectorXd x(n);
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        for (int k = 0; k < n; ++k)
            x(k) = lo(k) + (hi(k) - lo(k)) * rng.uniform(index, attempt * n + k);
        const double r = x.norm();
        if (r == 0.0) return x;
        if (r <= g.support_radial(x / r)) return x;
    }
    throw std::runtime_error("sample_in_support: rejection failed");
}

// Standard error of g^{1/n} by the delta method, with a usable bound when
// the estimate itself is zero.
double power_std_error(double value, double std_error, int n) {
    if (std_error == 0.0) return 0.0;
    if (value <= std_error)
        return std::pow(3.0 * std_error, 1.0 / n);
    return std::pow(value, 1.0 / n - 1.0) * std_error / n;
}

} // namespace

VerificationReport check_probability_density(const Covariogram& g,
                                             std::size_t dirs,
                                             std::uint64_t seed) {
    const int n = g.dim();
    const double target = g.body_volume() * g.body_volume();
    const SphereMeanValue m = sphere_weighted_ray_moment(
        g, static_cast<double>(n), [](const Eigen::VectorXd&) { return 1.0; },
        dirs, substream(seed, 31), 1e-9);
    const double integral = unit_ball_volume(n) * m.value;
    const double err = unit_ball_volume(n) * m.err;

    VerificationReport rep;
    rep.check = "covariogram_probability_density";
    rep.lhs = integral;
    rep.rhs = target;
    rep.error_estimate = err;
    rep.tolerance = std::max(3.0 * err, 1e-8 * std::max(1.0, target));
    rep.worst_margin = rep.tolerance - std::abs(integral - target);
    rep.pass = rep.worst_margin >= 0.0;
    return rep;
}

VerificationReport check_one_over_n_concavity(const Covariogram& g,
                                              std::size_t trials,
                                              std::uint64_t seed, double tol) {
    const int n = g.dim();
    const CounterRng rng_x(substream(seed, 42));
    const CounterRng rng_y(substream(seed, 43));
    const bool closed = g.closed_form();
    const double base_tol = tol > 0.0 ? tol : 1e-9;

    std::vector<double> margins(trials), tols(trials);
    map_index(trials, [&](std::size_t i) {
        const Eigen::VectorXd x = sample_in_support(g, rng_x, i);
        const Eigen::VectorXd y = sample_in_support(g, rng_y, i);
        const RayValue gx = g.eval(x);
        const RayValue gy = g.eval(y);
        const RayValue gm = g.eval(0.5 * (x + y));
        const double lhs = std::pow(gm.value, 1.0 / n);
        const double rhs = 0.5 * (std::pow(gx.value, 1.0 / n) +
                                  std::pow(gy.value, 1.0 / n));
        margins[i] = lhs - rhs;
        if (closed) {
            tols[i] = base_tol;
        } else {
            // Summed (not quadrature-combined) deltas: the three estimates
            // share the sample set, so this is a conservative 3-sigma band.
            tols[i] = 3.0 * (power_std_error(gm.value, gm.std_error, n) +
                             0.5 * power_std_error(gx.value, gx.std_error, n) +
                             0.5 * power_std_error(gy.value, gy.std_error, n));
            tols[i] = std::max(tols[i], base_tol);
        }
    });

    VerificationReport rep;
    rep.check = "covariogram_one_over_n_concavity";
    std::size_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trials; ++i) {
        const double slack = margins[i] + tols[i];
        if (slack < 0.0) ++violations;
        worst = std::min(worst, margins[i]);
    }
    rep.worst_margin = worst;
    rep.tolerance = closed ? base_tol : 0.0;
    rep.pass = violations == 0;
    rep.detail = "trials=" + std::to_string(trials) +
                 " violations=" + std::to_string(violations);
    return rep;
}

VerificationReport second_moment_identity(const Covariogram& g,
                                          const Eigen::VectorXd& theta,
                                          std::size_t dirs,
                                          std::uint64_t seed) {
    const int n = g.dim();
    const ConvexBody& K = g.body();
    const Eigen::VectorXd b = K.barycenter(200000, substream(seed, 3));
    if (b.lpNorm<Eigen::Infinity>() > 1e-6)
        throw std::domain_error("second_moment_identity: body not centered");
    const VolumeEstimate vol = K.volume(200000, substream(seed, 4));
    if (std::abs(vol.value - 1.0) > std::max(1e-6, 3.0 * vol.std_error))
        throw std::domain_error("second_moment_identity: |K| must be 1");

    double left = 0.0, left_err = 0.0;
    if (g.closed_form()) {
        const SphereMeanValue m = sphere_weighted_ray_moment(
            g, n + 2.0,
            [&](const Eigen::VectorXd& u) {
                const double d = u.dot(theta);
                return d * d;
            },
            dirs, substream(seed, 51), 1e-10);
        const double factor = unit_ball_volume(n) * n / (n + 2.0);
        left = factor * m.value;
        left_err = factor * m.err;
    } else {
        const std::size_t pairs = std::max<std::size_t>(g.samples() / 2, 1000);
        const SumPair s = blocked_sum2(pairs, [&](std::size_t i) {
            const double d = g.sample_difference(i).dot(theta);
            return d * d;
        });
        const double mean = s.sum / static_cast<double>(pairs);
        const double var =
            std::max(s.sum_sq / static_cast<double>(pairs) - mean * mean, 0.0);
        const double scale = g.body_volume() * g.body_volume();
        left = scale * mean;
        left_err = scale * std::sqrt(var / static_cast<double>(pairs));
    }

    double right = 0.0, right_err = 0.0;
    if (K.exact_moments_available()) {
        const IsotropyData data = isotropy_data(K, "exact");
        right = theta.dot(data.second_moment * theta);
    } else {
        const std::size_t N = std::max<std::size_t>(g.samples(), 10000);
        const SumPair s = blocked_sum2(N, [&](std::size_t i) {
            const double d = g.sample_body(i).dot(theta);
            return d * d;
        });
        const double mean = s.sum / static_cast<double>(N);
        const double var =
            std::max(s.sum_sq / static_cast<double>(N) - mean * mean, 0.0);
        right = vol.value * mean;
        right_err = vol.value * std::sqrt(var / static_cast<double>(N));
    }

    VerificationReport rep;
    rep.check = "covariogram_second_moment_identity";
    rep.lhs = left;
    rep.rhs = right;
    rep.error_estimate = left_err + 2.0 * right_err;
    rep.tolerance = std::max(3.0 * rep.error_estimate,
                             1e-9 * std::max(1.0, std::abs(left)));
    rep.worst_margin = rep.tolerance - std::abs(left - 2.0 * right);
    rep.pass = rep.worst_margin >= 0.0;
    return rep;
}

VerificationReport simplex_levelset_check(const ConvexBody& K,
                                          const std::vector<double>& levels,
                                          std::size_t dirs, std::uint64_t seed,
                                          Covariogram::Backend backend,
                                          std::size_t samples) {
    const Covariogram g(K, backend, samples, substream(seed, 61));
    const int n = g.dim();
    const DirectionSet ds = sphere_directions(n, dirs, substream(seed, 62));

    std::vector<double> worst_by_dir(ds.count(), 0.0);
    map_index(ds.count(), [&](std::size_t i) {
        const Eigen::VectorXd u = ds.dir(i);
        const double R = g.support_radial(u);
        double worst = 0.0;
        for (const double level : levels) {
            if (level <= 0.0 || level > 1.0)
                continue;
            const double threshold = level * g.body_volume();
            // sup { t : g(tu) >= threshold } by bisection; g is
            // non-increasing along rays.
            double lo = 0.0, hi = R;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (g.eval_ray(u, mid) >= threshold)
                    lo = mid;
                else
                    hi = mid;
            }
            const double predicted = (1.0 - std::pow(level, 1.0 / n)) * R;
            worst = std::max(worst, std::abs(0.5 * (lo + hi) - predicted) / R);
        }
        worst_by_dir[i] = worst;
    });

    double worst = 0.0;
    std::size_t worst_dir = 0;
    for (std::size_t i = 0; i < ds.count(); ++i) {
        if (worst_by_dir[i] > worst) {
            worst = worst_by_dir[i];
            worst_dir = i;
        }
    }

    VerificationReport rep;
    rep.check = "simplex_levelset";
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.tolerance = g.closed_form() ? 1e-7 : 0.05;
    rep.error_estimate = 0.0;
    rep.worst_margin = rep.tolerance - worst;
    rep.pass = rep.worst_margin >= 0.0;
    rep.detail = "worst relative level-set mismatch at direction " +
                 std::to_string(worst_dir);
    return rep;
}

} // namespace covario
