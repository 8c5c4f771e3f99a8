#include "covario/alpha1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covario/numerics.hpp"
#include "covario/parallel.hpp"
#include "covario/rng.hpp"

namespace covario {

AlphaConcave1D AlphaConcave1D::extremal(double alpha, double M) {
    return from_profile(alpha, {0.0, M}, {1.0, 0.0});
}

AlphaConcave1D AlphaConcave1D::from_profile(double alpha,
                                            std::vector<double> knot_t,
                                            std::vector<double> knot_phi) {
    if (!(alpha > 0.0)) throw std::domain_error("AlphaConcave1D: alpha > 0");
    if (knot_t.size() != knot_phi.size() || knot_t.size() < 2)
        throw std::invalid_argument("AlphaConcave1D: need matching knot lists");
    if (knot_t.front() != 0.0 || std::abs(knot_phi.front() - 1.0) > 1e-12)
        throw std::invalid_argument("AlphaConcave1D: profile starts at (0, 1)");
    for (std::size_t i = 1; i < knot_t.size(); ++i) {
        if (!(knot_t[i] > knot_t[i - 1]))
            throw std::invalid_argument("AlphaConcave1D: knots must increase");
        if (knot_phi[i] < -1e-12)
            throw std::invalid_argument("AlphaConcave1D: profile negative");
    }
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < knot_t.size(); ++i) {
        const double slope =
            (knot_phi[i] - knot_phi[i - 1]) / (knot_t[i] - knot_t[i - 1]);
        if (slope > prev_slope + 1e-10)
            throw std::invalid_argument("AlphaConcave1D: profile not concave");
        prev_slope = slope;
    }
    AlphaConcave1D f;
    f.alpha_ = alpha;
    f.knot_t_ = std::move(knot_t);
    f.knot_phi_ = std::move(knot_phi);
    return f;
}

AlphaConcave1D AlphaConcave1D::random(std::uint64_t seed, double alpha, double M,
                                      int pieces) {
    if (pieces < 2) throw std::domain_error("AlphaConcave1D::random: pieces >= 2");
    if (!(M > 0.0)) throw std::domain_error("AlphaConcave1D::random: M > 0");
    const CounterRng rng(seed);
    // Stratified breakpoints: strictly increasing inside (0, M).
    std::vector<double> breaks(pieces - 1);
    for (int i = 0; i < pieces - 1; ++i)
        breaks[i] = M *
                    (static_cast<double>(i) + 0.6 +
                     0.8 * rng.uniform(0, static_cast<std::uint64_t>(i))) /
                    static_cast<double>(pieces);

    std::vector<double> slopes(pieces);
    for (int i = 0; i < pieces; ++i)
        slopes[i] = (-2.5 + 2.8 * rng.uniform(1, static_cast<std::uint64_t>(i))) / M;
    std::sort(slopes.rbegin(), slopes.rend());

    std::vector<double> t(pieces + 1), phi(pieces + 1);
    t[0] = 0.0;
    for (int i = 0; i < pieces - 1; ++i) t[i + 1] = breaks[i];
    t[pieces] = M;
    phi[0] = 1.0;
    for (int i = 0; i < pieces; ++i)
        phi[i + 1] = phi[i] + slopes[i] * (t[i + 1] - t[i]);
    if (phi[pieces] < 0.0) {
        // Concave with phi(0) = 1: nonnegativity only needs phi(M) >= 0.
        // Shrinking all slopes by one factor keeps them sorted.
        const double end = 0.3 * rng.uniform(2, 0);
        const double c = (1.0 - end) / (1.0 - phi[pieces]);
        for (int i = 0; i < pieces; ++i)
            phi[i + 1] = phi[i] + c * slopes[i] * (t[i + 1] - t[i]);
    }
    for (double& v : phi) v = std::max(v, 0.0);
    return from_profile(alpha, std::move(t), std::move(phi));
}

double AlphaConcave1D::profile(double t) const {
    if (t < 0.0 || t > knot_t_.back()) return 0.0;
    const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    const std::size_t hi = std::min<std::size_t>(it - knot_t_.begin(),
                                                 knot_t_.size() - 1);
    const std::size_t lo = hi - (hi > 0 ? 1 : 0);
    if (hi == lo) return knot_phi_[lo];
    const double w = (t - knot_t_[lo]) / (knot_t_[hi] - knot_t_[lo]);
    return std::max(knot_phi_[lo] + w * (knot_phi_[hi] - knot_phi_[lo]), 0.0);
}

double AlphaConcave1D::value(double t) const {
    const double p = profile(t);
    return p <= 0.0 ? 0.0 : std::pow(p, 1.0 / alpha_);
}

double AlphaConcave1D::g_function(double p, double tol) const {
    if (!(p > 0.0)) throw std::domain_error("g_function: p > 0");
    const auto g = [&](double t) { return value(t); };
    // Panels split at the knots so each integrand is smooth.
    double integral = 0.0;
    double err = 0.0;
    const double crude = std::pow(support_end(), p) *
                         std::max(1.0, std::pow(*std::max_element(knot_phi_.begin(),
                                                                  knot_phi_.end()),
                                                1.0 / alpha_));
    const double panel_tol = tol * crude / static_cast<double>(pieces());
    for (std::size_t i = 0; i + 1 < knot_t_.size(); ++i) {
        const double a = knot_t_[i];
        const double b = knot_t_[i + 1];
        QuadratureResult q;
        if (i == 0) {
            q = integrate_power_weighted(g, p, b, panel_tol);
        } else {
            q = integrate_adaptive(
                [&](double t) { return p * std::pow(t, p - 1.0) * g(t); }, a, b,
                panel_tol);
        }
        integral += q.value;
        err += q.abs_error;
    }
    (void)err;
    return std::pow(gen_binom(1.0 / alpha_ + p, 1.0 / alpha_) * integral, 1.0 / p);
}

VerificationReport monotonicity_suite(std::size_t trials_per_alpha,
                                      const std::vector<double>& alphas,
                                      const std::vector<double>& p_grid,
                                      std::uint64_t seed, double tol) {
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1]))
            throw std::invalid_argument("monotonicity_suite: p grid must increase");

    struct Worst {
        double violation = -std::numeric_limits<double>::infinity();
        std::uint64_t seed = 0;
        int pieces = 0;
        double alpha = 0.0;
    };

    const std::size_t total = trials_per_alpha * alphas.size();
    std::vector<double> violations(total);
    std::vector<std::uint64_t> fseeds(total);
    std::vector<int> fpieces(total);
    map_index(total, [&](std::size_t idx) {
        const std::size_t a_idx = idx / trials_per_alpha;
        const double alpha = alphas[a_idx];
        const std::uint64_t fseed = substream(seed, idx + 1);
        const CounterRng meta(fseed);
        const double M = 0.5 + 2.5 * meta.uniform(9999, 0);
        const int pieces = 2 + static_cast<int>(meta.bits(9999, 1) % 6);
        const AlphaConcave1D f = AlphaConcave1D::random(fseed, alpha, M, pieces);
        double worst = -std::numeric_limits<double>::infinity();
        double prev = f.g_function(p_grid.front());
        for (std::size_t k = 1; k < p_grid.size(); ++k) {
            const double cur = f.g_function(p_grid[k]);
            worst = std::max(worst, (cur - prev) / std::max(1.0, prev));
            prev = cur;
        }
        violations[idx] = worst;
        fseeds[idx] = fseed;
        fpieces[idx] = pieces;
    });

    Worst w;
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (violations[idx] > tol) ++count;
        if (violations[idx] > w.violation) {
            w.violation = violations[idx];
            w.seed = fseeds[idx];
            w.pieces = fpieces[idx];
            w.alpha = alphas[idx / trials_per_alpha];
        }
    }

    VerificationReport rep;
    rep.check = "g_function_monotonicity";
    rep.lhs = w.violation;
    rep.rhs = 0.0;
    rep.tolerance = tol;
    rep.worst_margin = tol - w.violation;
    rep.pass = count == 0;
    rep.detail = "trials=" + std::to_string(total) +
                 " violations=" + std::to_string(count) +
                 " worst_seed=" + std::to_string(w.seed) +
                 " worst_pieces=" + std::to_string(w.pieces) +
                 " worst_alpha=" + std::to_string(w.alpha);
    return rep;
}

VerificationReport equality_detect(const AlphaConcave1D& f, double p, double q,
                                   double tol) {
    if (!(p < q)) throw std::invalid_argument("equality_detect: needs p < q");
    const double gp = f.g_function(p);
    const double gq = f.g_function(q);
    VerificationReport rep;
    rep.check = "g_function_equality_case";
    rep.lhs = std::abs(gp - gq);
    rep.tolerance = tol;

    const double M_fit = gp;
    const double hi = std::max(M_fit, f.support_end());
    double sup_dist = 0.0;
    const int grid = 4096;
    for (int i = 0; i <= grid; ++i) {
        const double t = hi * static_cast<double>(i) / grid;
        const double h = t >= M_fit ? 0.0 : std::pow(1.0 - t / M_fit, 1.0 / f.alpha());
        sup_dist = std::max(sup_dist, std::abs(f.value(t) - h));
    }
    rep.rhs = sup_dist;
    rep.pass = rep.lhs <= tol && sup_dist <= 10.0 * tol;
    rep.worst_margin = tol - rep.lhs;
    rep.error_estimate = 0.0;
    rep.detail = "fitted_M=" + std::to_string(M_fit);
    return rep;
}

} // namespace covario
