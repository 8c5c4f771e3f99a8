#include "covario/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covario/rng.hpp"

namespace covario {

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

double gen_binom(double x, double y) {
    if (!(y > 0.0) || !(x >= y))
        throw std::domain_error("gen_binom: requires x >= y > 0");
    return std::exp(log_gamma(1.0 + x) - log_gamma(1.0 + y) -
                    log_gamma(1.0 + x - y));
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
    double kronrod;
    double gauss;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = kWgk[7] * f(c);
    double resg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    return {resk * h, resg * h};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, int max_depth, QuadratureResult& out) {
    const PanelEval e = gk15(f, a, b);
    out.evaluations += 15;
    const double err = std::abs(e.kronrod - e.gauss);
    if (err <= tol || depth >= max_depth) {
        out.value += e.kronrod;
        out.abs_error += err;
        if (err > tol) out.converged = false;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, out);
    adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol,
                                    int max_depth) {
    if (!(a < b)) throw std::domain_error("integrate_adaptive: requires a < b");
    if (!(tol > 0.0)) throw std::domain_error("integrate_adaptive: tol > 0");
    QuadratureResult out;
    adapt(f, a, b, tol, 0, max_depth, out);
    return out;
}

QuadratureResult integrate_power_weighted(const std::function<double(double)>& f,
                                          double p, double upper, double tol,
                                          int max_depth) {
    if (!(p > 0.0))
        throw std::domain_error("integrate_power_weighted: requires p > 0");
    if (!(upper > 0.0)) return QuadratureResult{0.0, 0.0, 0, true};
    if (p < 1.0) {
        // s = t^p turns p t^{p-1} dt into ds.
        const auto sub = [&](double s) { return f(std::pow(s, 1.0 / p)); };
        return integrate_adaptive(sub, 0.0, std::pow(upper, p), tol, max_depth);
    }
    const auto weighted = [&](double t) {
        return p * std::pow(t, p - 1.0) * f(t);
    };
    return integrate_adaptive(weighted, 0.0, upper, tol, max_depth);
}

DirectionSet sphere_directions(int n, std::size_t count, std::uint64_t seed) {
    if (n < 2) throw std::domain_error("sphere_directions: requires n >= 2");
    if (count < 1) throw std::domain_error("sphere_directions: requires N >= 1");
    std::vector<double> pts(count * static_cast<std::size_t>(n));
    if (n == 2) {
        const double step = 6.283185307179586476925286766559 /
                            static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double angle = step * static_cast<double>(i);
            pts[2 * i] = std::cos(angle);
            pts[2 * i + 1] = std::sin(angle);
        }
        return DirectionSet(n, count, seed, true, std::move(pts));
    }
    const CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        double norm_sq = 0.0;
        std::uint64_t base = 0;
        do {
            norm_sq = 0.0;
            for (int k = 0; k < n; ++k) {
                const double z = rng.gaussian(i, base + static_cast<std::uint64_t>(k));
                pts[i * n + k] = z;
                norm_sq += z * z;
            }
            base += static_cast<std::uint64_t>(n);
        } while (norm_sq < 1e-16);
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (int k = 0; k < n; ++k) pts[i * n + k] *= inv;
    }
    return DirectionSet(n, count, seed, false, std::move(pts));
}

} // namespace covario
