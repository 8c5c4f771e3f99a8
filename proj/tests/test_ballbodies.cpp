#include <doctest.h>

#include <cmath>

#include "covario/ballbodies.hpp"
#include "covario/combinatorics.hpp"
#include "covario/numerics.hpp"

using namespace covario;

namespace {

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

// Beta-integral reference for the simplex closed form:
// rho_p(u) = R(u) * (Gamma(p+1) Gamma(n+1) / Gamma(p+n+1))^{1/p}.
double simplex_radial_reference(double R, int n, double p) {
    return R * std::pow(std::exp(std::lgamma(p + 1.0) + std::lgamma(n + 1.0) -
                                 std::lgamma(p + n + 1.0)),
                        1.0 / p);
}

} // namespace

TEST_CASE("radial of K_2 for the unit cube along the axis") {
    const Covariogram g(ConvexBody::cube(2, 1.0));
    const BallBodyQuery q(g, 2.0);
    CHECK(q.radial(vec2(1, 0)).value ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("triangle radial matches the Beta reference for every p") {
    const Covariogram g(ConvexBody::regular_simplex(2));
    for (double p : {1.0, 2.0, 3.5, 4.0}) {
        const BallBodyQuery q(g, p);
        const DirectionSet ds = sphere_directions(2, 12, 0);
        for (std::size_t i = 0; i < ds.count(); ++i) {
            const Eigen::VectorXd u = ds.dir(i);
            const double R = g.support_radial(u);
            CHECK(q.radial(u).value ==
                  doctest::Approx(simplex_radial_reference(R, 2, p)).epsilon(1e-9));
        }
    }
}

TEST_CASE("even sources give centrally symmetric Ball bodies") {
    for (const ConvexBody& K :
         {ConvexBody::cube(2, 1.0), ConvexBody::regular_simplex(2),
          ConvexBody::ball(2, 0.8)}) {
        const Covariogram g(K);
        const BallBodyQuery q(g, 3.0);
        const DirectionSet ds = sphere_directions(2, 16, 3);
        for (std::size_t i = 0; i < ds.count(); ++i) {
            const Eigen::VectorXd u = ds.dir(i);
            CHECK(std::abs(q.radial(u).value - q.radial(-u).value) <= 1e-9);
        }
    }
}

TEST_CASE("|K_n(g_K)| = 1 for volume-1 bodies") {
    const VolumeEstimate tri =
        ballbody_volume(Covariogram(ConvexBody::regular_simplex(2)), 2.0, 256, 7);
    CHECK(std::abs(tri.value - 1.0) <= 1e-8);

    const VolumeEstimate cube =
        ballbody_volume(Covariogram(ConvexBody::cube(2, 1.0)), 2.0, 256, 7);
    CHECK(std::abs(cube.value - 1.0) <= 1e-8);

    const VolumeEstimate disk =
        ballbody_volume(Covariogram(ConvexBody::unit_volume_ball(2)), 2.0, 256, 7);
    CHECK(std::abs(disk.value - 1.0) <= 1e-8);
}

TEST_CASE("triangle Ball-body volumes in closed form") {
    const Covariogram g(ConvexBody::regular_simplex(2));
    // |K_2| = |K-K| / 6 = 1 and |K_4| = |K-K| / sqrt(15) = 6/sqrt(15).
    CHECK(ballbody_volume(g, 2.0, 256, 7).value ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ballbody_volume(g, 4.0, 256, 7).value ==
          doctest::Approx(6.0 / std::sqrt(15.0)).epsilon(1e-9));
}

TEST_CASE("moment transfer with p = 0 gives the volume identity") {
    const VerificationReport tri =
        moment_transfer_check(Covariogram(ConvexBody::regular_simplex(2)), 0.0,
                              vec2(1, 0));
    CHECK(tri.pass);
    CHECK(tri.lhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tri.rhs == doctest::Approx(1.0).epsilon(1e-10));

    const Covariogram cube_mc(ConvexBody::cube(2, 1.0),
                              Covariogram::Backend::MonteCarlo, 100000, 9);
    const VerificationReport cube = moment_transfer_check(cube_mc, 0.0, vec2(1, 0));
    CHECK(cube.pass);
}

TEST_CASE("moment transfer with p = 2 reproduces the covariogram inertia") {
    const Covariogram g(ConvexBody::cube(2, 1.0));
    const VerificationReport rep =
        moment_transfer_check(g, 2.0, vec2(1, 0), 256, 200000, 11);
    CHECK(rep.pass);
    CHECK(rep.rhs == doctest::Approx(1.0 / 6.0).epsilon(1e-8));

    const Covariogram tri_mc(ConvexBody::regular_simplex(2),
                             Covariogram::Backend::MonteCarlo, 50000, 13);
    CHECK(moment_transfer_check(tri_mc, 2.0, vec2(0.6, 0.8), 256, 100000, 15).pass);
}

TEST_CASE("log-concave inclusion chain") {
    // factor at (1,2) is 1/sqrt(2), reproduced to 1e-12
    const double factor = std::exp(log_gamma(2.0) / 1.0 - log_gamma(3.0) / 2.0);
    CHECK(factor == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const Covariogram cube(ConvexBody::cube(2, 1.0));
    const VerificationReport rep = inclusion_logconcave_check(cube, 2.0, 4.0, 64, 7);
    CHECK(rep.pass);
    CHECK(rep.lhs >= -1e-8);
    CHECK(rep.rhs >= -1e-8);

    // p = q degenerates to equality in both chains.
    const VerificationReport eq = inclusion_logconcave_check(cube, 3.0, 3.0, 16, 7);
    CHECK(eq.pass);
    CHECK(std::abs(eq.lhs) <= 1e-9);
    CHECK(std::abs(eq.rhs) <= 1e-9);
}

TEST_CASE("sharp alpha inclusion: triangle is the equality case") {
    const Covariogram tri(ConvexBody::regular_simplex(2));
    for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}}) {
        const VerificationReport rep =
            inclusion_alpha_check(tri, 0.5, p, q, 64, 7);
        CHECK(rep.pass);
        CHECK(rep.lhs >= -1e-8);
        CHECK(rep.rhs <= 1e-8); // every direction sits at equality
    }
}

TEST_CASE("sharp alpha inclusion: cube is strictly inside") {
    const Covariogram cube(ConvexBody::cube(2, 1.0));
    const VerificationReport rep = inclusion_alpha_check(cube, 0.5, 2.0, 4.0, 64, 7);
    CHECK(rep.pass);
    CHECK(rep.rhs > 1e-3); // strict inequality in some direction
}

TEST_CASE("1-d extremal profile: both scaled radials equal the support end") {
    const Alpha1DRadial g(AlphaConcave1D::extremal(1.0, 1.0));
    const BallBodyQuery q1(g, 1.0), q2(g, 2.0);
    Eigen::VectorXd plus(1);
    plus << 1.0;
    const double c1 = gen_binom(1.0 + 1.0, 1.0);
    const double c2 = std::sqrt(gen_binom(1.0 + 2.0, 1.0));
    CHECK(c1 * q1.radial(plus).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c2 * q2.radial(plus).value == doctest::Approx(1.0).epsilon(1e-10));

    const VerificationReport rep = inclusion_alpha_check(g, 1.0, 1.0, 2.0, 2, 7);
    CHECK(rep.pass);
    CHECK(std::abs(rep.lhs) <= 1e-9);
}

TEST_CASE("scaled radial profile is non-increasing in p") {
    for (const ConvexBody& K :
         {ConvexBody::cube(2, 1.0), ConvexBody::regular_simplex(2),
          ConvexBody::unit_volume_ball(2)}) {
        const Covariogram g(K);
        const double alpha = 0.5;
        const DirectionSet ds = sphere_directions(2, 8, 5);
        for (std::size_t i = 0; i < ds.count(); ++i) {
            const Eigen::VectorXd u = ds.dir(i);
            double prev = std::numeric_limits<double>::infinity();
            for (double p : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
                const double c =
                    std::pow(gen_binom(1.0 / alpha + p, 1.0 / alpha), 1.0 / p);
                const double val = c * BallBodyQuery(g, p).radial(u).value;
                CHECK(val <= prev + 1e-8);
                prev = val;
            }
        }
    }
}

TEST_CASE("equality fingerprint separates simplices from the rest") {
    const Covariogram tri(ConvexBody::regular_simplex(2));
    const VerificationReport tri_rep = equality_case_fingerprint(tri, 0.5, 64, 64, 7);
    CHECK(tri_rep.pass);
    CHECK(tri_rep.lhs <= 1e-8);

    const Covariogram cube(ConvexBody::cube(2, 1.0));
    const VerificationReport cube_rep =
        equality_case_fingerprint(cube, 0.5, 64, 64, 7);
    CHECK_FALSE(cube_rep.pass);
    CHECK(cube_rep.lhs >= 0.01);

    const Alpha1DRadial h(AlphaConcave1D::extremal(0.5, 3.0));
    const VerificationReport h_rep = equality_case_fingerprint(h, 0.5, 2, 64, 7);
    CHECK(h_rep.pass);
    CHECK(h_rep.lhs <= 1e-12);
}

TEST_CASE("volume bound from the sharp inclusion, equality only for the simplex") {
    const double bound = static_cast<double>(ballbody_volume_bound(2));
    CHECK(bound == doctest::Approx(6.0 / std::sqrt(15.0)).epsilon(1e-12));

    const double v_tri =
        ballbody_volume(Covariogram(ConvexBody::regular_simplex(2)), 4.0, 256, 7).value;
    CHECK(v_tri == doctest::Approx(bound).epsilon(1e-8));

    for (const ConvexBody& K :
         {ConvexBody::cube(2, 1.0), ConvexBody::unit_volume_ball(2)}) {
        const double v = ballbody_volume(Covariogram(K), 4.0, 256, 7).value;
        CHECK(v <= bound + 1e-9);
        CHECK(v < bound - 1e-3); // strictly inside
    }
}
