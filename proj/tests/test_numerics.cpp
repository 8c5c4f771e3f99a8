#include <doctest.h>

#include <cmath>
#include <set>

#include "covario/numerics.hpp"
#include "covario/rng.hpp"

using namespace covario;

TEST_CASE("log_gamma at known points") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(4.0) == doctest::Approx(std::log(6.0)).epsilon(1e-13));
    CHECK(log_gamma(0.5) ==
          doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-2.0), std::domain_error);
}

TEST_CASE("generalized binomial coefficient") {
    CHECK(gen_binom(4.0, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(gen_binom(3.0, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gen_binom(2.5, 0.5) == doctest::Approx(15.0 / 8.0).epsilon(1e-12));
    CHECK_THROWS_AS(gen_binom(1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(gen_binom(1.0, 0.0), std::domain_error);
}

TEST_CASE("gen_binom reciprocity") {
    const CounterRng rng(99);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const double y = 0.1 + 5.0 * rng.uniform(i, 0);
        const double x = y + 6.0 * rng.uniform(i, 1);
        CHECK(gen_binom(x, y) ==
              doctest::Approx(gen_binom(x, x - y)).epsilon(1e-12));
    }
}

TEST_CASE("adaptive quadrature on polynomial references") {
    const auto lin = [](double t) { return 2.0 * t; };
    CHECK(integrate_adaptive(lin, 0.0, 1.0, 1e-12).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Beta(2,2) and Beta(3,3) values.
    CHECK(integrate_adaptive([](double t) { return 2.0 * t * (1.0 - t); }, 0.0,
                             1.0, 1e-12)
              .value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate_adaptive(
              [](double t) { return 3.0 * t * t * (1.0 - t) * (1.0 - t); }, 0.0,
              1.0, 1e-12)
              .value == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("quadrature handles interior kinks") {
    // int_0^1 |t - 1/3| dt = 5/18.
    const QuadratureResult q = integrate_adaptive(
        [](double t) { return std::abs(t - 1.0 / 3.0); }, 0.0, 1.0, 1e-12);
    CHECK(q.value == doctest::Approx(5.0 / 18.0).epsilon(1e-11));
    CHECK(q.converged);
}

TEST_CASE("quadrature is linear") {
    const auto f = [](double t) { return std::exp(t); };
    const auto g = [](double t) { return std::sin(3.0 * t); };
    const double a = 2.5, b = -1.75;
    const double lhs =
        integrate_adaptive([&](double t) { return a * f(t) + b * g(t); }, 0.0,
                           2.0, 1e-12)
            .value;
    const double rhs = a * integrate_adaptive(f, 0.0, 2.0, 1e-12).value +
                       b * integrate_adaptive(g, 0.0, 2.0, 1e-12).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("non-convergence is reported, never silent") {
    const QuadratureResult q = integrate_adaptive(
        [](double t) { return std::sin(500.0 * t) / std::sqrt(std::abs(t - 0.31) + 1e-15); },
        0.0, 1.0, 1e-15, 4);
    CHECK_FALSE(q.converged);
    CHECK(q.abs_error > 1e-15);
}

TEST_CASE("power-weighted integral removes the p < 1 singularity") {
    // int_0^1 0.5 t^{-1/2} dt = 1.
    const QuadratureResult q = integrate_power_weighted(
        [](double) { return 1.0; }, 0.5, 1.0, 1e-12);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.converged);
    // int_0^1 2 t (1-t) dt = 1/3 through the p >= 1 branch.
    CHECK(integrate_power_weighted([](double t) { return 1.0 - t; }, 2.0, 1.0,
                                   1e-12)
              .value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("planar directions form the angular grid") {
    const DirectionSet ds = sphere_directions(2, 4, 12345);
    REQUIRE(ds.count() == 4);
    CHECK(ds.dir(0)(0) == doctest::Approx(1.0));
    CHECK(ds.dir(0)(1) == doctest::Approx(0.0));
    CHECK(ds.dir(1)(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ds.dir(1)(1) == doctest::Approx(1.0));
    CHECK(ds.dir(2)(0) == doctest::Approx(-1.0));
    CHECK(ds.dir(3)(1) == doctest::Approx(-1.0));

    // Grid mode ignores the seed.
    const DirectionSet other = sphere_directions(2, 4, 999);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK((ds.dir(i) - other.dir(i)).norm() == 0.0);
}

TEST_CASE("antipodal symmetry of even planar grids") {
    const DirectionSet ds = sphere_directions(2, 8, 0);
    for (std::size_t i = 0; i < 8; ++i) {
        const Eigen::VectorXd u = ds.dir(i);
        bool found = false;
        for (std::size_t j = 0; j < 8; ++j)
            if ((ds.dir(j) + u).norm() < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("sphere directions: unit norm, reproducibility, concentration") {
    const DirectionSet ds = sphere_directions(3, 1000, 42);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
    for (std::size_t i = 0; i < ds.count(); ++i) {
        CHECK(std::abs(ds.dir(i).norm() - 1.0) <= 1e-12);
        mean += ds.dir(i);
    }
    mean /= 1000.0;
    CHECK(mean.norm() <= 0.1);

    const DirectionSet again = sphere_directions(3, 1000, 42);
    for (std::size_t i = 0; i < ds.count(); ++i)
        CHECK((ds.dir(i) - again.dir(i)).norm() == 0.0);

    const DirectionSet shifted = sphere_directions(3, 1000, 43);
    CHECK((ds.dir(0) - shifted.dir(0)).norm() > 0.0);
}
