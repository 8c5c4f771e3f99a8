// Timing comparison of the OpenMP kernels against the serial reference path.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "covario/alpha1d.hpp"
#include "covario/ballbodies.hpp"
#include "covario/bodies.hpp"
#include "covario/covariogram.hpp"
#include "covario/parallel.hpp"

using namespace covario;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const std::string& name, const std::function<double()>& fn) {
    parallel_enabled() = false;
    double serial_result = 0.0;
    const double serial_ms = time_ms([&] { serial_result = fn(); });
    parallel_enabled() = true;
    double parallel_result = 0.0;
    const double parallel_ms = time_ms([&] { parallel_result = fn(); });
    const bool identical = serial_result == parallel_result;
    std::printf("%-38s %10.1f ms %10.1f ms %6.2fx  %s\n", name.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#endif
    std::printf("%-38s %13s %13s %7s\n", "kernel", "serial", "openmp", "speedup");

    row("covariogram MC eval (2e5 x 256)", [] {
        const ConvexBody K = ConvexBody::cube(2, 1.0);
        const Covariogram g(K, Covariogram::Backend::MonteCarlo, 200000, 11);
        double acc = 0.0;
        Eigen::VectorXd x(2);
        for (int i = 0; i < 256; ++i) {
            x << 0.7 * std::cos(0.1 * i), 0.7 * std::sin(0.1 * i);
            acc += g.eval(x).value;
        }
        return acc;
    });

    row("Ball body volume sweep (3-simplex)", [] {
        const ConvexBody K = ConvexBody::regular_simplex(3);
        const Covariogram g(K);
        return ballbody_volume(g, 5.0, 8192, 7).value;
    });

    row("G monotonicity suite (500 trials)", [] {
        return monotonicity_suite(100, {1.0, 0.5, 1.0 / 3, 0.25, 0.2},
                                  {0.5, 1, 2, 4, 8}, 7)
            .lhs;
    });

    return 0;
}
