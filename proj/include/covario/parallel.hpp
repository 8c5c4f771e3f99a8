#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace covario {

// Process-wide switch between the OpenMP kernels and the serial reference
// path. Defaults to parallel; tests flip it to compare the two.
inline bool& parallel_enabled() {
    static bool enabled = true;
    return enabled;
}

// Both variants accumulate fixed-size blocks and combine the block partials
// in index order, so the result is bit-identical regardless of thread count.
inline constexpr std::size_t kReduceBlock = 4096;

template <class Term>
double blocked_sum_serial(std::size_t count, Term&& term,
                          std::size_t block = kReduceBlock) {
    const std::size_t nblocks = (count + block - 1) / block;
    double total = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * block;
        const std::size_t hi = lo + block < count ? lo + block : count;
        double partial = 0.0;
        for (std::size_t i = lo; i < hi; ++i) partial += term(i);
        total += partial;
    }
    return total;
}

template <class Term>
double blocked_sum_omp(std::size_t count, Term&& term,
                       std::size_t block = kReduceBlock) {
    const std::size_t nblocks = (count + block - 1) / block;
    std::vector<double> partials(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block;
        const std::size_t hi = lo + block < count ? lo + block : count;
        double partial = 0.0;
        for (std::size_t i = lo; i < hi; ++i) partial += term(i);
        partials[static_cast<std::size_t>(b)] = partial;
    }
    double total = 0.0;
    for (double p : partials) total += p;
    return total;
}

template <class Term>
double blocked_sum(std::size_t count, Term&& term,
                   std::size_t block = kReduceBlock) {
    return parallel_enabled() ? blocked_sum_omp(count, term, block)
                              : blocked_sum_serial(count, term, block);
}

// Sum of term(i) and term(i)^2 in one sweep, for mean/variance estimates.
struct SumPair {
    double sum = 0.0;
    double sum_sq = 0.0;
};

template <class Term>
SumPair blocked_sum2_serial(std::size_t count, Term&& term,
                            std::size_t block = kReduceBlock) {
    const std::size_t nblocks = (count + block - 1) / block;
    SumPair total;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * block;
        const std::size_t hi = lo + block < count ? lo + block : count;
        SumPair partial;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            partial.sum += v;
            partial.sum_sq += v * v;
        }
        total.sum += partial.sum;
        total.sum_sq += partial.sum_sq;
    }
    return total;
}

template <class Term>
SumPair blocked_sum2_omp(std::size_t count, Term&& term,
                         std::size_t block = kReduceBlock) {
    const std::size_t nblocks = (count + block - 1) / block;
    std::vector<SumPair> partials(nblocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block;
        const std::size_t hi = lo + block < count ? lo + block : count;
        SumPair partial;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            partial.sum += v;
            partial.sum_sq += v * v;
        }
        partials[static_cast<std::size_t>(b)] = partial;
    }
    SumPair total;
    for (const SumPair& p : partials) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    return total;
}

template <class Term>
SumPair blocked_sum2(std::size_t count, Term&& term,
                     std::size_t block = kReduceBlock) {
    return parallel_enabled() ? blocked_sum2_omp(count, term, block)
                              : blocked_sum2_serial(count, term, block);
}

// out[i] = f(i); each slot written exactly once, so order never matters.
template <class F>
void map_index_serial(std::size_t count, F&& f) {
    for (std::size_t i = 0; i < count; ++i) f(i);
}

template <class F>
void map_index_omp(std::size_t count, F&& f) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        f(static_cast<std::size_t>(i));
}

template <class F>
void map_index(std::size_t count, F&& f) {
    if (parallel_enabled())
        map_index_omp(count, std::forward<F>(f));
    else
        map_index_serial(count, std::forward<F>(f));
}

} // namespace covario
