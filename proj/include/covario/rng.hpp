#pragma once

#include <cmath>
#include <cstdint>

namespace covario {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based random stream: every draw is a pure function of
// (seed, index, slot), so results do not depend on evaluation order or on
// how work is split across threads.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t index, std::uint64_t slot) const {
        std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (index + 1) +
                          0xD1B54A32D192ED03ull * (slot + 1);
        z = mix64(z);
        z = mix64(z + seed_);
        return z;
    }

    // [0, 1)
    double uniform(std::uint64_t index, std::uint64_t slot) const {
        return static_cast<double>(bits(index, slot) >> 11) * 0x1.0p-53;
    }

    // (0, 1]
    double uniform_open(std::uint64_t index, std::uint64_t slot) const {
        return static_cast<double>((bits(index, slot) >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes slots (2*slot, 2*slot+1).
    double gaussian(std::uint64_t index, std::uint64_t slot) const {
        const double u1 = uniform_open(index, 2 * slot);
        const double u2 = uniform(index, 2 * slot + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t seed_;
};

// Derives an independent stream, e.g. one per named purpose.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t which) {
    return mix64(seed ^ (0xA0761D6478BD642Full * (which + 1)));
}

} // namespace covario
