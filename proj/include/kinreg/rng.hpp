/// @file rng.hpp
/// @brief SplitMix64 generator for the randomized suites.
///
/// The algorithm is fixed (Steele, Lea & Flood's SplitMix64 with the
/// standard 0x9E3779B97F4A7C15 increment) and doubles are produced as
/// (x >> 11) * 2^-53, so a seed reproduces the same stream on any
/// platform. split() derives an independent child stream.
#pragma once

#include <cstdint>

namespace kinreg {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    SplitMix64 split() { return SplitMix64(next() ^ 0x6A09E667F3BCC909ULL); }

private:
    std::uint64_t state_;
};

}  // namespace kinreg
