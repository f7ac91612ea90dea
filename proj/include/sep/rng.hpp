#pragma once

#include <cmath>
#include <cstdint>

namespace sep {

// Deterministic 64-bit generator (SplitMix64). Used everywhere instead of the
// std distributions so that runs are reproducible across platforms.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // exponential with the given rate
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    bool coin() { return (next() >> 63) != 0; }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n) { return next() % n; }
};

inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Splittable sub-seed derivation: children of (seed, tag) are statistically
// independent streams for any distinct tags.
inline uint64_t subseed(uint64_t seed, uint64_t tag) { return mix64(seed ^ mix64(tag)); }

inline uint64_t subseed(uint64_t seed, uint64_t tag1, uint64_t tag2) {
    return subseed(subseed(seed, tag1), tag2);
}

}  // namespace sep
