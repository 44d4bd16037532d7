#pragma once

#include <cmath>
#include <cstdint>

namespace attnet {

// SplitMix64 finalizer. Every random draw in the project goes through this,
// either sequentially (Rng) or counter-indexed (normal_at / uniform_at), so
// results are reproducible bit-for-bit regardless of thread count.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_streams(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (0x9E3779B97F4A7C15ULL * (b + 1)));
}

// Maps a u64 onto the open interval (0,1).
inline double unit_double(uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal indexed by (stream, i) via Box-Muller.
inline double normal_at(uint64_t stream, uint64_t i) {
    const uint64_t h = mix_streams(stream, i);
    const double u1 = unit_double(splitmix64(h));
    const double u2 = unit_double(splitmix64(h + 0x9E3779B97F4A7C15ULL));
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

inline double uniform_at(uint64_t stream, uint64_t i) {
    return unit_double(splitmix64(mix_streams(stream, i)));
}

// Sequential SplitMix64 generator for shuffles and subsampling.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Uniform integer in [0, n) via 128-bit multiply-shift.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    double uniform() { return unit_double(next_u64()); }

    double normal() {
        const double u1 = unit_double(next_u64());
        const double u2 = unit_double(next_u64());
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    uint64_t state_;
};

}  // namespace attnet
