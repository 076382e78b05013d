#pragma once

#include <cstdint>
#include <random>

namespace lgwalk {

// Reproducible split-stream randomness. Every (seed, stream, index) triple
// maps to its own generator state, so samples are independent of execution
// order and of how work is divided between threads.

namespace rng_stream {
// Stream labels; index is the per-event or per-resample counter.
inline constexpr std::uint64_t arm_none = 1;
inline constexpr std::uint64_t arm_left = 2;
inline constexpr std::uint64_t arm_right = 3;
inline constexpr std::uint64_t bootstrap = 4;
inline constexpr std::uint64_t monte_carlo = 5;
inline constexpr std::uint64_t classical_none = 6;
inline constexpr std::uint64_t classical_left = 7;
inline constexpr std::uint64_t classical_right = 8;
} // namespace rng_stream

// splitmix64 finalizer; full-period bijection on 64-bit values.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return std::mt19937_64(mix64(mix64(mix64(seed) ^ stream) ^ index));
}

// Uniform double in [0,1) from the top 53 bits; avoids the
// implementation-defined behaviour of std::uniform_real_distribution.
inline double uniform_double(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) via 128-bit multiply; bias-free for n << 2^64.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(g()) * n) >> 64);
}

inline bool bernoulli(std::mt19937_64& g, double p) {
    return uniform_double(g) < p;
}

// Binomial draw as a Bernoulli sum; O(n) but exactly reproducible across
// platforms, and n stays at experiment scale (hundreds) here.
inline long binomial_draw(std::mt19937_64& g, long n, double p) {
    long k = 0;
    for (long i = 0; i < n; ++i)
        k += bernoulli(g, p) ? 1 : 0;
    return k;
}

} // namespace lgwalk
