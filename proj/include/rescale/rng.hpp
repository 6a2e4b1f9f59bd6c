#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic sampling helpers. std::mt19937_64 output is fully specified
// by the standard, but the std distributions are not, so everything that must
// reproduce bit-identically across toolchains draws through these instead.

namespace rescale {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from a base seed and an index.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
    uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

// Uniform in [0, 1), 53-bit resolution.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_double(rng);
}

// Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
inline uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
    return rng() % n;
}

// Standard normal via Box-Muller; consumes two draws per call.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = uniform_double(rng);
    const double u2 = uniform_double(rng);
    if (u1 <= 0.0)
        u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rescale
