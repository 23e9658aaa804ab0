#pragma once

#include <cstdint>
#include <random>

// Deterministic randomness contract used across the library.
//
// Generator: std::mt19937_64, whose output sequence for a given 64-bit seed
// is fixed by the C++ standard. All derived values (bounded integers,
// unit-interval doubles, Gaussian deviates) are produced by the explicit
// transforms below, never by std::*_distribution, whose results are
// implementation-defined. Parallel work units derive their stream seed with
// mix_seed, so results are identical for any thread count or schedule.

namespace rowsparse {

// SplitMix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream-splitting rule: seed for sub-stream `index` of `seed`.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed ^ splitmix64(index));
}

// Two-level rule used by the Monte Carlo harness:
// per-trial seed = mix(mix(base_seed, grid_index), trial_index).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(mix_seed(seed, a), b);
}

// Unbiased uniform integer in [0, n) by threshold rejection.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = eng();
    while (x < threshold) x = eng();
    return x % n;
}

// 53-bit mantissa uniforms.
inline double unit_open(std::mt19937_64& eng) {  // (0, 1]
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}
inline double unit_half_open(std::mt19937_64& eng) {  // [0, 1)
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace rowsparse
