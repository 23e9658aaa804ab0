#pragma once

#include <cstdint>
#include <optional>

#include "rowsparse/matrix.hpp"

namespace rowsparse {

enum class NoiseFamily { gaussian, rademacher, uniform };

// Zero-mean observation noise. `param` is the standard deviation sigma for
// gaussian, the magnitude a for rademacher (+/- a), and the half-width a for
// uniform on [-a, a). Every family is sub-Gaussian: its p-th moments are
// bounded by K sqrt(p) with K = subgaussian_K(spec).
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double param = 1.0;
    std::uint64_t seed = 0;
    // Overrides the per-family K convention (gaussian -> sigma, rademacher
    // and uniform -> a) when the default is not wanted.
    std::optional<double> k_override;
};

NoiseSpec gaussian_noise(double sigma, std::uint64_t seed);
NoiseSpec rademacher_noise(double a, std::uint64_t seed);
NoiseSpec uniform_noise(double a, std::uint64_t seed);

// i.i.d. noise matrix. Entries are drawn in row-major order from
// mt19937_64(spec.seed); Gaussian deviates come from Box-Muller pairs
// (cosine branch first). Identical (n1, n2, spec) reproduce the output
// bit for bit.
RealMatrix sample_noise(std::size_t n1, std::size_t n2, const NoiseSpec& spec);

// Observation model: Y = M + E with E = sample_noise(M dims, spec).
RealMatrix observe(const RealMatrix& m, const NoiseSpec& spec);

// Moment constant K with (E|xi|^p)^(1/p) <= K sqrt(p) for all p >= 1.
double subgaussian_K(const NoiseSpec& spec);

}  // namespace rowsparse
