#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "rowsparse/matrix.hpp"

namespace rowsparse {

// Binary matrix with exactly s ones in every row, stored as n1 blocks of s
// sorted column indices.
struct BinaryPattern {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t s = 0;
    std::vector<std::uint32_t> cols;  // n1 * s indices, each row block ascending

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {cols.data() + i * s, s};
    }
    bool operator==(const BinaryPattern&) const = default;
};

// Dense 0/amplitude expansion of a pattern.
RealMatrix pattern_to_matrix(const BinaryPattern& p, double amplitude = 1.0);

// Uniformly random pattern: each row an independent uniform s-subset of the
// n2 columns (partial Fisher-Yates on the shared engine).
BinaryPattern uniform_pattern(std::size_t n1, std::size_t n2, std::size_t s,
                              std::mt19937_64& eng);

enum class PackConstruction { greedy, replicate_embed, pad_ones_embed };

struct PackingSet {
    std::vector<BinaryPattern> patterns;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t s = 0;
    std::size_t d_min_required = 0;
    std::size_t d_min_achieved = 0;  // exhaustive pairwise minimum; 0 if fewer than 2 patterns
    double log_cardinality = 0.0;
    PackConstruction construction = PackConstruction::greedy;
};

// Hamming distance: number of disagreeing positions.
std::size_t hamming(const BinaryPattern& a, const BinaryPattern& b);

// Greedy randomized packing: sample uniform patterns, accept those at
// distance >= d_min from every accepted pattern, stop after `budget`
// consecutive rejections or once `max_card` patterns are accepted.
// Requires 1 <= s <= n2/2. The achieved cardinality is reported honestly;
// there is no retry loop chasing the existence bound.
PackingSet vg_pack(std::size_t n1, std::size_t n2, std::size_t s,
                   std::size_t d_min, std::size_t budget, std::uint64_t seed,
                   std::size_t max_card = 512);

// Horizontal replication embedding: base patterns with one 1 per row over
// width l = floor(n2/s) become (base repeated s times, zero pad) of width n2.
// Pairwise distances scale by s; cardinality is preserved.
PackingSet embed_replicate(const PackingSet& base, std::size_t s, std::size_t n2);

// All-ones padding embedding: base patterns of row weight s' over width n2'
// with n2 = n2' + (s - s') gain s - s' all-ones columns. Distances unchanged.
PackingSet embed_pad_ones(const PackingSet& base, std::size_t s, std::size_t n2);

// Number of rows where the two patterns disagree in more than s/32 positions.
std::size_t row_disagreement(const BinaryPattern& a, const BinaryPattern& b,
                             std::size_t s);

// KL divergence between N(B, sigma^2 I) and N(B', sigma^2 I):
// |B - B'|_2^2 / (2 sigma^2).
double kl_gaussian(const RealMatrix& b, const RealMatrix& b_prime, double sigma);

// Hypothesis scaling. Hard: amplitude sigma * gamma * sqrt(log(e n2 / s)).
// Soft: amplitude tau * (delta_bar / S)^(1/q); outputs land in the soft
// sparsity class A(q, s) whenever delta_bar <= s.
struct HardScale {
    std::size_t s;
};
struct SoftScale {
    double q;
    double tau;
    double delta_bar;
    std::size_t S;
};
using ScaleMode = std::variant<HardScale, SoftScale>;

std::vector<RealMatrix> scale_pack(const PackingSet& pack, double gamma,
                                   double sigma, const ScaleMode& mode);

// Certificate from an exhaustive replay of the packing requirements.
struct PackCertificate {
    std::size_t pairs = 0;
    std::size_t d_min_achieved = 0;
    std::size_t d_min_required = 0;
    bool required_pass = false;      // d_min_achieved >= d_min_required (vacuous if pairs == 0)
    double distance_floor = 0.0;     // n1 (s+1) / 16
    bool distance_pass = false;      // d_min_achieved >= distance_floor (vacuous if pairs == 0)
    double log_cardinality = 0.0;
    double cardinality_target = 0.0; // C_target * n1 * s * log(e n2 / s)
    bool cardinality_pass = false;
};
PackCertificate verify_pack(const PackingSet& pack, double c_target);

}  // namespace rowsparse
