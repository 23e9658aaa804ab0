#pragma once

#include <cstddef>
#include <vector>

#include "rowsparse/matrix.hpp"

namespace rowsparse {

// Configuration of the penalized least squares estimator
//
//   argmin_A  |Y - A|_2^2 + lambda * |A|_0 * log(e n1 n2 / (|A|_0 v 1)).
//
// `a` (> 1) and `K0` are the oracle-inequality tuning constants; the theorem
// choice lambda = 2 a K0 K^2 is available through lambda_from_constants.
struct PenaltyConfig {
    double lambda;
    double a;
    double K0;
    explicit PenaltyConfig(double lambda, double a = 2.0, double K0 = 1.0);
};

double lambda_from_constants(double a, double K0, double K);

// Default for Gaussian noise with known sigma: lambda = 4 sigma^2.
double default_lambda_gaussian(double sigma);

struct EstimateReport {
    RealMatrix m_hat;
    std::size_t k_star = 0;       // number of kept entries
    double objective_value = 0.0;
    double kept_threshold = 0.0;  // squared magnitude of the smallest kept entry; +inf if none kept
};

// Model-size penalty lambda * k * log(e n1 n2 / (k v 1)); zero at k = 0.
double penalty(std::size_t k, std::size_t n1, std::size_t n2, double lambda);

// Marginal penalty increments t_j = penalty(j) - penalty(j-1), j = 1..n1*n2,
// evaluated through the alternating-sum form
//   t_j = lambda * ( log(e n1 n2) + sum_{i=2..j} (-1)^{i+j+1} i log i ).
// The sequence is strictly positive and nonincreasing.
std::vector<double> threshold_schedule(std::size_t n1, std::size_t n2, double lambda);

// Exact global minimizer: sort |y| descending, scan all support sizes k,
// keep the top-k entries at the smallest minimizing k. The best support of
// size k is always the k largest magnitudes, so the scan is exact.
// Ties: smallest k, then lexicographically smallest support (equal
// magnitudes keep the lower row-major index).
EstimateReport estimate_pls(const RealMatrix& y, const PenaltyConfig& cfg);

// Exhaustive minimization over all 2^(n1 n2) supports, same tie-breaking.
// Capacity-limited to n1*n2 <= 20.
EstimateReport brute_force_pls(const RealMatrix& y, const PenaltyConfig& cfg);

// estimate_pls applied to each row as a 1 x n2 problem.
RealMatrix estimate_rowwise(const RealMatrix& y, const PenaltyConfig& cfg);

// Crossings of the sorted y_(j)^2 against the threshold schedule. The
// keep-rule "keep y_(j) while y_(j)^2 > t_j" may cross more than once; both
// readings are reported as diagnostics next to the canonical argmin.
struct KeepRuleDiagnostics {
    std::size_t first_crossing;  // length of the leading run with y_(j)^2 > t_j
    std::size_t last_crossing;   // largest j with y_(j)^2 > t_j, 0 if none
};
KeepRuleDiagnostics keep_rule(const RealMatrix& y, const PenaltyConfig& cfg);

}  // namespace rowsparse
