#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rowsparse {

// Parameters of a row-sparse estimation problem. All rate formulas are
// constant-free: absolute constants from the risk bounds are left to
// empirical fitting.
struct ProblemDims {
    std::size_t n1 = 1;
    std::size_t n2 = 1;
    double s = 1.0;
    double q = 0.0;          // sparsity exponent in [0, 2)
    double sigma_or_k = 1.0; // noise scale: sigma for eta, K for psi
    double p = 2.0;          // loss exponent of the row-wise 2,p norm
};

// Hard sparsity rate sigma^2 * n1^(2/p) * s * log(e n2 / s).
// Valid as a lower-bound rate for s <= n2/2; computed for any 1 <= s <= n2.
double rate_hard(const ProblemDims& d);
bool rate_hard_in_domain(const ProblemDims& d);

// Vector minimax rate on the l_q ball of radius s in R^{n2}.
// q = 0: sigma^2 s log(e n2 / s); 0 < q < 2: the three-term maximum.
double eta_vect(std::size_t n2, double s, double sigma, double q);

// The three soft-sparsity terms (without the n1 factor), in the order
// {log term, s^(2/q) term, dense term}.
std::array<double, 3> eta_terms(std::size_t n2, double s, double sigma, double q);

// Matrix soft sparsity rate (Frobenius loss), 0 < q < 2:
//   max( n1 s [sigma^2 log(1 + sigma^q n2 / s)]^{1-q/2}, n1 s^{2/q}, n1 n2 sigma^2 ).
// q = 0 is rejected; use rate_hard.
double eta_soft(const ProblemDims& d);

// Same shape with the sub-Gaussian constant K in place of sigma; equals
// eta_soft exactly when K = sigma.
double psi_soft(const ProblemDims& d);

// Largest integer k >= 1 with k <= s sigma^{-q} (log(1 + n2/k))^{-q/2},
// or 0 if k = 1 already fails. The scan is capped at max(n2, 10^6);
// `capped` reports that the cap itself still satisfied the inequality.
struct SolveKResult {
    std::uint64_t k = 0;
    bool capped = false;
};
SolveKResult solve_k(std::size_t n2, double s, double sigma, double q);

// Bias/penalty balancing level
//   s' = floor( c' (s / K^q) (log(1 + n2 K^q / s))^{-q/2} ),
// clamped to [1, floor(n2/2)].
struct SprimeResult {
    std::size_t s_prime = 1;
    bool clamped_low = false;
    bool clamped_high = false;
};
SprimeResult balance_sprime(std::size_t n2, double s, double K, double q,
                            double c_prime);

}  // namespace rowsparse
