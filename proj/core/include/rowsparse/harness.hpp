#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rowsparse/estimator.hpp"
#include "rowsparse/matrix.hpp"
#include "rowsparse/noise.hpp"

namespace rowsparse {

struct GridPoint {
    std::size_t n1 = 1;
    std::size_t n2 = 1;
    std::size_t s = 1;
};

// Monte Carlo experiment description. Per-trial noise seeds are derived as
// mix_seed(base_seed, grid_index, trial_index), so results do not depend on
// `threads` or on scheduling.
struct ExperimentConfig {
    std::vector<GridPoint> grid;
    NoiseSpec noise;
    PenaltyConfig penalty{1.0};
    double p = 2.0;
    std::size_t trials = 100;
    std::uint64_t base_seed = 0;
    double gamma = 0.5;   // worst-case signal amplitude factor, in (0, 1)
    unsigned threads = 1;
};

// Summary of |M_hat - M|_{2,p}^2 over the trials of one grid point.
struct RiskReport {
    double mean = 0.0;
    double std_error = 0.0;
    double q05 = 0.0;  // nearest-rank empirical quantiles
    double q95 = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t trials = 0;
    double elapsed_seconds = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double fitted_constant = 0.0;  // exp(intercept)
};

// Lower-bound hypothesis signal: a uniform s-per-row binary pattern scaled
// by sigma * gamma * sqrt(log(e n2 / s)). Lies in A(s).
RealMatrix worst_case_signal(std::size_t n1, std::size_t n2, std::size_t s,
                             double sigma, double gamma, std::uint64_t seed);

// Monte Carlo risk of estimate_pls on signal M: cfg.trials replicates of
// Y = M + E, accumulated as |M_hat - M|_{2,p}^2. Deterministic in
// (cfg.base_seed, grid_index) for any thread count.
RiskReport mc_risk(const RealMatrix& m, const ExperimentConfig& cfg,
                   std::size_t grid_index = 0);

enum class RateFormula { hard, eta, psi };

struct SweepPoint {
    GridPoint dims;
    double rate = 0.0;
    RiskReport risk;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<RateFit> fit;
};

// Risk-vs-rate sweep: one worst_case_signal per grid point, mean risk per
// point, then least squares of log(mean risk) on log(rate). Requires at
// least 4 grid points spanning a >= 4x dynamic range in the rate value.
SweepResult rate_sweep(const ExperimentConfig& cfg, RateFormula rate);

// One trial of the oracle-inequality check: lhs = |M - M_hat|_2^2 and the
// smallest penalty constant C that covers this trial over the probe set,
//   lhs <= min_A [ (a+1)/(a-1) |M - A|_2^2 + C K^2 |A|_0 log(e n1 n2/(|A|_0 v 1)) ].
struct GapRecord {
    double lhs = 0.0;
    double min_c_fit = 0.0;
};

struct OracleGapResult {
    std::vector<GapRecord> trials;
    double a = 0.0;
    double K = 0.0;
};

// Probes must include A = M and A = 0.
OracleGapResult oracle_gap(const RealMatrix& m, const ExperimentConfig& cfg,
                           double a, const std::vector<RealMatrix>& probes);

// Fraction of trials covered at a given penalty constant. Nondecreasing in c_fit.
double gap_coverage(const OracleGapResult& result, double c_fit);

// Smallest constant whose coverage reaches `level` (nearest-rank quantile).
double smallest_c_for_coverage(const OracleGapResult& result, double level);

// max over r = 1..n1*n2 of (sum of the r largest xi^2) - K1 r log(e n1 n2 / r).
// The inner maximum over supports of size r is the top-r sum of squared
// entries, so one sorted scan replaces the double maximum.
double projected_noise_stat(const RealMatrix& e, double k1);

// Empirical tail of projected_noise_stat over repeated noise draws on a
// log-spaced Delta grid (20 points, 0.1 K^2 .. 50 K^2).
struct TailCurve {
    std::vector<double> deltas;
    std::vector<double> exceedance;    // P[stat >= delta], same length as deltas
    double mean_positive_part = 0.0;   // mean of max(stat, 0)
    double frac_nonneg = 0.0;          // P[stat >= 0]
    std::size_t trials = 0;
};
TailCurve tail_check(const NoiseSpec& noise, std::size_t n1, std::size_t n2,
                     double k1, std::size_t trials);

}  // namespace rowsparse
