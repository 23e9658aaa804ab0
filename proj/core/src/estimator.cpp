#include "rowsparse/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rowsparse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Row-major indices ordered by magnitude descending, index ascending on ties.
// The top-k prefix is the lexicographically smallest best support of size k.
std::vector<std::size_t> magnitude_order(std::span<const double> y) {
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(y[a]);
        const double mb = std::abs(y[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    return order;
}

}  // namespace

PenaltyConfig::PenaltyConfig(double lambda_, double a_, double K0_)
    : lambda(lambda_), a(a_), K0(K0_) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(a > 1.0)) throw std::invalid_argument("oracle parameter a must exceed 1");
    if (!(K0 > 0.0)) throw std::invalid_argument("K0 must be positive");
}

double lambda_from_constants(double a, double K0, double K) {
    if (!(a > 1.0) || !(K0 > 0.0) || !(K > 0.0)) {
        throw std::invalid_argument("lambda_from_constants requires a > 1, K0 > 0, K > 0");
    }
    return 2.0 * a * K0 * K * K;
}

double default_lambda_gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    return 4.0 * sigma * sigma;
}

double penalty(std::size_t k, std::size_t n1, std::size_t n2, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const std::size_t n = n1 * n2;
    if (k > n) throw std::invalid_argument("model size k exceeds n1*n2");
    if (k == 0) return 0.0;
    return lambda * static_cast<double>(k) *
           (1.0 + std::log(static_cast<double>(n) / static_cast<double>(k)));
}

std::vector<double> threshold_schedule(std::size_t n1, std::size_t n2, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const std::size_t n = n1 * n2;
    std::vector<double> t(n);
    const double log_en = 1.0 + std::log(static_cast<double>(n));
    // alt carries sum_{i=2..j} (-1)^{i+j+1} i log i; advancing j flips every
    // sign and appends -j log j, so the whole sum is refreshed in O(1).
    double alt = 0.0;
    t[0] = lambda * log_en;
    for (std::size_t j = 2; j <= n; ++j) {
        alt = -alt - static_cast<double>(j) * std::log(static_cast<double>(j));
        t[j - 1] = lambda * (log_en + alt);
    }
    return t;
}

EstimateReport estimate_pls(const RealMatrix& y, const PenaltyConfig& cfg) {
    const auto entries = y.entries();
    const std::size_t n = entries.size();
    const auto order = magnitude_order(entries);

    // tail[k] = sum of the n-k smallest squared magnitudes, accumulated
    // smallest-first.
    std::vector<double> tail(n + 1);
    tail[n] = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const double v = entries[order[k]];
        tail[k] = tail[k + 1] + v * v;
    }

    std::size_t k_star = 0;
    double best = tail[0];
    for (std::size_t k = 1; k <= n; ++k) {
        const double obj = tail[k] + penalty(k, y.rows(), y.cols(), cfg.lambda);
        if (obj < best) {
            best = obj;
            k_star = k;
        }
    }

    EstimateReport report;
    report.m_hat = RealMatrix(y.rows(), y.cols(), 0.0);
    auto out = report.m_hat.entries();
    for (std::size_t k = 0; k < k_star; ++k) out[order[k]] = entries[order[k]];
    report.k_star = k_star;
    report.objective_value = best;
    if (k_star > 0) {
        const double v = entries[order[k_star - 1]];
        report.kept_threshold = v * v;
    } else {
        report.kept_threshold = kInf;
    }
    return report;
}

EstimateReport brute_force_pls(const RealMatrix& y, const PenaltyConfig& cfg) {
    const auto entries = y.entries();
    const std::size_t n = entries.size();
    if (n > 20) throw std::length_error("brute_force_pls is capped at n1*n2 <= 20");

    const std::uint32_t full = (1u << n) - 1u;
    std::uint32_t best_mask = 0;
    double best_obj = kInf;
    int best_pop = -1;

    // Lexicographic order on the sorted index lists of two equal-size
    // supports: the one containing the first differing position is smaller.
    const auto lex_smaller = [&](std::uint32_t a, std::uint32_t b) {
        const std::uint32_t diff = a ^ b;
        return (a >> std::countr_zero(diff)) & 1u;
    };

    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!((mask >> i) & 1u)) residual += entries[i] * entries[i];
        }
        const int pop = std::popcount(mask);
        const double obj =
            residual + penalty(static_cast<std::size_t>(pop), y.rows(), y.cols(), cfg.lambda);
        const bool better =
            obj < best_obj ||
            (obj == best_obj &&
             (pop < best_pop || (pop == best_pop && lex_smaller(mask, best_mask))));
        if (better) {
            best_obj = obj;
            best_mask = mask;
            best_pop = pop;
        }
    }

    EstimateReport report;
    report.m_hat = RealMatrix(y.rows(), y.cols(), 0.0);
    auto out = report.m_hat.entries();
    double kept_min_sq = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        if ((best_mask >> i) & 1u) {
            out[i] = entries[i];
            kept_min_sq = std::min(kept_min_sq, entries[i] * entries[i]);
        }
    }
    report.k_star = static_cast<std::size_t>(best_pop);
    report.objective_value = best_obj;
    report.kept_threshold = kept_min_sq;
    return report;
}

RealMatrix estimate_rowwise(const RealMatrix& y, const PenaltyConfig& cfg) {
    RealMatrix out(y.rows(), y.cols(), 0.0);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        const auto row = y.row(i);
        RealMatrix row_mat(1, y.cols(), std::vector<double>(row.begin(), row.end()));
        const auto rep = estimate_pls(row_mat, cfg);
        for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) = rep.m_hat(0, j);
    }
    return out;
}

KeepRuleDiagnostics keep_rule(const RealMatrix& y, const PenaltyConfig& cfg) {
    const auto entries = y.entries();
    const auto order = magnitude_order(entries);
    const auto schedule = threshold_schedule(y.rows(), y.cols(), cfg.lambda);

    KeepRuleDiagnostics diag{0, 0};
    bool leading_run = true;
    for (std::size_t j = 0; j < entries.size(); ++j) {
        const double v = entries[order[j]];
        if (v * v > schedule[j]) {
            diag.last_crossing = j + 1;
            if (leading_run) diag.first_crossing = j + 1;
        } else {
            leading_run = false;
        }
    }
    return diag;
}

}  // namespace rowsparse
