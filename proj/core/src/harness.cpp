#include "rowsparse/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rowsparse/packing.hpp"
#include "rowsparse/rates.hpp"
#include "rowsparse/rng.hpp"

namespace rowsparse {

namespace {

double frobenius_sq(const RealMatrix& a, const RealMatrix& b) {
    const auto x = a.entries();
    const auto y = b.entries();
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    return sq;
}

// Kahan sum in trial-index order; independent of how trials were scheduled.
double compensated_mean(const std::vector<double>& values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(values.size());
}

double nearest_rank_quantile(const std::vector<double>& sorted, double level) {
    const std::size_t n = sorted.size();
    const std::size_t rank =
        std::min<std::size_t>(n, std::max<std::size_t>(1, static_cast<std::size_t>(
            std::ceil(level * static_cast<double>(n)))));
    return sorted[rank - 1];
}

// Static partition of [0, trials) over the requested thread count; each
// trial writes only its own slot.
void run_trials(std::size_t trials, unsigned threads,
                const std::function<void(std::size_t)>& body) {
    const unsigned n_workers = std::max(1u, threads);
    if (n_workers == 1) {
        for (std::size_t t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (trials + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t t = lo; t < hi; ++t) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

RiskReport summarize(std::vector<double> risks, double elapsed_seconds) {
    RiskReport report;
    report.trials = risks.size();
    report.elapsed_seconds = elapsed_seconds;
    report.mean = compensated_mean(risks);
    double ss = 0.0;
    for (double v : risks) {
        const double d = v - report.mean;
        ss += d * d;
    }
    const auto n = static_cast<double>(risks.size());
    report.std_error = risks.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    std::sort(risks.begin(), risks.end());
    report.min = risks.front();
    report.max = risks.back();
    report.q05 = nearest_rank_quantile(risks, 0.05);
    report.q95 = nearest_rank_quantile(risks, 0.95);
    return report;
}

void check_config(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(cfg.p > 0.0)) throw std::invalid_argument("p must be positive");
}

// Stream index reserved for the signal draw of a grid point (trials use
// 0..trials-1).
constexpr std::uint64_t kSignalStream = std::numeric_limits<std::uint64_t>::max();

}  // namespace

RealMatrix worst_case_signal(std::size_t n1, std::size_t n2, std::size_t s,
                             double sigma, double gamma, std::uint64_t seed) {
    if (s < 1 || 2 * s > n2) {
        throw std::invalid_argument("worst_case_signal requires 1 <= s <= n2/2");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    std::mt19937_64 eng(seed);
    const BinaryPattern pattern = uniform_pattern(n1, n2, s, eng);
    const double amplitude =
        sigma * gamma *
        std::sqrt(1.0 + std::log(static_cast<double>(n2) / static_cast<double>(s)));
    return pattern_to_matrix(pattern, amplitude);
}

RiskReport mc_risk(const RealMatrix& m, const ExperimentConfig& cfg,
                   std::size_t grid_index) {
    check_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    std::vector<double> risks(cfg.trials);
    run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        NoiseSpec spec = cfg.noise;
        spec.seed = mix_seed(cfg.base_seed, grid_index, t);
        const RealMatrix y = observe(m, spec);
        const EstimateReport rep = estimate_pls(y, cfg.penalty);
        const double r = norm_2p(rep.m_hat - m, cfg.p);
        risks[t] = r * r;
    });

    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summarize(std::move(risks), elapsed);
}

SweepResult rate_sweep(const ExperimentConfig& cfg, RateFormula rate) {
    check_config(cfg);
    if (cfg.grid.size() < 4) {
        throw std::invalid_argument("rate_sweep requires at least 4 grid points");
    }
    const double scale = subgaussian_K(cfg.noise);

    SweepResult result;
    result.points.reserve(cfg.grid.size());
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const GridPoint& pt = cfg.grid[g];
        ProblemDims dims{pt.n1, pt.n2, static_cast<double>(pt.s), 0.0, scale, cfg.p};
        double rate_value = 0.0;
        switch (rate) {
            case RateFormula::hard: rate_value = rate_hard(dims); break;
            case RateFormula::eta:  dims.q = 1.0; rate_value = eta_soft(dims); break;
            case RateFormula::psi:  dims.q = 1.0; rate_value = psi_soft(dims); break;
        }
        result.points.push_back({pt, rate_value, {}});
    }

    double rate_min = result.points[0].rate;
    double rate_max = rate_min;
    for (const auto& p : result.points) {
        rate_min = std::min(rate_min, p.rate);
        rate_max = std::max(rate_max, p.rate);
    }
    if (!(rate_max >= 4.0 * rate_min)) {
        throw std::invalid_argument(
            "degenerate grid: rate values must span at least a 4x dynamic range");
    }

    for (std::size_t g = 0; g < result.points.size(); ++g) {
        const GridPoint& pt = result.points[g].dims;
        const RealMatrix signal = worst_case_signal(
            pt.n1, pt.n2, pt.s, scale, cfg.gamma, mix_seed(cfg.base_seed, g, kSignalStream));
        result.points[g].risk = mc_risk(signal, cfg, g);
    }

    // Least squares of log(mean risk) on log(rate).
    const std::size_t n = result.points.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(result.points[i].risk.mean > 0.0)) {
            throw std::runtime_error("rate_sweep: nonpositive mean risk, log fit undefined");
        }
        xs[i] = std::log(result.points[i].rate);
        ys[i] = std::log(result.points[i].risk.mean);
    }
    const double x_bar = compensated_mean(xs);
    const double y_bar = compensated_mean(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - x_bar) * (xs[i] - x_bar);
        sxy += (xs[i] - x_bar) * (ys[i] - y_bar);
        syy += (ys[i] - y_bar) * (ys[i] - y_bar);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = y_bar - fit.slope * x_bar;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
    fit.fitted_constant = std::exp(fit.intercept);
    result.fit = fit;
    return result;
}

OracleGapResult oracle_gap(const RealMatrix& m, const ExperimentConfig& cfg,
                           double a, const std::vector<RealMatrix>& probes) {
    check_config(cfg);
    if (!(a > 1.0)) throw std::invalid_argument("oracle parameter a must exceed 1");
    const RealMatrix zero(m.rows(), m.cols(), 0.0);
    bool has_m = false, has_zero = false;
    for (const auto& p : probes) {
        has_m = has_m || p == m;
        has_zero = has_zero || p == zero;
    }
    if (!has_m || !has_zero) {
        throw std::invalid_argument("probe set must include A = M and A = 0");
    }

    const double K = subgaussian_K(cfg.noise);
    const double bias_factor = (a + 1.0) / (a - 1.0);
    const std::size_t n = m.size();

    struct ProbeTerms {
        double bias;        // (a+1)/(a-1) |M - A|_2^2
        double pen_factor;  // K^2 |A|_0 log(e n1 n2 / (|A|_0 v 1))
    };
    std::vector<ProbeTerms> terms;
    terms.reserve(probes.size());
    for (const auto& p : probes) {
        const std::size_t l0 = l0_count(p);
        const double pen =
            l0 == 0 ? 0.0
                    : K * K * static_cast<double>(l0) *
                          (1.0 + std::log(static_cast<double>(n) / static_cast<double>(l0)));
        terms.push_back({bias_factor * frobenius_sq(m, p), pen});
    }

    OracleGapResult result;
    result.a = a;
    result.K = K;
    result.trials.resize(cfg.trials);
    run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        NoiseSpec spec = cfg.noise;
        spec.seed = mix_seed(cfg.base_seed, 0, t);
        const RealMatrix y = observe(m, spec);
        const EstimateReport rep = estimate_pls(y, cfg.penalty);
        const double lhs = frobenius_sq(m, rep.m_hat);

        double min_c = std::numeric_limits<double>::infinity();
        for (const auto& pt : terms) {
            double c;
            if (pt.pen_factor > 0.0) {
                c = std::max(0.0, (lhs - pt.bias) / pt.pen_factor);
            } else {
                c = pt.bias >= lhs ? 0.0 : std::numeric_limits<double>::infinity();
            }
            min_c = std::min(min_c, c);
        }
        result.trials[t] = {lhs, min_c};
    });
    return result;
}

double gap_coverage(const OracleGapResult& result, double c_fit) {
    if (result.trials.empty()) return 0.0;
    std::size_t covered = 0;
    for (const auto& rec : result.trials) covered += (rec.min_c_fit <= c_fit);
    return static_cast<double>(covered) / static_cast<double>(result.trials.size());
}

double smallest_c_for_coverage(const OracleGapResult& result, double level) {
    if (!(level > 0.0 && level <= 1.0)) {
        throw std::invalid_argument("coverage level must lie in (0, 1]");
    }
    if (result.trials.empty()) throw std::invalid_argument("no trials recorded");
    std::vector<double> cs;
    cs.reserve(result.trials.size());
    for (const auto& rec : result.trials) cs.push_back(rec.min_c_fit);
    std::sort(cs.begin(), cs.end());
    return nearest_rank_quantile(cs, level);
}

double projected_noise_stat(const RealMatrix& e, double k1) {
    if (!(k1 >= 0.0)) throw std::invalid_argument("K1 must be nonnegative");
    std::vector<double> sq(e.size());
    const auto entries = e.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) sq[i] = entries[i] * entries[i];
    std::sort(sq.begin(), sq.end(), std::greater<>());

    const double n = static_cast<double>(e.size());
    double best = -std::numeric_limits<double>::infinity();
    double prefix = 0.0;
    for (std::size_t r = 1; r <= sq.size(); ++r) {
        prefix += sq[r - 1];
        const double value =
            prefix - k1 * static_cast<double>(r) * (1.0 + std::log(n / static_cast<double>(r)));
        best = std::max(best, value);
    }
    return best;
}

TailCurve tail_check(const NoiseSpec& noise, std::size_t n1, std::size_t n2,
                     double k1, std::size_t trials) {
    if (trials < 100) throw std::invalid_argument("tail_check requires trials >= 100");
    const double K = subgaussian_K(noise);
    const double k2 = K * K;

    TailCurve curve;
    curve.trials = trials;
    curve.deltas.resize(20);
    for (std::size_t i = 0; i < 20; ++i) {
        // 20 log-spaced points from 0.1 K^2 to 50 K^2
        curve.deltas[i] =
            0.1 * k2 * std::pow(500.0, static_cast<double>(i) / 19.0);
    }

    std::vector<double> stats(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        NoiseSpec spec = noise;
        spec.seed = mix_seed(noise.seed, t);
        stats[t] = projected_noise_stat(sample_noise(n1, n2, spec), k1);
    }

    curve.exceedance.resize(curve.deltas.size());
    for (std::size_t i = 0; i < curve.deltas.size(); ++i) {
        std::size_t count = 0;
        for (double s : stats) count += (s >= curve.deltas[i]);
        curve.exceedance[i] = static_cast<double>(count) / static_cast<double>(trials);
    }
    std::size_t nonneg = 0;
    std::vector<double> pos(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        nonneg += (stats[t] >= 0.0);
        pos[t] = std::max(stats[t], 0.0);
    }
    curve.frac_nonneg = static_cast<double>(nonneg) / static_cast<double>(trials);
    curve.mean_positive_part = compensated_mean(pos);
    return curve;
}

}  // namespace rowsparse
