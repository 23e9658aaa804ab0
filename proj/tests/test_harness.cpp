#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "rowsparse/harness.hpp"
#include "rowsparse/matrix.hpp"
#include "rowsparse/rng.hpp"

using namespace rowsparse;

namespace {

ExperimentConfig basic_config(double sigma, double lambda, std::size_t trials,
                              std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.noise = gaussian_noise(sigma, 0);
    cfg.penalty = PenaltyConfig(lambda);
    cfg.trials = trials;
    cfg.base_seed = seed;
    return cfg;
}

// Exhaustive double maximum over (r, size-r supports) for tiny matrices.
double projected_stat_oracle(const RealMatrix& e, double k1) {
    const std::size_t n = e.size();
    const auto entries = e.entries();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= n; ++r) {
        double best_energy = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != r) continue;
            double energy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if ((mask >> i) & 1u) energy += entries[i] * entries[i];
            }
            best_energy = std::max(best_energy, energy);
        }
        const double value = best_energy - k1 * double(r) * (1.0 + std::log(double(n) / double(r)));
        best = std::max(best, value);
    }
    return best;
}

// Dyadic-grid matrix: entries k/8 with k integer in [-16, 16]. Squared sums
// of up to 9 such entries are exact in double, so the oracle and the sorted
// scan must agree bit for bit.
RealMatrix dyadic_matrix(std::size_t n1, std::size_t n2, std::mt19937_64& eng) {
    std::vector<double> entries(n1 * n2);
    for (double& v : entries) {
        v = (static_cast<double>(uniform_below(eng, 33)) - 16.0) / 8.0;
    }
    return RealMatrix(n1, n2, std::move(entries));
}

}  // namespace

TEST_CASE("worst_case_signal amplitude and membership") {
    const auto m = worst_case_signal(1, 2, 1, 1.0, 0.5, 7);
    std::size_t nonzero = 0;
    for (double v : m.entries()) {
        if (v != 0.0) {
            ++nonzero;
            CHECK(v == doctest::Approx(0.6506049455237689).epsilon(1e-13));
        }
    }
    CHECK(nonzero == 1);
    CHECK(in_class(m, SparsityClass(0.0, 1.0)));

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto sig = worst_case_signal(4, 12, 3, 2.0, 0.9, seed);
        CHECK(in_class(sig, SparsityClass(0.0, 3.0)));
        CHECK(l0_count(sig) == 12);
    }

    // amplitude approaches sigma sqrt(log(e n2/s)) as gamma -> 1
    const auto near = worst_case_signal(1, 2, 1, 1.0, 0.999, 7);
    double amp = 0.0;
    for (double v : near.entries()) amp = std::max(amp, std::abs(v));
    CHECK(amp == doctest::Approx(0.999 * std::sqrt(1.0 + std::log(2.0))).epsilon(1e-12));

    CHECK_THROWS_AS(worst_case_signal(1, 2, 2, 1.0, 0.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(worst_case_signal(1, 2, 1, 1.0, 1.0, 7), std::invalid_argument);
}

TEST_CASE("mc_risk in the zero-noise limit") {
    auto cfg = basic_config(1e-12, 4.0, 20, 5);
    const RealMatrix zero(3, 4, 0.0);
    const auto rep = mc_risk(zero, cfg);
    CHECK(rep.mean <= 1e-20);
    CHECK(rep.max <= 1e-20);
}

TEST_CASE("mc_risk with a huge penalty thresholds everything") {
    auto cfg = basic_config(1.0, 100.0, 50, 3);
    const auto rep = mc_risk(RealMatrix(4, 4, 0.0), cfg);
    CHECK(rep.mean == 0.0);  // pinned: no entry survives t_1 = 100 log(16 e)
    CHECK(rep.max == 0.0);
}

TEST_CASE("mc_risk is deterministic and thread-count independent") {
    const auto m = worst_case_signal(3, 8, 2, 1.0, 0.5, 11);
    auto cfg = basic_config(1.0, 4.0, 64, 17);

    const auto a = mc_risk(m, cfg, 2);
    const auto b = mc_risk(m, cfg, 2);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.q05 == b.q05);
    CHECK(a.q95 == b.q95);

    cfg.threads = 4;
    const auto c = mc_risk(m, cfg, 2);
    CHECK(a.mean == c.mean);
    CHECK(a.std_error == c.std_error);
    CHECK(a.q05 == c.q05);
    CHECK(a.q95 == c.q95);
    CHECK(a.min == c.min);
    CHECK(a.max == c.max);

    // different grid index, different stream
    const auto d = mc_risk(m, cfg, 3);
    CHECK(d.mean != a.mean);
}

TEST_CASE("mc_risk summary invariants") {
    const auto m = worst_case_signal(2, 8, 2, 1.0, 0.7, 23);
    auto cfg = basic_config(1.0, 1.0, 40, 29);
    const auto rep = mc_risk(m, cfg);
    CHECK(rep.mean >= rep.min);
    CHECK(rep.mean <= rep.max);
    CHECK(rep.q05 <= rep.q95);
    CHECK(rep.trials == 40);
    CHECK_THROWS_AS(mc_risk(m, ExperimentConfig{{}, gaussian_noise(1, 0), PenaltyConfig(1.0),
                                                2.0, 0, 0, 0.5, 1}),
                    std::invalid_argument);
}

TEST_CASE("rate_sweep fits the hard rate law on an n1 grid") {
    ExperimentConfig cfg = basic_config(1.0, 4.0, 60, 424242);
    cfg.grid = {{2, 32, 2}, {4, 32, 2}, {8, 32, 2}, {16, 32, 2}};
    const auto sweep = rate_sweep(cfg, RateFormula::hard);
    REQUIRE(sweep.fit.has_value());
    CHECK(sweep.fit->slope == doctest::Approx(1.0).epsilon(0.2));
    CHECK(sweep.fit->r_squared >= 0.95);
    CHECK(sweep.points.size() == 4);
    for (const auto& p : sweep.points) CHECK(p.risk.mean > 0.0);
}

TEST_CASE("rate_sweep rejects degenerate grids") {
    ExperimentConfig cfg = basic_config(1.0, 4.0, 10, 1);
    cfg.grid = {{4, 32, 2}, {4, 32, 2}, {4, 32, 2}, {4, 32, 2}};
    CHECK_THROWS_AS(rate_sweep(cfg, RateFormula::hard), std::invalid_argument);
    cfg.grid = {{2, 32, 2}, {4, 32, 2}};
    CHECK_THROWS_AS(rate_sweep(cfg, RateFormula::hard), std::invalid_argument);
}

TEST_CASE("oracle_gap coverage behaviour") {
    const auto m = worst_case_signal(4, 16, 2, 1.0, 0.5, 3);
    auto cfg = basic_config(1.0, 4.0, 60, 7);
    const std::vector<RealMatrix> probes{m, RealMatrix(4, 16, 0.0)};

    const auto res = oracle_gap(m, cfg, 2.0, probes);
    REQUIRE(res.trials.size() == 60);
    // coverage is nondecreasing in the constant
    double prev = -1.0;
    for (double c : {0.0, 0.1, 0.5, 1.0, 5.0, 50.0}) {
        const double cov = gap_coverage(res, c);
        CHECK(cov >= prev);
        prev = cov;
    }
    const double c95 = smallest_c_for_coverage(res, 0.95);
    CHECK(std::isfinite(c95));
    CHECK(gap_coverage(res, c95) >= 0.95);

    // noiseless trials: lhs ~ 0, everything covered at C = 0
    auto quiet = basic_config(1e-12, 4.0, 30, 9);
    const auto res0 = oracle_gap(m, quiet, 2.0, probes);
    CHECK(gap_coverage(res0, 0.0) == 1.0);

    CHECK_THROWS_AS(oracle_gap(m, cfg, 1.0, probes), std::invalid_argument);
    CHECK_THROWS_AS(oracle_gap(m, cfg, 2.0, {m}), std::invalid_argument);
    CHECK_THROWS_AS(oracle_gap(m, cfg, 2.0, {RealMatrix(4, 16, 0.0)}),
                    std::invalid_argument);
}

TEST_CASE("projected_noise_stat closed cases") {
    // zero matrix: max over r of -K1 r log(e n / r) sits at r = 1
    const RealMatrix zero(2, 3, 0.0);
    const double k1 = 0.7;
    CHECK(projected_noise_stat(zero, k1) ==
          doctest::Approx(-k1 * (1.0 + std::log(6.0))).epsilon(1e-13));
    double manual = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= 6; ++r) {
        manual = std::max(manual, -k1 * double(r) * (1.0 + std::log(6.0 / double(r))));
    }
    CHECK(projected_noise_stat(zero, k1) == doctest::Approx(manual).epsilon(1e-13));

    CHECK(projected_noise_stat(RealMatrix::from_rows({{1, 2}, {3, 0}}), 0.0) ==
          doctest::Approx(14.0).epsilon(1e-14));
    CHECK_THROWS_AS(projected_noise_stat(zero, -1.0), std::invalid_argument);
}

TEST_CASE("projected_noise_stat equals the exhaustive support oracle") {
    std::mt19937_64 eng(31337);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n1 = 1 + uniform_below(eng, 3);
        const std::size_t n2 = 1 + uniform_below(eng, 3);
        const auto e = dyadic_matrix(n1, n2, eng);
        for (double k1 : {0.0, 0.25, 1.0}) {
            CHECK(projected_noise_stat(e, k1) == projected_stat_oracle(e, k1));
        }
    }
}

TEST_CASE("tail_check curve shape") {
    const auto noise = gaussian_noise(1.0, 99);
    const auto curve = tail_check(noise, 4, 4, 2.0, 200);
    REQUIRE(curve.deltas.size() == 20);
    REQUIRE(curve.exceedance.size() == 20);
    CHECK(curve.deltas.front() == doctest::Approx(0.1));
    CHECK(curve.deltas.back() == doctest::Approx(50.0));
    for (std::size_t i = 1; i < 20; ++i) {
        CHECK(curve.deltas[i] > curve.deltas[i - 1]);
        CHECK(curve.exceedance[i] <= curve.exceedance[i - 1]);
    }
    CHECK(std::isfinite(curve.mean_positive_part));
    CHECK(curve.mean_positive_part >= 0.0);

    // huge K1 drives the statistic negative in every trial
    const auto dead = tail_check(noise, 4, 4, 1000.0, 150);
    CHECK(dead.frac_nonneg == 0.0);
    CHECK(dead.mean_positive_part == 0.0);

    CHECK_THROWS_AS(tail_check(noise, 4, 4, 2.0, 50), std::invalid_argument);
}

TEST_CASE("row-wise and global estimators have close risk on A(s) signals") {
    const std::size_t n1 = 4, n2 = 16, s = 2, trials = 300;
    const auto m = worst_case_signal(n1, n2, s, 1.0, 0.7, 55);
    auto cfg = basic_config(1.0, 4.0, trials, 56);

    std::vector<double> global(trials), rowwise(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        NoiseSpec spec = cfg.noise;
        spec.seed = mix_seed(cfg.base_seed, 0, t);
        const auto y = observe(m, spec);
        const double g = norm_2p(estimate_pls(y, cfg.penalty).m_hat - m, 2.0);
        const double r = norm_2p(estimate_rowwise(y, cfg.penalty) - m, 2.0);
        global[t] = g * g;
        rowwise[t] = r * r;
    }
    const auto mean = [](const std::vector<double>& v) {
        double s0 = 0.0;
        for (double x : v) s0 += x;
        return s0 / double(v.size());
    };
    const auto stderr_of = [&](const std::vector<double>& v) {
        const double mu = mean(v);
        double ss = 0.0;
        for (double x : v) ss += (x - mu) * (x - mu);
        return std::sqrt(ss / double(v.size() - 1)) / std::sqrt(double(v.size()));
    };
    const double gap = std::abs(mean(global) - mean(rowwise));
    const double band = 2.0 * std::sqrt(stderr_of(global) * stderr_of(global) +
                                        stderr_of(rowwise) * stderr_of(rowwise));
    CHECK(gap <= band + 1e-12);
}
