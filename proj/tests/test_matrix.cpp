#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rowsparse/matrix.hpp"
#include "rowsparse/rng.hpp"

using namespace rowsparse;

namespace {

RealMatrix random_matrix(std::size_t n1, std::size_t n2, std::mt19937_64& eng) {
    std::vector<double> entries(n1 * n2);
    for (double& v : entries) v = 4.0 * unit_half_open(eng) - 2.0;
    return RealMatrix(n1, n2, std::move(entries));
}

// Random matrix whose rows all carry l_q mass exactly s * u, u in (0, 1].
RealMatrix random_in_class(std::size_t n1, std::size_t n2, double q, double s,
                           std::mt19937_64& eng) {
    RealMatrix m = random_matrix(n1, n2, eng);
    for (std::size_t i = 0; i < n1; ++i) {
        double mass = 0.0;
        for (double v : m.row(i)) mass += std::pow(std::abs(v), q);
        const double target = s * unit_open(eng);
        const double c = std::pow(target / mass, 1.0 / q);
        for (std::size_t j = 0; j < n2; ++j) m(i, j) *= c;
    }
    return m;
}

}  // namespace

TEST_CASE("norm_lq evaluates the elementwise quasi-norm") {
    CHECK(norm_lq(RealMatrix::from_rows({{3, 4}}), 2.0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(norm_lq(RealMatrix(2, 2, 0.0), 1.0) == 0.0);
    CHECK(norm_lq(RealMatrix::from_rows({{1, 1, 1}}), 0.5) ==
          doctest::Approx(9.0).epsilon(1e-14));
    CHECK_THROWS_AS(norm_lq(RealMatrix(1, 1, 1.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(norm_lq(RealMatrix(1, 1, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("l0_count is an exact zero test") {
    CHECK(l0_count(RealMatrix::from_rows({{0, 2}, {0, 0}})) == 1);
    CHECK(l0_count(RealMatrix(3, 3, 0.0)) == 0);
    CHECK(l0_count(RealMatrix::from_rows({{1, 1}, {1, 1}})) == 4);
    CHECK(l0_count(RealMatrix::from_rows({{1e-300, 0}})) == 1);
}

TEST_CASE("norm_2p composes row l2 with outer l_p") {
    CHECK(norm_2p(RealMatrix::from_rows({{3, 4}, {0, 0}}), 1.0) ==
          doctest::Approx(5.0).epsilon(1e-14));
    CHECK(norm_2p(RealMatrix::from_rows({{1, 0}, {0, 1}}), 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(norm_2p(RealMatrix::from_rows({{3, 4}, {3, 4}}), 0.5) ==
          doctest::Approx(20.0).epsilon(1e-13));
    CHECK_THROWS_AS(norm_2p(RealMatrix(1, 1, 1.0), 0.0), std::invalid_argument);
}

TEST_CASE("in_class checks row membership in B_q(s)") {
    CHECK_FALSE(in_class(RealMatrix::from_rows({{1, 1, 1}}), SparsityClass(0.0, 2.0)));
    CHECK(in_class(RealMatrix::from_rows({{0.5, 0.5}}), SparsityClass(1.0, 1.0)));
    CHECK(in_class(RealMatrix::from_rows({{1, 1}, {2, 0}}), SparsityClass(2.0, 4.0)));
    CHECK_FALSE(in_class(RealMatrix::from_rows({{1, 1}, {2.0001, 0}}), SparsityClass(2.0, 4.0)));
}

TEST_CASE("SparsityClass validates its parameters") {
    CHECK_THROWS_AS(SparsityClass(2.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SparsityClass(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SparsityClass(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SparsityClass(0.0, 1.5), std::invalid_argument);
    // hard-sparsity level must be checkable against the column count
    CHECK_THROWS_AS(in_class(RealMatrix(1, 2, 0.0), SparsityClass(0.0, 3.0)),
                    std::invalid_argument);
}

TEST_CASE("truncate_rows keeps the largest magnitudes per row") {
    CHECK(truncate_rows(RealMatrix::from_rows({{3, 2, 1}}), 2) ==
          RealMatrix::from_rows({{3, 2, 0}}));
    const auto m = RealMatrix::from_rows({{1, 1, 1}});
    CHECK(truncate_rows(m, 3) == m);
    CHECK(truncate_rows(RealMatrix::from_rows({{2, -3, 1}}), 1) ==
          RealMatrix::from_rows({{0, -3, 0}}));
    // equal magnitudes keep the lowest column index
    CHECK(truncate_rows(RealMatrix::from_rows({{1, -1, 1}}), 2) ==
          RealMatrix::from_rows({{1, -1, 0}}));
    CHECK_THROWS_AS(truncate_rows(m, 0), std::invalid_argument);
    CHECK_THROWS_AS(truncate_rows(m, 4), std::invalid_argument);
}

TEST_CASE("matrix constructors reject non-finite data") {
    CHECK_THROWS_AS(RealMatrix(1, 2, {1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(RealMatrix(1, 1, std::vector<double>{1.0 / 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(RealMatrix(1, 2, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(RealMatrix(0, 2, 0.0), std::invalid_argument);
}

TEST_CASE("quasi-triangle inequality for 0 < p < 1") {
    std::mt19937_64 eng(mix_seed(11, 0));
    for (double p : {0.25, 0.5, 0.75, 0.9}) {
        for (int it = 0; it < 50; ++it) {
            const auto a = random_matrix(3, 5, eng);
            const auto b = random_matrix(3, 5, eng);
            const double lhs = std::pow(norm_2p(a + b, p), p);
            const double rhs = std::pow(norm_2p(a, p), p) + std::pow(norm_2p(b, p), p);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("norm_2p homogeneity and p = 2 consistency") {
    std::mt19937_64 eng(mix_seed(12, 0));
    for (int it = 0; it < 30; ++it) {
        const auto a = random_matrix(4, 6, eng);
        for (double p : {0.5, 1.0, 2.0, 3.5}) {
            for (double c : {0.0, 0.5, 2.0, 7.25}) {
                CHECK(norm_2p(a * c, p) ==
                      doctest::Approx(c * norm_2p(a, p)).epsilon(1e-12));
            }
        }
        CHECK(norm_2p(a, 2.0) == doctest::Approx(norm_lq(a, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("truncation error bound over B_q(s) rows") {
    std::mt19937_64 eng(mix_seed(13, 0));
    const std::size_t n1 = 4, n2 = 12;
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
        const double s = 2.0;
        for (int it = 0; it < 50; ++it) {
            const auto m = random_in_class(n1, n2, q, s, eng);
            REQUIRE(in_class(m, SparsityClass(q, s)));
            for (std::size_t sp = 1; sp <= n2; ++sp) {
                const auto t = truncate_rows(m, sp);
                const double err = std::pow(norm_2p(m - t, 2.0), 2.0);
                const double bound = std::pow(s, 2.0 / q) *
                                     std::pow(static_cast<double>(sp), 1.0 - 2.0 / q) *
                                     static_cast<double>(n1);
                CHECK(err <= bound * (1.0 + 1e-12));
                CHECK(in_class(t, SparsityClass(0.0, static_cast<double>(sp))));
            }
        }
    }
}
