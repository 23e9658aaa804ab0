#include "rowsparse/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rowsparse {

namespace {

double log_e_ratio(double n, double s) {  // log(e n / s)
    return 1.0 + std::log(n / s);
}

void check_soft_q(double q) {
    if (!(q > 0.0 && q < 2.0)) {
        throw std::invalid_argument("soft sparsity rate requires 0 < q < 2");
    }
}

}  // namespace

double rate_hard(const ProblemDims& d) {
    if (!(d.s >= 1.0)) throw std::invalid_argument("rate_hard requires s >= 1");
    if (d.s > static_cast<double>(d.n2)) {
        throw std::invalid_argument("rate_hard requires s <= n2");
    }
    if (!(d.p > 0.0)) throw std::invalid_argument("rate_hard requires p > 0");
    if (!(d.sigma_or_k > 0.0)) throw std::invalid_argument("noise scale must be positive");
    const double sigma2 = d.sigma_or_k * d.sigma_or_k;
    return sigma2 * std::pow(static_cast<double>(d.n1), 2.0 / d.p) * d.s *
           log_e_ratio(static_cast<double>(d.n2), d.s);
}

bool rate_hard_in_domain(const ProblemDims& d) {
    return d.s >= 1.0 && 2.0 * d.s <= static_cast<double>(d.n2);
}

std::array<double, 3> eta_terms(std::size_t n2, double s, double sigma, double q) {
    check_soft_q(q);
    if (!(s > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("eta_terms requires s > 0 and sigma > 0");
    }
    const double n = static_cast<double>(n2);
    const double log_term =
        s * std::pow(sigma * sigma * std::log1p(std::pow(sigma, q) * n / s), 1.0 - q / 2.0);
    const double sq_term = std::pow(s, 2.0 / q);
    const double dense_term = n * sigma * sigma;
    return {log_term, sq_term, dense_term};
}

double eta_vect(std::size_t n2, double s, double sigma, double q) {
    if (q == 0.0) {
        if (!(s >= 1.0) || s > static_cast<double>(n2)) {
            throw std::invalid_argument("eta_vect with q = 0 requires 1 <= s <= n2");
        }
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
        return sigma * sigma * s * log_e_ratio(static_cast<double>(n2), s);
    }
    const auto t = eta_terms(n2, s, sigma, q);
    return std::max({t[0], t[1], t[2]});
}

double eta_soft(const ProblemDims& d) {
    if (d.q == 0.0) {
        throw std::invalid_argument("eta_soft is for 0 < q < 2; use rate_hard for q = 0");
    }
    check_soft_q(d.q);
    if (!(d.s > 0.0) || !(d.sigma_or_k > 0.0)) {
        throw std::invalid_argument("eta_soft requires s > 0 and a positive noise scale");
    }
    const double n1 = static_cast<double>(d.n1);
    const double n2 = static_cast<double>(d.n2);
    const double sigma = d.sigma_or_k;
    const double log_term =
        n1 * d.s *
        std::pow(sigma * sigma * std::log1p(std::pow(sigma, d.q) * n2 / d.s), 1.0 - d.q / 2.0);
    const double sq_term = n1 * std::pow(d.s, 2.0 / d.q);
    const double dense_term = n1 * n2 * sigma * sigma;
    return std::max({log_term, sq_term, dense_term});
}

double psi_soft(const ProblemDims& d) {
    if (d.q == 0.0) {
        throw std::invalid_argument("psi_soft is for 0 < q < 2; use rate_hard for q = 0");
    }
    check_soft_q(d.q);
    if (!(d.s > 0.0) || !(d.sigma_or_k > 0.0)) {
        throw std::invalid_argument("psi_soft requires s > 0 and a positive noise scale");
    }
    const double n1 = static_cast<double>(d.n1);
    const double n2 = static_cast<double>(d.n2);
    const double K = d.sigma_or_k;
    const double log_term =
        n1 * d.s * std::pow(K * K * std::log1p(std::pow(K, d.q) * n2 / d.s), 1.0 - d.q / 2.0);
    const double sq_term = n1 * std::pow(d.s, 2.0 / d.q);
    const double dense_term = n1 * n2 * K * K;
    return std::max({log_term, sq_term, dense_term});
}

SolveKResult solve_k(std::size_t n2, double s, double sigma, double q) {
    check_soft_q(q);
    if (!(s > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument("solve_k requires s > 0 and sigma > 0");
    }
    const std::uint64_t cap = std::max<std::uint64_t>(n2, 1000000);
    const double n = static_cast<double>(n2);
    // k (log(1 + n2/k))^{q/2} is increasing, so the feasible set is an
    // initial segment; scan until the first failure.
    SolveKResult result;
    for (std::uint64_t k = 1; k <= cap; ++k) {
        const double rhs =
            s * std::pow(sigma, -q) * std::pow(std::log1p(n / static_cast<double>(k)), -q / 2.0);
        if (static_cast<double>(k) <= rhs) {
            result.k = k;
        } else {
            return result;
        }
    }
    result.capped = true;
    return result;
}

SprimeResult balance_sprime(std::size_t n2, double s, double K, double q,
                            double c_prime) {
    if (!(q > 0.0 && q <= 2.0)) {
        throw std::invalid_argument("balance_sprime requires 0 < q <= 2");
    }
    if (!(s > 0.0) || !(K > 0.0) || !(c_prime > 0.0)) {
        throw std::invalid_argument("balance_sprime requires positive s, K and c'");
    }
    if (n2 < 2) throw std::invalid_argument("balance_sprime requires n2 >= 2");

    const double kq = std::pow(K, q);
    const double raw =
        c_prime * (s / kq) *
        std::pow(std::log1p(static_cast<double>(n2) * kq / s), -q / 2.0);
    const double floored = std::floor(raw);
    const std::size_t hi = n2 / 2;

    SprimeResult result;
    if (floored < 1.0) {
        result.s_prime = 1;
        result.clamped_low = true;
    } else if (floored > static_cast<double>(hi)) {
        result.s_prime = hi;
        result.clamped_high = true;
    } else {
        result.s_prime = static_cast<std::size_t>(floored);
    }
    return result;
}

}  // namespace rowsparse
