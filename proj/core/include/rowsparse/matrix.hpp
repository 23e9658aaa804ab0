#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rowsparse {

// Dense real matrix, row-major. Entries must be finite; constructors that
// accept external data reject NaN/Inf, and every operation in this library
// preserves finiteness.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t n1, std::size_t n2, double fill = 0.0);
    RealMatrix(std::size_t n1, std::size_t n2, std::vector<double> entries);
    static RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return n1_; }
    std::size_t cols() const noexcept { return n2_; }
    std::size_t size() const noexcept { return entries_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * n2_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n2_ + j]; }

    std::span<const double> entries() const noexcept { return entries_; }
    std::span<double> entries() noexcept { return entries_; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n2_, n2_}; }

    RealMatrix& operator+=(const RealMatrix& other);
    RealMatrix& operator-=(const RealMatrix& other);
    RealMatrix& operator*=(double c);

    friend RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
    friend RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
    friend RealMatrix operator*(RealMatrix a, double c) { return a *= c; }
    friend RealMatrix operator*(double c, RealMatrix a) { return a *= c; }

    bool operator==(const RealMatrix&) const = default;

private:
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::vector<double> entries_;
};

// Row sparsity class: every row must lie in the l_q ball of radius s.
// q = 0 is hard sparsity (at most s nonzeros per row, s a positive integer);
// 0 < q <= 2 is soft sparsity (sum_j |a_ij|^q <= s).
struct SparsityClass {
    double q;
    double s;
    SparsityClass(double q, double s);
};

// Elementwise l_q (quasi-)norm, (sum |a_ij|^q)^(1/q). Requires q > 0.
double norm_lq(const RealMatrix& a, double q);

// Number of nonzero entries. Exact zero test, no tolerance.
std::size_t l0_count(const RealMatrix& a);

// Row-wise composite (quasi-)norm: l_p aggregation of row l_2 norms,
// (sum_i |row_i|_2^p)^(1/p). Equals the elementwise l_2 norm at p = 2.
double norm_2p(const RealMatrix& a, double p);

bool in_class(const RealMatrix& a, const SparsityClass& c);

// Keep the s_prime largest-magnitude entries of each row, zero the rest.
// Ties in magnitude keep the lowest column index.
RealMatrix truncate_rows(const RealMatrix& m, std::size_t s_prime);

}  // namespace rowsparse
