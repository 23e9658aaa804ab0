#include "rowsparse/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rowsparse {

namespace {

void check_finite(const std::vector<double>& entries) {
    for (double v : entries) {
        if (!std::isfinite(v)) throw std::invalid_argument("matrix entries must be finite");
    }
}

void check_same_dims(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
}

}  // namespace

RealMatrix::RealMatrix(std::size_t n1, std::size_t n2, double fill)
    : n1_(n1), n2_(n2), entries_(n1 * n2, fill) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (!std::isfinite(fill)) throw std::invalid_argument("matrix entries must be finite");
}

RealMatrix::RealMatrix(std::size_t n1, std::size_t n2, std::vector<double> entries)
    : n1_(n1), n2_(n2), entries_(std::move(entries)) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (entries_.size() != n1 * n2) throw std::invalid_argument("entry count must equal n1*n2");
    check_finite(entries_);
}

RealMatrix RealMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t n1 = rows.size();
    if (n1 == 0) throw std::invalid_argument("matrix dimensions must be positive");
    const std::size_t n2 = rows.begin()->size();
    std::vector<double> entries;
    entries.reserve(n1 * n2);
    for (const auto& r : rows) {
        if (r.size() != n2) throw std::invalid_argument("ragged rows");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return RealMatrix(n1, n2, std::move(entries));
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& other) {
    check_same_dims(*this, other);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& other) {
    check_same_dims(*this, other);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

RealMatrix& RealMatrix::operator*=(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("scale factor must be finite");
    for (double& v : entries_) v *= c;
    return *this;
}

SparsityClass::SparsityClass(double q_, double s_) : q(q_), s(s_) {
    // [0, 2) for the rate theory; q = 2 additionally admitted so that the
    // truncation bound, stated for 0 < q <= 2, can be checked through the
    // same membership test.
    if (!(q >= 0.0 && q <= 2.0)) throw std::invalid_argument("sparsity exponent q must lie in [0, 2]");
    if (!(s > 0.0)) throw std::invalid_argument("sparsity radius s must be positive");
    if (q == 0.0 && (std::floor(s) != s || s < 1.0)) {
        throw std::invalid_argument("hard sparsity level s must be an integer >= 1");
    }
}

double norm_lq(const RealMatrix& a, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("norm_lq requires q > 0");
    double sum = 0.0;
    for (double v : a.entries()) sum += std::pow(std::abs(v), q);
    return std::pow(sum, 1.0 / q);
}

std::size_t l0_count(const RealMatrix& a) {
    std::size_t count = 0;
    for (double v : a.entries()) count += (v != 0.0);
    return count;
}

double norm_2p(const RealMatrix& a, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("norm_2p requires p > 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double row_sq = 0.0;
        for (double v : a.row(i)) row_sq += v * v;
        sum += std::pow(std::sqrt(row_sq), p);
    }
    return std::pow(sum, 1.0 / p);
}

bool in_class(const RealMatrix& a, const SparsityClass& c) {
    if (c.q == 0.0) {
        if (c.s > static_cast<double>(a.cols())) {
            throw std::invalid_argument("hard sparsity level s exceeds the column count");
        }
        const auto s = static_cast<std::size_t>(c.s);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::size_t nnz = 0;
            for (double v : a.row(i)) nnz += (v != 0.0);
            if (nnz > s) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double mass = 0.0;
        for (double v : a.row(i)) mass += std::pow(std::abs(v), c.q);
        if (mass > c.s) return false;
    }
    return true;
}

RealMatrix truncate_rows(const RealMatrix& m, std::size_t s_prime) {
    if (s_prime < 1 || s_prime > m.cols()) {
        throw std::invalid_argument("truncation level must satisfy 1 <= s' <= n2");
    }
    RealMatrix out(m.rows(), m.cols(), 0.0);
    std::vector<std::size_t> order(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ma = std::abs(row[a]);
            const double mb = std::abs(row[b]);
            if (ma != mb) return ma > mb;
            return a < b;  // equal magnitudes keep the lowest column
        });
        for (std::size_t k = 0; k < s_prime; ++k) out(i, order[k]) = row[order[k]];
    }
    return out;
}

}  // namespace rowsparse
