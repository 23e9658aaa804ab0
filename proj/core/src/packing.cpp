#include "rowsparse/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rowsparse/rng.hpp"

namespace rowsparse {

namespace {

void check_pattern_dims(const BinaryPattern& a, const BinaryPattern& b) {
    if (a.n1 != b.n1 || a.n2 != b.n2) {
        throw std::invalid_argument("pattern dimension mismatch");
    }
}

// Symmetric-difference size of two sorted index lists.
std::size_t sorted_sym_diff(std::span<const std::uint32_t> a,
                            std::span<const std::uint32_t> b) {
    std::size_t common = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return a.size() + b.size() - 2 * common;
}

std::size_t exhaustive_min_distance(const std::vector<BinaryPattern>& patterns) {
    std::size_t d_min = 0;
    bool first = true;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        for (std::size_t j = i + 1; j < patterns.size(); ++j) {
            const std::size_t d = hamming(patterns[i], patterns[j]);
            if (first || d < d_min) {
                d_min = d;
                first = false;
            }
        }
    }
    return first ? 0 : d_min;
}

void finalize(PackingSet& pack) {
    pack.d_min_achieved = exhaustive_min_distance(pack.patterns);
    pack.log_cardinality =
        pack.patterns.empty() ? 0.0 : std::log(static_cast<double>(pack.patterns.size()));
}

}  // namespace

RealMatrix pattern_to_matrix(const BinaryPattern& p, double amplitude) {
    RealMatrix m(p.n1, p.n2, 0.0);
    for (std::size_t i = 0; i < p.n1; ++i) {
        for (std::uint32_t c : p.row(i)) m(i, c) = amplitude;
    }
    return m;
}

BinaryPattern uniform_pattern(std::size_t n1, std::size_t n2, std::size_t s,
                              std::mt19937_64& eng) {
    if (n1 == 0 || s < 1 || s > n2) {
        throw std::invalid_argument("uniform_pattern requires n1 >= 1 and 1 <= s <= n2");
    }
    BinaryPattern p{n1, n2, s, {}};
    p.cols.reserve(n1 * s);
    std::vector<std::uint32_t> deck(n2);
    for (std::size_t i = 0; i < n1; ++i) {
        std::iota(deck.begin(), deck.end(), 0u);
        for (std::size_t k = 0; k < s; ++k) {
            const std::size_t j = k + uniform_below(eng, n2 - k);
            std::swap(deck[k], deck[j]);
        }
        std::sort(deck.begin(), deck.begin() + s);
        p.cols.insert(p.cols.end(), deck.begin(), deck.begin() + s);
    }
    return p;
}

std::size_t hamming(const BinaryPattern& a, const BinaryPattern& b) {
    check_pattern_dims(a, b);
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.n1; ++i) d += sorted_sym_diff(a.row(i), b.row(i));
    return d;
}

PackingSet vg_pack(std::size_t n1, std::size_t n2, std::size_t s,
                   std::size_t d_min, std::size_t budget, std::uint64_t seed,
                   std::size_t max_card) {
    if (s < 1 || 2 * s > n2) {
        throw std::invalid_argument("vg_pack requires 1 <= s <= n2/2");
    }
    if (d_min == 0 || budget == 0 || max_card == 0) {
        throw std::invalid_argument("vg_pack requires positive d_min, budget and max_card");
    }

    PackingSet pack;
    pack.n1 = n1;
    pack.n2 = n2;
    pack.s = s;
    pack.d_min_required = d_min;
    pack.construction = PackConstruction::greedy;

    std::mt19937_64 eng(seed);
    std::size_t consecutive_rejections = 0;
    while (consecutive_rejections < budget && pack.patterns.size() < max_card) {
        BinaryPattern candidate = uniform_pattern(n1, n2, s, eng);
        bool separated = true;
        for (const auto& accepted : pack.patterns) {
            if (hamming(candidate, accepted) < d_min) {
                separated = false;
                break;
            }
        }
        if (separated) {
            pack.patterns.push_back(std::move(candidate));
            consecutive_rejections = 0;
        } else {
            ++consecutive_rejections;
        }
    }
    finalize(pack);
    return pack;
}

PackingSet embed_replicate(const PackingSet& base, std::size_t s, std::size_t n2) {
    if (base.s != 1) {
        throw std::invalid_argument("embed_replicate expects a base pack with one 1 per row");
    }
    if (s < 1 || base.n2 != n2 / s) {
        throw std::invalid_argument("embed_replicate width mismatch: base width must be floor(n2/s)");
    }
    const std::size_t l = base.n2;

    PackingSet out;
    out.n1 = base.n1;
    out.n2 = n2;
    out.s = s;
    out.d_min_required = s * base.d_min_required;
    out.construction = PackConstruction::replicate_embed;
    out.patterns.reserve(base.patterns.size());
    for (const auto& tilde : base.patterns) {
        BinaryPattern p{base.n1, n2, s, {}};
        p.cols.reserve(base.n1 * s);
        for (std::size_t i = 0; i < base.n1; ++i) {
            const std::uint32_t c = tilde.row(i)[0];
            for (std::size_t k = 0; k < s; ++k) {
                p.cols.push_back(static_cast<std::uint32_t>(k * l + c));
            }
        }
        out.patterns.push_back(std::move(p));
    }
    finalize(out);
    return out;
}

PackingSet embed_pad_ones(const PackingSet& base, std::size_t s, std::size_t n2) {
    if (base.s >= s) {
        throw std::invalid_argument("embed_pad_ones requires base row weight s' < s");
    }
    if (n2 != base.n2 + (s - base.s)) {
        throw std::invalid_argument("embed_pad_ones width mismatch: n2 must equal n2' + (s - s')");
    }

    PackingSet out;
    out.n1 = base.n1;
    out.n2 = n2;
    out.s = s;
    out.d_min_required = base.d_min_required;  // appended columns are identical
    out.construction = PackConstruction::pad_ones_embed;
    out.patterns.reserve(base.patterns.size());
    for (const auto& bar : base.patterns) {
        BinaryPattern p{base.n1, n2, s, {}};
        p.cols.reserve(base.n1 * s);
        for (std::size_t i = 0; i < base.n1; ++i) {
            const auto row = bar.row(i);
            p.cols.insert(p.cols.end(), row.begin(), row.end());
            for (std::size_t c = base.n2; c < n2; ++c) {
                p.cols.push_back(static_cast<std::uint32_t>(c));
            }
        }
        out.patterns.push_back(std::move(p));
    }
    finalize(out);
    return out;
}

std::size_t row_disagreement(const BinaryPattern& a, const BinaryPattern& b,
                             std::size_t s) {
    check_pattern_dims(a, b);
    const double threshold = static_cast<double>(s) / 32.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.n1; ++i) {
        if (static_cast<double>(sorted_sym_diff(a.row(i), b.row(i))) > threshold) ++count;
    }
    return count;
}

double kl_gaussian(const RealMatrix& b, const RealMatrix& b_prime, double sigma) {
    if (b.rows() != b_prime.rows() || b.cols() != b_prime.cols()) {
        throw std::invalid_argument("matrix dimension mismatch");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    double sq = 0.0;
    const auto x = b.entries();
    const auto y = b_prime.entries();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    return sq / (2.0 * sigma * sigma);
}

std::vector<RealMatrix> scale_pack(const PackingSet& pack, double gamma,
                                   double sigma, const ScaleMode& mode) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");

    double amplitude = 0.0;
    if (const auto* hard = std::get_if<HardScale>(&mode)) {
        if (hard->s < 1 || hard->s > pack.n2) {
            throw std::invalid_argument("hard scale level s out of range");
        }
        amplitude = sigma * gamma *
                    std::sqrt(1.0 + std::log(static_cast<double>(pack.n2) /
                                             static_cast<double>(hard->s)));
    } else {
        const auto& soft = std::get<SoftScale>(mode);
        if (!(soft.q > 0.0 && soft.q < 2.0)) {
            throw std::invalid_argument("soft scale requires 0 < q < 2");
        }
        if (!(soft.tau > 0.0 && soft.tau < 1.0)) {
            throw std::invalid_argument("tau must lie in (0, 1)");
        }
        if (!(soft.delta_bar > 0.0) || soft.S < 1) {
            throw std::invalid_argument("soft scale requires delta_bar > 0 and S >= 1");
        }
        amplitude = soft.tau * std::pow(soft.delta_bar / static_cast<double>(soft.S),
                                        1.0 / soft.q);
    }

    std::vector<RealMatrix> out;
    out.reserve(pack.patterns.size());
    for (const auto& p : pack.patterns) out.push_back(pattern_to_matrix(p, amplitude));
    return out;
}

PackCertificate verify_pack(const PackingSet& pack, double c_target) {
    PackCertificate cert;
    const std::size_t n = pack.patterns.size();
    cert.pairs = n < 2 ? 0 : n * (n - 1) / 2;
    cert.d_min_achieved = exhaustive_min_distance(pack.patterns);
    cert.d_min_required = pack.d_min_required;
    cert.required_pass = cert.pairs == 0 || cert.d_min_achieved >= cert.d_min_required;
    cert.distance_floor =
        static_cast<double>(pack.n1) * static_cast<double>(pack.s + 1) / 16.0;
    cert.distance_pass =
        cert.pairs == 0 || static_cast<double>(cert.d_min_achieved) >= cert.distance_floor;
    cert.log_cardinality = n == 0 ? 0.0 : std::log(static_cast<double>(n));
    cert.cardinality_target =
        c_target * static_cast<double>(pack.n1) * static_cast<double>(pack.s) *
        (1.0 + std::log(static_cast<double>(pack.n2) / static_cast<double>(pack.s)));
    cert.cardinality_pass = cert.log_cardinality >= cert.cardinality_target;
    return cert;
}

}  // namespace rowsparse
