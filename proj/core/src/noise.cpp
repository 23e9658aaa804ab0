#include "rowsparse/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rowsparse/rng.hpp"

namespace rowsparse {

namespace {

void check_param(double param) {
    if (!(param > 0.0) || !std::isfinite(param)) {
        throw std::invalid_argument("noise scale parameter must be positive and finite");
    }
}

// Box-Muller pairs on 53-bit uniforms; the cosine deviate is emitted first.
class GaussianStream {
public:
    explicit GaussianStream(std::mt19937_64& eng) : eng_(eng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = unit_open(eng_);       // (0, 1], log is finite
        const double v = unit_half_open(eng_);  // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u));
        const double t = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64& eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

NoiseSpec gaussian_noise(double sigma, std::uint64_t seed) {
    check_param(sigma);
    return {NoiseFamily::gaussian, sigma, seed, std::nullopt};
}

NoiseSpec rademacher_noise(double a, std::uint64_t seed) {
    check_param(a);
    return {NoiseFamily::rademacher, a, seed, std::nullopt};
}

NoiseSpec uniform_noise(double a, std::uint64_t seed) {
    check_param(a);
    return {NoiseFamily::uniform, a, seed, std::nullopt};
}

RealMatrix sample_noise(std::size_t n1, std::size_t n2, const NoiseSpec& spec) {
    check_param(spec.param);
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("matrix dimensions must be positive");

    std::mt19937_64 eng(spec.seed);
    std::vector<double> entries(n1 * n2);
    switch (spec.family) {
        case NoiseFamily::gaussian: {
            GaussianStream g(eng);
            for (double& v : entries) v = spec.param * g.next();
            break;
        }
        case NoiseFamily::rademacher:
            for (double& v : entries) v = (eng() >> 63) ? spec.param : -spec.param;
            break;
        case NoiseFamily::uniform:
            for (double& v : entries) v = spec.param * (2.0 * unit_half_open(eng) - 1.0);
            break;
    }
    return RealMatrix(n1, n2, std::move(entries));
}

RealMatrix observe(const RealMatrix& m, const NoiseSpec& spec) {
    return m + sample_noise(m.rows(), m.cols(), spec);
}

double subgaussian_K(const NoiseSpec& spec) {
    if (spec.k_override) {
        if (!(*spec.k_override > 0.0)) throw std::invalid_argument("K override must be positive");
        return *spec.k_override;
    }
    // Conventions: gaussian -> sigma (the N(0, sigma^2) moment ratio
    // (E|xi|^p)^{1/p} / (sigma sqrt p) peaks at p = 1 with value
    // sqrt(2/pi) < 1); rademacher and uniform -> the magnitude bound a.
    return spec.param;
}

}  // namespace rowsparse
