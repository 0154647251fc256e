#include "pcae/random.hpp"

#include <cmath>
#include <numbers>

namespace pcae {

double RandomSource::uniform() {
    // 53-bit mantissa; (x + 1) / 2^53 lands in (0, 1] so log() is safe.
    const std::uint64_t x = gen_() >> 11;
    return (static_cast<double>(x) + 1.0) * 0x1p-53;
}

double RandomSource::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::size_t RandomSource::next_index(std::size_t bound) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

std::vector<std::size_t> RandomSource::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = next_index(i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

Matrix gaussian_fill(RandomSource& rng, std::size_t rows, std::size_t cols, double scale) {
    if (scale <= 0.0)
        throw ConfigError("gaussian_fill: scale must be positive");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = scale * rng.gaussian();
    return m;
}

} // namespace pcae
