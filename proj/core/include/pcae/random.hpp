#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pcae/matrix.hpp"

namespace pcae {

// Seeded random source. The generator is std::mt19937_64, whose output
// sequence is fixed by the C++ standard, so seeds are portable across
// platforms. Gaussian draws use Box-Muller on top of the raw 64-bit
// stream rather than std::normal_distribution, which is
// implementation-defined.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in (0, 1].
    double uniform();

    // Standard normal draw.
    double gaussian();

    // Uniform integer in [0, bound).
    std::size_t next_index(std::size_t bound);

    // Fisher-Yates permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// i.i.d. N(0, scale^2) entries. scale must be positive.
Matrix gaussian_fill(RandomSource& rng, std::size_t rows, std::size_t cols, double scale);

} // namespace pcae
