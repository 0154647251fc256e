#include "pcae/dataset.hpp"

#include <cmath>
#include <string>

#include "pcae/errors.hpp"

namespace pcae {

void PlantedSpectrum::validate() const {
    const std::size_t n = basis.rows();
    if (n == 0 || basis.cols() != n)
        throw DimensionError("PlantedSpectrum: basis must be square and non-empty");
    if (stds.size() != n || mean.size() != n)
        throw DimensionError("PlantedSpectrum: stds/mean length must match basis dimension");
    for (std::size_t i = 0; i < n; ++i) {
        if (stds[i] < 0.0)
            throw ConfigError("PlantedSpectrum: negative std at index " + std::to_string(i));
        // Strictly descending among positive entries; a zero tail may repeat.
        if (i + 1 < n && stds[i + 1] >= stds[i] && stds[i] > 0.0)
            throw ConfigError("PlantedSpectrum: stds must be strictly descending");
        if (i + 1 < n && stds[i + 1] > stds[i])
            throw ConfigError("PlantedSpectrum: stds must be non-increasing");
    }
    const Matrix gram = matmul(transpose(basis), basis);
    if (frobenius_norm(subtract(gram, Matrix::identity(n))) > 1e-10)
        throw NumericError("PlantedSpectrum: basis is not orthogonal");
}

Dataset synthesize_gaussian(const PlantedSpectrum& spec, std::size_t count, RandomSource& rng) {
    spec.validate();
    if (count < 1)
        throw ConfigError("synthesize_gaussian: count must be >= 1");
    const std::size_t n = spec.basis.rows();

    // Scores first: z scaled by the planted stds, then rotated by the basis.
    Matrix scores(n, count);
    for (std::size_t j = 0; j < count; ++j)
        for (std::size_t i = 0; i < n; ++i)
            scores(i, j) = spec.stds[i] * rng.gaussian();

    Matrix obs = matmul(spec.basis, scores);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < count; ++j)
            obs(i, j) += spec.mean[i];

    Dataset d;
    d.observations = std::move(obs);
    d.source_tag = "synthetic";
    return d;
}

Matrix random_orthogonal(std::size_t n, RandomSource& rng) {
    if (n < 1)
        throw ConfigError("random_orthogonal: n must be >= 1");
    Matrix g = gaussian_fill(rng, n, n, 1.0);
    // Modified Gram-Schmidt, two passes.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    dot += g(i, j) * g(i, k);
                for (std::size_t i = 0; i < n; ++i)
                    g(i, j) -= dot * g(i, k);
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                norm += g(i, j) * g(i, j);
            norm = std::sqrt(norm);
            if (norm < 1e-12)
                throw NumericError("random_orthogonal: degenerate Gaussian draw");
            for (std::size_t i = 0; i < n; ++i)
                g(i, j) /= norm;
        }
    }
    return g;
}

} // namespace pcae
