#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcae/matrix.hpp"
#include "pcae/random.hpp"

namespace pcae {

struct ImageShape {
    std::size_t height = 0;
    std::size_t width = 0;
};

// A column-per-observation dataset: dim() x count().
struct Dataset {
    Matrix observations;
    std::string source_tag;
    std::optional<ImageShape> image_shape;

    std::size_t dim() const { return observations.rows(); }
    std::size_t count() const { return observations.cols(); }
};

// Ground truth for synthetic experiments: an orthogonal basis whose columns
// are the planted loading vectors, strictly descending per-axis score
// standard deviations, and a mean vector. Strict descent guarantees distinct
// population eigenvalues, so the planted vectors are individually
// identifiable.
struct PlantedSpectrum {
    Matrix basis;              // n x n orthogonal
    std::vector<double> stds;  // length n, strictly descending, positive or zero
    std::vector<double> mean;  // length n

    void validate() const;
};

// Each observation = mean + basis * (stds .* z) with z standard normal.
// Expected covariance is basis * diag(stds^2) * basis^T.
Dataset synthesize_gaussian(const PlantedSpectrum& spec, std::size_t count, RandomSource& rng);

// Random n x n orthogonal matrix: Gram-Schmidt orthonormalization of a
// Gaussian matrix (re-orthogonalized once for accuracy).
Matrix random_orthogonal(std::size_t n, RandomSource& rng);

} // namespace pcae
