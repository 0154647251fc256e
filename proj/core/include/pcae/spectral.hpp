#pragma once

#include <vector>

#include "pcae/matrix.hpp"

namespace pcae {

// Full orthogonal eigendecomposition of a symmetric matrix.
// vectors columns are eigenvectors, values sorted descending.
struct SymEigen {
    Matrix vectors;
    std::vector<double> values;
};

// Thin SVD: A (rows x cols) = u * diag(sigma) * v^T with k = min(rows, cols)
// retained triplets, sigma descending. rank_deficient marks singular values
// below 1e-12 * sigma[0], whose left vectors were completed by orthonormal
// extension. degenerate marks near-equal neighboring singular values
// (gap < 1e-6 * sigma[0]): the individual vectors in such a cluster are not
// uniquely determined.
struct ThinSVD {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
    bool rank_deficient = false;
    bool degenerate = false;
};

// Cyclic Jacobi eigendecomposition. The input is symmetrized before
// iteration; asymmetry beyond 1e-8 * ||A||_F is an error. Sweeps run until
// all off-diagonal magnitudes fall below 1e-12 * ||A||_F, capped at 50.
SymEigen sym_eigen(const Matrix& a);

// One-sided Jacobi (Hestenes) SVD. Handles both tall and wide inputs by
// transposing internally.
ThinSVD thin_svd(const Matrix& a);

// Moore-Penrose pseudoinverse A+ = V * Sigma+ * U^T with relative
// singular-value threshold 1e-12 * sigma[0].
Matrix pseudoinverse(const Matrix& a);

} // namespace pcae
