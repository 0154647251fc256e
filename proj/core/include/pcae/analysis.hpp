#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcae/autoencoder.hpp"
#include "pcae/dataset.hpp"
#include "pcae/matrix.hpp"

namespace pcae {

enum class Provenance { Oracle, RecoveredFromW2, RecoveredFromW1 };

enum class RecoverySource { W2, W1 };

// A recovered or exact PCA transform: orthonormal loading vectors with
// descending data variances and canonical signs (largest-magnitude entry of
// each column positive).
struct PcaModel {
    std::vector<double> mean;  // n
    Matrix loading_vectors;    // n x m, orthonormal columns
    std::vector<double> variances;  // length m, descending; empty until estimated
    Provenance provenance = Provenance::Oracle;
    bool degenerate = false;

    std::size_t dim() const { return loading_vectors.rows(); }
    std::size_t components() const { return loading_vectors.cols(); }
};

struct CovarianceReport {
    Matrix covariance;        // m x m covariance of centered scores (1/N normalization)
    double offdiag_ratio = 0.0;
    bool descending_ok = false;
};

struct EckartYoungResult {
    double recon_error = 0.0;  // ||Y0 - Proj*Y0||_F^2 / N
    double bound = 0.0;        // (sum of trailing eigenvalues) / N
    double gap = 0.0;          // relative when bound > 0, absolute otherwise
};

struct DiagnosticsReport {
    double offdiag_ratio = 0.0;
    bool descending_ok = false;
    std::vector<double> principal_angles_deg;
    double recon_error = 0.0;
    double eckart_young_bound = 0.0;
    double eckart_young_gap = 0.0;
    double pseudoinverse_residual = 0.0;

    // Flat key=value text serialization.
    std::string to_key_values() const;
    void write(const std::filesystem::path& path) const;
};

// Exact PCA: center, form the covariance Y0 Y0^T, eigendecompose, keep the
// first m pairs. variances are eigenvalues of Y0 Y0^T (1/N factor kept
// explicit at the interfaces that need it).
PcaModel oracle_pca(const Dataset& dataset, std::size_t m);

// The left singular vectors of W2 (or of W1^T). variances stay empty until
// estimate_variances. Rank deficiency below m is an error.
PcaModel recover_loading_vectors(const AutoencoderParams& params, RecoverySource source,
                                 std::size_t m);

// Fill variances from the data (per-row sums of squares of the centered
// scores), re-sort columns by descending variance, re-canonicalize signs.
PcaModel estimate_variances(PcaModel model, const Dataset& dataset);

// Centered scores: loading_vectors^T * (Y - mean 1^T).
Matrix transform(const PcaModel& model, const Dataset& dataset);

// Scores with each row divided by sqrt(variance_i / N + epsilon).
Matrix whiten(const PcaModel& model, const Dataset& dataset, double epsilon);

// Canonical angles in degrees, ascending (descending cosines). Both inputs
// must have orthonormal columns within 1e-6.
std::vector<double> principal_angles_deg(const Matrix& a, const Matrix& b);

CovarianceReport covariance_report(const Matrix& scores);

EckartYoungResult eckart_young_gap(const Dataset& dataset, const PcaModel& model);
EckartYoungResult eckart_young_gap(const Dataset& dataset, const AutoencoderParams& params);

// Principal angles between the first-m2 truncation of model_m1 and model_m2.
// Requires m2 < m1 and matching dimension.
std::vector<double> nestedness_check(const PcaModel& model_m1, const PcaModel& model_m2);

// ||W1 - W2+||_F / ||W1||_F.
double pseudoinverse_residual(const AutoencoderParams& params);

// In-place sign canonicalization of the columns of a basis.
void canonicalize_signs(Matrix& basis);

} // namespace pcae
