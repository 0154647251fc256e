#include "pcae/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "pcae/errors.hpp"
#include "pcae/spectral.hpp"

namespace pcae {

namespace {

void check_orthonormal(const Matrix& a, double tol, const char* what) {
    const Matrix gram = matmul(transpose(a), a);
    if (frobenius_norm(subtract(gram, Matrix::identity(a.cols()))) > tol)
        throw NumericError(std::string(what) + ": columns are not orthonormal");
}

Matrix centered(const Dataset& dataset, const std::vector<double>& mean) {
    return subtract_column(dataset.observations, mean);
}

} // namespace

void canonicalize_signs(Matrix& basis) {
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < basis.rows(); ++i) {
            const double mag = std::fabs(basis(i, j));
            if (mag > best) {  // strict: ties keep the lowest index
                best = mag;
                arg = i;
            }
        }
        if (basis(arg, j) < 0.0)
            for (std::size_t i = 0; i < basis.rows(); ++i)
                basis(i, j) = -basis(i, j);
    }
}

PcaModel oracle_pca(const Dataset& dataset, std::size_t m) {
    const std::size_t n = dataset.dim();
    if (m > n)
        throw ConfigError("oracle_pca: m exceeds data dimension");
    if (dataset.count() < 2)
        throw ConfigError("oracle_pca: need at least 2 observations");

    PcaModel model;
    model.mean = column_mean(dataset.observations);
    const Matrix y0 = centered(dataset, model.mean);
    const Matrix cov = matmul(y0, transpose(y0));
    const SymEigen eig = sym_eigen(cov);

    model.loading_vectors = Matrix(n, m);
    model.variances.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        model.variances[j] = std::max(eig.values[j], 0.0);
        for (std::size_t i = 0; i < n; ++i)
            model.loading_vectors(i, j) = eig.vectors(i, j);
    }
    canonicalize_signs(model.loading_vectors);
    model.provenance = Provenance::Oracle;

    const double scale = eig.values.empty() ? 0.0 : std::max(eig.values[0], 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j)
        if (model.variances[j] - model.variances[j + 1] < 1e-6 * scale)
            model.degenerate = true;
    if (scale == 0.0)
        model.degenerate = true;
    return model;
}

PcaModel recover_loading_vectors(const AutoencoderParams& params, RecoverySource source,
                                 std::size_t m) {
    const Matrix target =
        source == RecoverySource::W2 ? params.w2 : transpose(params.w1);  // n x code_dim
    if (m > target.cols())
        throw ConfigError("recover_loading_vectors: m exceeds the bottleneck width");

    const ThinSVD svd = thin_svd(target);
    const double tol = 1e-12 * (svd.sigma.empty() ? 0.0 : svd.sigma[0]);
    std::size_t rank = 0;
    while (rank < svd.sigma.size() && svd.sigma[rank] > tol && svd.sigma[rank] > 0.0)
        ++rank;
    if (rank < m)
        throw NumericError("recover_loading_vectors: weight matrix has rank " +
                           std::to_string(rank) + " < m = " + std::to_string(m));

    PcaModel model;
    model.mean.assign(target.rows(), 0.0);
    model.loading_vectors = Matrix(target.rows(), m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < target.rows(); ++i)
            model.loading_vectors(i, j) = svd.u(i, j);
    canonicalize_signs(model.loading_vectors);
    model.provenance = source == RecoverySource::W2 ? Provenance::RecoveredFromW2
                                                    : Provenance::RecoveredFromW1;
    model.degenerate = svd.degenerate;
    return model;
}

PcaModel estimate_variances(PcaModel model, const Dataset& dataset) {
    if (model.dim() != dataset.dim())
        throw DimensionError("estimate_variances: model/dataset dimension mismatch");
    check_orthonormal(model.loading_vectors, 1e-8, "estimate_variances");

    model.mean = column_mean(dataset.observations);
    const Matrix y0 = centered(dataset, model.mean);
    const Matrix scores = matmul(transpose(model.loading_vectors), y0);

    const std::size_t m = model.components();
    std::vector<double> var(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < scores.cols(); ++j)
            var[i] += scores(i, j) * scores(i, j);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return var[a] > var[b]; });

    Matrix sorted(model.dim(), m);
    model.variances.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        model.variances[j] = var[order[j]];
        for (std::size_t i = 0; i < model.dim(); ++i)
            sorted(i, j) = model.loading_vectors(i, order[j]);
    }
    model.loading_vectors = std::move(sorted);
    canonicalize_signs(model.loading_vectors);
    return model;
}

Matrix transform(const PcaModel& model, const Dataset& dataset) {
    if (model.dim() != dataset.dim())
        throw DimensionError("transform: model/dataset dimension mismatch");
    return matmul(transpose(model.loading_vectors), centered(dataset, model.mean));
}

Matrix whiten(const PcaModel& model, const Dataset& dataset, double epsilon) {
    if (model.variances.size() != model.components())
        throw ConfigError("whiten: variances are unset; run estimate_variances first");
    Matrix scores = transform(model, dataset);
    const double n = static_cast<double>(dataset.count());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const double denom = std::sqrt(model.variances[i] / n + epsilon);
        for (std::size_t j = 0; j < scores.cols(); ++j)
            scores(i, j) = denom > 0.0 ? scores(i, j) / denom : 0.0;
    }
    return scores;
}

std::vector<double> principal_angles_deg(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw DimensionError("principal_angles: bases live in different dimensions");
    check_orthonormal(a, 1e-6, "principal_angles (first basis)");
    check_orthonormal(b, 1e-6, "principal_angles (second basis)");

    const ThinSVD svd = thin_svd(matmul(transpose(a), b));
    std::vector<double> angles;
    angles.reserve(svd.sigma.size());
    for (double s : svd.sigma) {
        const double c = std::clamp(s, 0.0, 1.0);
        angles.push_back(std::acos(c) * 180.0 / std::numbers::pi);
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

CovarianceReport covariance_report(const Matrix& scores) {
    if (scores.cols() < 2)
        throw DimensionError("covariance_report: need at least 2 observations");
    const std::vector<double> mean = column_mean(scores);
    const Matrix s0 = subtract_column(scores, mean);
    CovarianceReport r;
    r.covariance = scale(matmul(s0, transpose(s0)), 1.0 / static_cast<double>(scores.cols()));

    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < r.covariance.rows(); ++i)
        for (std::size_t j = 0; j < r.covariance.cols(); ++j) {
            const double c2 = r.covariance(i, j) * r.covariance(i, j);
            total += c2;
            if (i != j)
                off += c2;
        }
    r.offdiag_ratio = total > 0.0 ? std::sqrt(off / total) : 0.0;

    r.descending_ok = true;
    for (std::size_t i = 0; i + 1 < r.covariance.rows(); ++i)
        if (r.covariance(i + 1, i + 1) > r.covariance(i, i) * (1.0 + 1e-12))
            r.descending_ok = false;
    return r;
}

namespace {

EckartYoungResult gap_for_projector(const Dataset& dataset, const Matrix& projector,
                                    std::size_t m) {
    const std::vector<double> mean = column_mean(dataset.observations);
    const Matrix y0 = subtract_column(dataset.observations, mean);
    const double n_obs = static_cast<double>(dataset.count());

    const Matrix residual = subtract(y0, matmul(projector, y0));
    EckartYoungResult r;
    r.recon_error = frobenius_norm_sq(residual) / n_obs;

    const SymEigen eig = sym_eigen(matmul(y0, transpose(y0)));
    double tail = 0.0;
    for (std::size_t j = m; j < eig.values.size(); ++j)
        tail += std::max(eig.values[j], 0.0);
    r.bound = tail / n_obs;

    r.gap = r.bound > 0.0 ? (r.recon_error - r.bound) / r.bound : r.recon_error - r.bound;
    return r;
}

} // namespace

EckartYoungResult eckart_young_gap(const Dataset& dataset, const PcaModel& model) {
    if (model.dim() != dataset.dim())
        throw DimensionError("eckart_young_gap: dimension mismatch");
    const Matrix proj = matmul(model.loading_vectors, transpose(model.loading_vectors));
    return gap_for_projector(dataset, proj, model.components());
}

EckartYoungResult eckart_young_gap(const Dataset& dataset, const AutoencoderParams& params) {
    if (params.input_dim() != dataset.dim())
        throw DimensionError("eckart_young_gap: dimension mismatch");
    const Matrix proj = matmul(params.w2, pseudoinverse(params.w2));
    return gap_for_projector(dataset, proj, params.code_dim());
}

std::vector<double> nestedness_check(const PcaModel& model_m1, const PcaModel& model_m2) {
    if (model_m1.dim() != model_m2.dim())
        throw DimensionError("nestedness_check: dimension mismatch");
    const std::size_t m2 = model_m2.components();
    if (m2 >= model_m1.components())
        throw ConfigError("nestedness_check: second model must be strictly narrower");

    Matrix truncated(model_m1.dim(), m2);
    for (std::size_t j = 0; j < m2; ++j)
        for (std::size_t i = 0; i < model_m1.dim(); ++i)
            truncated(i, j) = model_m1.loading_vectors(i, j);
    return principal_angles_deg(truncated, model_m2.loading_vectors);
}

double pseudoinverse_residual(const AutoencoderParams& params) {
    const Matrix pinv = pseudoinverse(params.w2);
    const double denom = frobenius_norm(params.w1);
    if (denom == 0.0)
        throw NumericError("pseudoinverse_residual: W1 is zero");
    return frobenius_norm(subtract(params.w1, pinv)) / denom;
}

std::string DiagnosticsReport::to_key_values() const {
    std::ostringstream out;
    out.precision(17);
    out << "offdiag_ratio=" << offdiag_ratio << '\n';
    out << "descending_ok=" << (descending_ok ? 1 : 0) << '\n';
    out << "recon_error=" << recon_error << '\n';
    out << "eckart_young_bound=" << eckart_young_bound << '\n';
    out << "eckart_young_gap=" << eckart_young_gap << '\n';
    out << "pseudoinverse_residual=" << pseudoinverse_residual << '\n';
    for (std::size_t i = 0; i < principal_angles_deg.size(); ++i)
        out << "principal_angle_deg_" << i << '=' << principal_angles_deg[i] << '\n';
    return out.str();
}

void DiagnosticsReport::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open report file for writing: " + path.string());
    out << to_key_values();
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace pcae
