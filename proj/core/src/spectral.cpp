#include "pcae/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcae/errors.hpp"

namespace pcae {

namespace {

constexpr int kMaxEigenSweeps = 50;
constexpr int kMaxSvdSweeps = 60;
constexpr double kRankThreshold = 1e-12;     // relative to sigma[0]
constexpr double kDegenerateGap = 1e-6;      // relative to sigma[0]

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j)
                s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Orthonormal completion for a zero column: pick the canonical basis vector
// least represented by the existing columns and Gram-Schmidt it.
std::vector<double> complete_column(const Matrix& u, std::size_t upto) {
    const std::size_t n = u.rows();
    std::size_t best_axis = 0;
    double best_residual = -1.0;
    for (std::size_t axis = 0; axis < n; ++axis) {
        double proj_sq = 0.0;
        for (std::size_t j = 0; j < upto; ++j)
            proj_sq += u(axis, j) * u(axis, j);
        const double residual = 1.0 - proj_sq;
        if (residual > best_residual) {
            best_residual = residual;
            best_axis = axis;
        }
    }
    std::vector<double> w(n, 0.0);
    w[best_axis] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < upto; ++j) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += w[i] * u(i, j);
            for (std::size_t i = 0; i < n; ++i)
                w[i] -= dot * u(i, j);
        }
    }
    double norm = 0.0;
    for (double x : w)
        norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0)
        throw NumericError("thin_svd: failed to complete orthonormal basis");
    for (double& x : w)
        x /= norm;
    return w;
}

} // namespace

SymEigen sym_eigen(const Matrix& input) {
    if (input.rows() != input.cols())
        throw DimensionError("sym_eigen: matrix is not square");
    if (input.empty())
        throw DimensionError("sym_eigen: empty matrix");
    const std::size_t d = input.rows();
    const double norm = frobenius_norm(input);

    {
        const Matrix asym = subtract(input, transpose(input));
        if (frobenius_norm(asym) > 1e-8 * std::max(norm, 1e-300))
            throw NumericError("sym_eigen: input asymmetry exceeds tolerance");
    }

    // Work on the symmetrized copy.
    Matrix a = scale(add(input, transpose(input)), 0.5);
    Matrix v = Matrix::identity(d);

    const double stop = 1e-12 * norm;
    for (int sweep = 0; sweep < kMaxEigenSweeps; ++sweep) {
        if (offdiag_norm(a) <= stop)
            break;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= stop / static_cast<double>(d))
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEigen out;
    out.values.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < d; ++i)
            out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

ThinSVD thin_svd(const Matrix& a) {
    if (a.empty())
        throw DimensionError("thin_svd: empty matrix");
    if (a.rows() < a.cols()) {
        ThinSVD t = thin_svd(transpose(a));
        std::swap(t.u, t.v);
        return t;
    }

    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    Matrix w = a; // columns get rotated into orthogonality
    Matrix v = Matrix::identity(m);

    for (int sweep = 0; sweep < kMaxSvdSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if (gamma == 0.0 || std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated)
            break;
    }

    std::vector<double> sigma(m);
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    ThinSVD out;
    out.u = Matrix(n, m);
    out.v = Matrix(m, m);
    out.sigma.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out.sigma[j] = sigma[order[j]];
        for (std::size_t i = 0; i < m; ++i)
            out.v(i, j) = v(i, order[j]);
    }

    const double sigma0 = out.sigma.empty() ? 0.0 : out.sigma[0];
    const double rank_tol = kRankThreshold * sigma0;
    for (std::size_t j = 0; j < m; ++j) {
        if (out.sigma[j] > rank_tol && out.sigma[j] > 0.0) {
            const std::size_t src = order[j];
            for (std::size_t i = 0; i < n; ++i)
                out.u(i, j) = w(i, src) / out.sigma[j];
        } else {
            out.rank_deficient = true;
            out.u.set_column(j, complete_column(out.u, j));
        }
    }

    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (out.sigma[j] - out.sigma[j + 1] < kDegenerateGap * sigma0) {
            out.degenerate = true;
            break;
        }
    }
    return out;
}

Matrix pseudoinverse(const Matrix& a) {
    if (a.empty())
        throw DimensionError("pseudoinverse: empty matrix");
    const ThinSVD svd = thin_svd(a);
    const double tol = kRankThreshold * (svd.sigma.empty() ? 0.0 : svd.sigma[0]);
    Matrix pinv(a.cols(), a.rows());
    for (std::size_t j = 0; j < svd.sigma.size(); ++j) {
        if (svd.sigma[j] <= tol || svd.sigma[j] == 0.0)
            continue;
        const double inv = 1.0 / svd.sigma[j];
        // pinv += inv * v_j * u_j^T  (note u has a.rows() rows after the
        // transpose handling in thin_svd)
        for (std::size_t r = 0; r < pinv.rows(); ++r) {
            const double vr = svd.v(r, j) * inv;
            for (std::size_t c = 0; c < pinv.cols(); ++c)
                pinv(r, c) += vr * svd.u(c, j);
        }
    }
    return pinv;
}

} // namespace pcae
