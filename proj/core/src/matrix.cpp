#include "pcae/matrix.hpp"

#include <cmath>
#include <string>

namespace pcae {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_column(std::size_t j, const std::vector<double>& v) {
    if (v.size() != rows_)
        throw DimensionError("set_column: vector length " + std::to_string(v.size()) +
                             " != rows " + std::to_string(rows_));
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

bool Matrix::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x))
            return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    Matrix c(a.rows(), b.cols());
    // ikj order keeps the inner loop contiguous for row-major storage.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.data() + i * a.cols();
        double* crow = c.data() + i * c.cols();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0)
                continue;
            const double* brow = b.data() + k * b.cols();
            for (std::size_t j = 0; j < b.cols(); ++j)
                crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = a(i, j);
    return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("add: shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i)
        c.data()[i] += b.data()[i];
    return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("subtract: shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i)
        c.data()[i] -= b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i)
        c.data()[i] *= s;
    return c;
}

std::vector<double> column_mean(const Matrix& y) {
    if (y.cols() == 0 || y.rows() == 0)
        throw DimensionError("column_mean: empty matrix");
    std::vector<double> mean(y.rows(), 0.0);
    for (std::size_t i = 0; i < y.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < y.cols(); ++j)
            s += y(i, j);
        mean[i] = s / static_cast<double>(y.cols());
    }
    return mean;
}

Matrix subtract_column(const Matrix& y, const std::vector<double>& v) {
    if (v.size() != y.rows())
        throw DimensionError("subtract_column: vector length mismatch");
    Matrix c = y;
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            c(i, j) -= v[i];
    return c;
}

double frobenius_norm_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a.data()[i] * a.data()[i];
    return s;
}

double frobenius_norm(const Matrix& a) {
    return std::sqrt(frobenius_norm_sq(a));
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a.data()[i]));
    return m;
}

} // namespace pcae
