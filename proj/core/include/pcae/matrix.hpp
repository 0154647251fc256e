#pragma once

#include <cstddef>
#include <vector>

#include "pcae/errors.hpp"

namespace pcae {

// Dense row-major matrix of doubles. Row-major is an internal constant;
// every file format declares its own layout explicitly.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double> column(std::size_t j) const;
    void set_column(std::size_t j, const std::vector<double>& v);

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

// Element-wise mean of the columns (the n-vector averaging all observations).
std::vector<double> column_mean(const Matrix& y);

// Subtract v from every column.
Matrix subtract_column(const Matrix& y, const std::vector<double>& v);

double frobenius_norm_sq(const Matrix& a);
double frobenius_norm(const Matrix& a);

double max_abs(const Matrix& a);

} // namespace pcae
