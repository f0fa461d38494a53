#pragma once

// Small dense real matrices and their singular values.

#include <cstddef>
#include <vector>

#include "symfun/core.hpp"

namespace symfun {

constexpr std::size_t kMaxMatrixSize = 128;

/// Square row-major matrix, n <= 128.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n);
    /// Throws Error("size") for ragged rows or n > 128.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::vector<std::vector<double>> rows() const;

    Matrix transpose() const;
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// One-sided Jacobi SVD. Nonincreasing; throws Error("invalid-input") on
/// non-finite entries.
std::vector<double> singular_values(const Matrix& a);

/// Block diagonal A (+) ... (+) A with m blocks; throws Error("size") when m n > 128.
Matrix op_direct_sum(const Matrix& a, unsigned m);

/// Exact conversion of a nonincreasing nonnegative list.
RSeq to_rseq(const std::vector<double>& values);

}  // namespace symfun
