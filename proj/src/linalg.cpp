#include "symfun/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "symfun/error.hpp"

namespace symfun {

Matrix::Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
    require(n <= kMaxMatrixSize, "size", "matrix dimension exceeds 128");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == rows.size(), "size", "matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) out(i, j) = rows[i][j];
    }
    return out;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
}

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.n_ == b.n_, "size", "matrix sizes differ");
    Matrix out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
        for (std::size_t k = 0; k < a.n_; ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < a.n_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.n_ == b.n_, "size", "matrix sizes differ");
    Matrix out(a.n_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
}

std::vector<double> singular_values(const Matrix& a) {
    const std::size_t n = a.size();
    // Work on columns of A: rotate pairs until all are mutually orthogonal.
    std::vector<std::vector<double>> cols(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            require(std::isfinite(a(i, j)), "invalid-input", "matrix has non-finite entries");
            cols[j][i] = a(i, j);
        }
    constexpr double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += cols[p][i] * cols[p][i];
                    beta += cols[q][i] * cols[q][i];
                    gamma += cols[p][i] * cols[q][i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                double zeta = (beta - alpha) / (2 * gamma);
                double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double c = 1 / std::sqrt(1 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double xp = cols[p][i], xq = cols[q][i];
                    cols[p][i] = c * xp - s * xq;
                    cols[q][i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double scale = 0;
        for (double v : cols[j]) scale = std::max(scale, std::abs(v));
        double acc = 0;
        if (scale > 0)
            for (double v : cols[j]) acc += (v / scale) * (v / scale);
        out[j] = scale * std::sqrt(acc);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Matrix op_direct_sum(const Matrix& a, unsigned m) {
    require(m >= 1, "domain", "direct sum needs m >= 1");
    require(a.size() * m <= kMaxMatrixSize, "size", "direct sum exceeds 128 x 128");
    const std::size_t n = a.size();
    Matrix out(n * m);
    for (unsigned b = 0; b < m; ++b)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(b * n + i, b * n + j) = a(i, j);
    return out;
}

RSeq to_rseq(const std::vector<double>& values) {
    std::vector<Rational> exact;
    exact.reserve(values.size());
    for (double v : values) exact.push_back(from_double(v));
    return RSeq(std::move(exact));
}

}  // namespace symfun
