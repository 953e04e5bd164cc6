#pragma once

#include <bos/common/error.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace bos {

/// Small dense row-major matrix with an LU solve (partial pivoting).
/// Used for the per-well 4x4 equation blocks; deliberately minimal.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0)
    {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// LU factors of a square dense matrix, for repeated solves.
class DenseLu {
public:
    /// Factorize; throws FactorizationError on a (numerically) singular pivot.
    explicit DenseLu(DenseMatrix a)
        : lu_(std::move(a)), perm_(lu_.rows())
    {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) {
            throw ConfigError("DenseLu: matrix not square");
        }
        for (std::size_t i = 0; i < n; ++i) {
            perm_[i] = i;
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(lu_(i, k)) > best) {
                    best = std::abs(lu_(i, k));
                    piv = i;
                }
            }
            if (!(best > 0.0) || !std::isfinite(best)) {
                throw FactorizationError(static_cast<int>(k), "singular pivot in dense LU");
            }
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(lu_(k, j), lu_(piv, j));
                }
                std::swap(perm_[k], perm_[piv]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                for (std::size_t j = k + 1; j < n; ++j) {
                    lu_(i, j) -= lu_(i, k) * lu_(k, j);
                }
            }
        }
    }

    std::vector<double> solve(const std::vector<double>& b) const
    {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = b[perm_[i]];
        }
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                x[i] -= lu_(i, j) * x[j];
            }
        }
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) {
                x[ii] -= lu_(ii, j) * x[j];
            }
            x[ii] /= lu_(ii, ii);
        }
        return x;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

} // namespace bos
