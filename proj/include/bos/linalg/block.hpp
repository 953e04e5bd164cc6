#pragma once

#include <bos/common/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace bos {

/// Dense 3x3 block, row-major.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int r, int c) { return a[3 * r + c]; }
    double operator()(int r, int c) const { return a[3 * r + c]; }

    static Mat3 identity()
    {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    Mat3& operator+=(const Mat3& o)
    {
        for (int i = 0; i < 9; ++i) {
            a[i] += o.a[i];
        }
        return *this;
    }

    Mat3& operator-=(const Mat3& o)
    {
        for (int i = 0; i < 9; ++i) {
            a[i] -= o.a[i];
        }
        return *this;
    }

    friend Mat3 operator*(const Mat3& x, const Mat3& y)
    {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                const double v = x(i, k);
                for (int j = 0; j < 3; ++j) {
                    r(i, j) += v * y(k, j);
                }
            }
        }
        return r;
    }
};

using Vec3 = std::array<double, 3>;

inline Vec3 operator*(const Mat3& m, const Vec3& v)
{
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    }
    return r;
}

/// Closed-form inverse; throws FactorizationError when the determinant
/// vanishes (row index supplied by the caller).
inline Mat3 inverse(const Mat3& m, int row_for_error)
{
    const double a = m(0, 0), b = m(0, 1), c = m(0, 2);
    const double d = m(1, 0), e = m(1, 1), f = m(1, 2);
    const double g = m(2, 0), h = m(2, 1), i = m(2, 2);
    const double A = e * i - f * h;
    const double B = -(d * i - f * g);
    const double C = d * h - e * g;
    const double det = a * A + b * B + c * C;
    if (det == 0.0 || !std::isfinite(det)) {
        throw FactorizationError(row_for_error, "singular 3x3 pivot block");
    }
    Mat3 r;
    r(0, 0) = A / det;
    r(0, 1) = -(b * i - c * h) / det;
    r(0, 2) = (b * f - c * e) / det;
    r(1, 0) = B / det;
    r(1, 1) = (a * i - c * g) / det;
    r(1, 2) = -(a * f - c * d) / det;
    r(2, 0) = C / det;
    r(2, 1) = -(a * h - b * g) / det;
    r(2, 2) = (a * e - b * d) / det;
    return r;
}

/// Vector of per-cell 3-vectors.
class BlockVector {
public:
    BlockVector() = default;
    explicit BlockVector(std::size_t n) : v_(n, Vec3{}) {}

    std::size_t size() const { return v_.size(); }
    Vec3& operator[](std::size_t i) { return v_[i]; }
    const Vec3& operator[](std::size_t i) const { return v_[i]; }

    void set_zero()
    {
        for (auto& b : v_) {
            b = Vec3{};
        }
    }

    double two_norm() const
    {
        double s = 0;
        for (const auto& b : v_) {
            s += b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
        }
        return std::sqrt(s);
    }

    friend double dot(const BlockVector& x, const BlockVector& y)
    {
        double s = 0;
        for (std::size_t i = 0; i < x.v_.size(); ++i) {
            s += x.v_[i][0] * y.v_[i][0] + x.v_[i][1] * y.v_[i][1] + x.v_[i][2] * y.v_[i][2];
        }
        return s;
    }

    /// this += a*x
    void axpy(double a, const BlockVector& x)
    {
        for (std::size_t i = 0; i < v_.size(); ++i) {
            for (int k = 0; k < 3; ++k) {
                v_[i][k] += a * x.v_[i][k];
            }
        }
    }

private:
    std::vector<Vec3> v_;
};

/// Block compressed row storage with dense 3x3 blocks. The sparsity
/// pattern is fixed at construction (sorted column indices, diagonal
/// block present in every row); assembly only updates block values.
class BlockCsrMatrix {
public:
    BlockCsrMatrix() = default;

    /// Build from an adjacency list; the diagonal is added implicitly.
    static BlockCsrMatrix from_adjacency(std::size_t n_rows,
                                         const std::vector<std::pair<int, int>>& edges)
    {
        std::vector<std::vector<int>> cols(n_rows);
        for (std::size_t i = 0; i < n_rows; ++i) {
            cols[i].push_back(static_cast<int>(i));
        }
        for (const auto& [i, j] : edges) {
            cols[i].push_back(j);
            cols[j].push_back(i);
        }
        BlockCsrMatrix m;
        m.row_begin_.resize(n_rows + 1, 0);
        for (std::size_t i = 0; i < n_rows; ++i) {
            auto& c = cols[i];
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            m.row_begin_[i + 1] = m.row_begin_[i] + static_cast<int>(c.size());
            m.cols_.insert(m.cols_.end(), c.begin(), c.end());
        }
        m.blocks_.resize(m.cols_.size());
        return m;
    }

    std::size_t rows() const { return row_begin_.empty() ? 0 : row_begin_.size() - 1; }
    std::size_t block_count() const { return blocks_.size(); }

    int row_begin(std::size_t r) const { return row_begin_[r]; }
    int row_end(std::size_t r) const { return row_begin_[r + 1]; }
    int col(int slot) const { return cols_[slot]; }
    Mat3& block(int slot) { return blocks_[slot]; }
    const Mat3& block(int slot) const { return blocks_[slot]; }

    /// Slot of block (r, c); -1 when outside the pattern.
    int find(int r, int c) const
    {
        const auto lo = cols_.begin() + row_begin_[r];
        const auto hi = cols_.begin() + row_begin_[r + 1];
        const auto it = std::lower_bound(lo, hi, c);
        if (it == hi || *it != c) {
            return -1;
        }
        return static_cast<int>(std::distance(cols_.begin(), it));
    }

    void set_zero()
    {
        for (auto& b : blocks_) {
            b = Mat3{};
        }
    }

    /// y = A x
    void mv(const BlockVector& x, BlockVector& y) const
    {
        if (x.size() != rows() || y.size() != rows()) {
            throw ConfigError("spmv: dimension mismatch");
        }
        for (std::size_t r = 0; r < rows(); ++r) {
            Vec3 acc{};
            for (int s = row_begin_[r]; s < row_begin_[r + 1]; ++s) {
                const Vec3 t = blocks_[s] * x[cols_[s]];
                acc[0] += t[0];
                acc[1] += t[1];
                acc[2] += t[2];
            }
            y[r] = acc;
        }
    }

private:
    std::vector<int> row_begin_;
    std::vector<int> cols_;
    std::vector<Mat3> blocks_;
};

} // namespace bos
