#pragma once

#include <bos/linalg/block.hpp>

#include <vector>

namespace bos {

/// Incomplete block LU factorization with zero fill-in. The factors
/// share the sparsity pattern of the input matrix; elimination uses
/// dense 3x3 pivot inverses.
class Ilu0 {
public:
    explicit Ilu0(const BlockCsrMatrix& a)
        : lu_(a)
    {
        const std::size_t n = lu_.rows();
        inv_diag_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (int ks = lu_.row_begin(i); ks < lu_.row_end(i); ++ks) {
                const int k = lu_.col(ks);
                if (k >= static_cast<int>(i)) {
                    break;
                }
                // L_ik = A_ik * inv(U_kk)
                lu_.block(ks) = lu_.block(ks) * inv_diag_[k];
                const Mat3& lik = lu_.block(ks);
                // eliminate within the row's own pattern
                for (int js = ks + 1; js < lu_.row_end(i); ++js) {
                    const int j = lu_.col(js);
                    const int kj = lu_.find(k, j);
                    if (kj >= 0) {
                        Mat3 upd = lik * lu_.block(kj);
                        lu_.block(js) -= upd;
                    }
                }
            }
            const int dslot = lu_.find(static_cast<int>(i), static_cast<int>(i));
            inv_diag_[i] = inverse(lu_.block(dslot), static_cast<int>(i));
        }
    }

    /// z = (LU)^{-1} r via forward and backward block substitution.
    void apply(const BlockVector& r, BlockVector& z) const
    {
        const std::size_t n = lu_.rows();
        // forward: L y = r (unit block diagonal)
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 acc = r[i];
            for (int s = lu_.row_begin(i); s < lu_.row_end(i); ++s) {
                const int k = lu_.col(s);
                if (k >= static_cast<int>(i)) {
                    break;
                }
                const Vec3 t = lu_.block(s) * z[k];
                acc[0] -= t[0];
                acc[1] -= t[1];
                acc[2] -= t[2];
            }
            z[i] = acc;
        }
        // backward: U z = y
        for (std::size_t ii = n; ii-- > 0;) {
            Vec3 acc = z[ii];
            for (int s = lu_.row_end(ii) - 1; s >= lu_.row_begin(ii); --s) {
                const int j = lu_.col(s);
                if (j <= static_cast<int>(ii)) {
                    break;
                }
                const Vec3 t = lu_.block(s) * z[j];
                acc[0] -= t[0];
                acc[1] -= t[1];
                acc[2] -= t[2];
            }
            z[ii] = inv_diag_[ii] * acc;
        }
    }

    std::size_t block_count() const { return lu_.block_count(); }

private:
    BlockCsrMatrix lu_;
    std::vector<Mat3> inv_diag_;
};

} // namespace bos
