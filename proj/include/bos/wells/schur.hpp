#pragma once

#include <bos/linalg/block.hpp>
#include <bos/wells/wells.hpp>

#include <array>
#include <vector>

namespace bos {

/// Schur-complement coupling of the well equations into the reservoir
/// system, applied as an operator wrapper:
///   (A - sum_w C_w D_w^{-1} B_w) x_r = R_r - sum_w C_w D_w^{-1} R_w
///   x_w = D_w^{-1} (R_w - B_w x_r)
/// The preconditioner keeps working on A alone, so no fill is created
/// between cells that only a well connects.
class SchurWellSystem {
public:
    explicit SchurWellSystem(std::vector<WellBlocks> wells)
        : wells_(std::move(wells))
    {}

    const std::vector<WellBlocks>& wells() const { return wells_; }

    /// y = (A - sum C D^{-1} B) x
    void apply(const BlockCsrMatrix& a, const BlockVector& x, BlockVector& y) const
    {
        a.mv(x, y);
        for (const auto& w : wells_) {
            const auto s = solve_d(w, bx(w, x));
            for (std::size_t k = 0; k < w.cells.size(); ++k) {
                const int cell = w.cells[k];
                for (int r = 0; r < 3; ++r) {
                    double acc = 0.0;
                    for (int c = 0; c < 4; ++c) {
                        acc += w.c_blocks[k][4 * r + c] * s[c];
                    }
                    y[cell][r] -= acc;
                }
            }
        }
    }

    /// r_reduced = r - sum_w C_w D_w^{-1} R_w
    void reduce_rhs(BlockVector& r) const
    {
        for (const auto& w : wells_) {
            const std::vector<double> rw(w.residual.begin(), w.residual.end());
            const auto s = w.d_lu->solve(rw);
            for (std::size_t k = 0; k < w.cells.size(); ++k) {
                const int cell = w.cells[k];
                for (int row = 0; row < 3; ++row) {
                    double acc = 0.0;
                    for (int c = 0; c < 4; ++c) {
                        acc += w.c_blocks[k][4 * row + c] * s[c];
                    }
                    r[cell][row] -= acc;
                }
            }
        }
    }

    /// x_w = D^{-1}(R_w - B x_r) for one well.
    static std::array<double, 4> recover(const WellBlocks& w, const BlockVector& x_r)
    {
        auto t = bx(w, x_r);
        std::vector<double> rhs(4);
        for (int e = 0; e < 4; ++e) {
            rhs[e] = w.residual[e] - t[e];
        }
        const auto s = w.d_lu->solve(rhs);
        return {s[0], s[1], s[2], s[3]};
    }

private:
    /// t = B x (4-vector) for one well.
    static std::vector<double> bx(const WellBlocks& w, const BlockVector& x)
    {
        std::vector<double> t(4, 0.0);
        for (std::size_t k = 0; k < w.cells.size(); ++k) {
            const int cell = w.cells[k];
            for (int e = 0; e < 4; ++e) {
                for (int v = 0; v < 3; ++v) {
                    t[e] += w.b_blocks[k][3 * e + v] * x[cell][v];
                }
            }
        }
        return t;
    }

    static std::vector<double> solve_d(const WellBlocks& w, const std::vector<double>& rhs)
    {
        return w.d_lu->solve(rhs);
    }

    std::vector<WellBlocks> wells_;
};

} // namespace bos
