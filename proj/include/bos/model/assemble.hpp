#pragma once

#include <bos/common/units.hpp>
#include <bos/linalg/block.hpp>
#include <bos/model/state.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace bos {

namespace detail {

template <class Out>
struct Lift {
    static Out from(double v) { return Out::constant(v); }
    static const Out& from(const Out& v) { return v; }
};

template <>
struct Lift<double> {
    static double from(double v) { return v; }
};

} // namespace detail

/// Per-component surface-volume fluxes across one connection, oriented
/// from cell i to cell j.
template <class Value>
struct ConnectionFlux {
    Value water{}, oil{}, gas{};
};

/// Upwind TPFA flux. The phase potential difference uses the arithmetic
/// average density; a non-negative difference selects cell i as the
/// upwind cell. The transmissibility multiplier m_T is a modeling hook
/// and is constant 1 in this simulator.
///
/// The output type decides which operand carries derivatives: lifting
/// the passive side to a constant yields the partial derivatives of the
/// flux with respect to one cell's primary variables at a time.
template <class Out, class SI, class SJ>
ConnectionFlux<Out> connection_flux(const Connection& conn,
                                    const CellState<SI>& si,
                                    const CellState<SJ>& sj,
                                    double m_T = 1.0)
{
    using LI = detail::Lift<Out>;
    const double g_dz = gravity * conn.depth_diff;
    const double T = conn.trans;

    ConnectionFlux<Out> out;

    // water
    {
        const Out dphi = LI::from(si.p_w) - LI::from(sj.p_w)
                         - (LI::from(si.rho_w) + LI::from(sj.rho_w)) * (0.5 * g_dz);
        const bool up_i = value_of(dphi) >= 0.0;
        const Out factor = up_i ? LI::from(si.b_w) * LI::from(si.mob_w)
                                : LI::from(sj.b_w) * LI::from(sj.mob_w);
        out.water = factor * dphi * (T * m_T);
    }
    // oil (also feeds the dissolved-gas part of the gas flux)
    Out oil_dphi, oil_factor;
    bool oil_up_i = true;
    {
        oil_dphi = LI::from(si.p_o) - LI::from(sj.p_o)
                   - (LI::from(si.rho_o) + LI::from(sj.rho_o)) * (0.5 * g_dz);
        oil_up_i = value_of(oil_dphi) >= 0.0;
        oil_factor = oil_up_i ? LI::from(si.b_o) * LI::from(si.mob_o)
                              : LI::from(sj.b_o) * LI::from(sj.mob_o);
        out.oil = oil_factor * oil_dphi * (T * m_T);
    }
    // gas: free gas plus gas dissolved in the flowing oil
    {
        const Out dphi = LI::from(si.p_g) - LI::from(sj.p_g)
                         - (LI::from(si.rho_g) + LI::from(sj.rho_g)) * (0.5 * g_dz);
        const bool up_i = value_of(dphi) >= 0.0;
        const Out factor = up_i ? LI::from(si.b_g) * LI::from(si.mob_g)
                                : LI::from(sj.b_g) * LI::from(sj.mob_g);
        const Out r_go_up = oil_up_i ? LI::from(si.r_go) : LI::from(sj.r_go);
        out.gas = factor * dphi * (T * m_T) + r_go_up * oil_factor * oil_dphi * (T * m_T);
    }
    return out;
}

/// Assembled reservoir system: block Jacobian, residual, and the scale
/// factors used by the convergence metrics. Well contributions are
/// added afterwards by the well model.
struct AssembledSystem {
    BlockCsrMatrix jacobian;
    BlockVector residual;
    std::vector<double> pore_volume; // phi_ref_i * V_i per cell
};

/// Assembles residuals and the block-sparse Jacobian by localized
/// linearization: each cell's AD state carries derivatives with respect
/// to its own three primary variables; every connection is linearized
/// twice, once per focus cell.
class Assembler {
public:
    Assembler(const Grid& grid, const RockProps& rock)
        : grid_(&grid)
        , rock_(&rock)
    {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(grid.connections.size());
        for (const auto& c : grid.connections) {
            edges.emplace_back(c.cell_i, c.cell_j);
        }
        pattern_ = BlockCsrMatrix::from_adjacency(grid.num_active(), edges);
        diag_slot_.resize(grid.num_active());
        for (std::size_t i = 0; i < grid.num_active(); ++i) {
            diag_slot_[i] = pattern_.find(static_cast<int>(i), static_cast<int>(i));
        }
        conn_slots_.reserve(grid.connections.size());
        for (const auto& c : grid.connections) {
            conn_slots_.push_back({pattern_.find(c.cell_i, c.cell_j),
                                   pattern_.find(c.cell_j, c.cell_i)});
        }
    }

    const BlockCsrMatrix& pattern() const { return pattern_; }

    /// Residual and Jacobian of the reservoir equations (no wells):
    ///   R_{a,i} = (phi_ref_i V_i / dt)(A_{a,i} - A0_{a,i}) + sum_j u_{a,ij}.
    AssembledSystem assemble(const std::vector<CellState<Eval3>>& ad_states,
                             const std::vector<CellState<double>>& states,
                             const std::vector<Vec3>& acc0,
                             const std::vector<double>& poro_ref,
                             double dt) const
    {
        const std::size_t n = grid_->num_active();
        AssembledSystem sys;
        sys.jacobian = pattern_;
        sys.jacobian.set_zero();
        sys.residual = BlockVector(n);
        sys.pore_volume.resize(n);

        for (std::size_t i = 0; i < n; ++i) {
            const double pv_over_dt = poro_ref[i] * grid_->volume[i] / dt;
            sys.pore_volume[i] = poro_ref[i] * grid_->volume[i];
            const auto& st = ad_states[i];
            const Eval3 acc[3] = {st.acc_w, st.acc_o, st.acc_g};
            Mat3& diag = sys.jacobian.block(diag_slot_[i]);
            for (int c = 0; c < 3; ++c) {
                sys.residual[i][c] += pv_over_dt * (acc[c].value() - acc0[i][c]);
                for (int v = 0; v < 3; ++v) {
                    diag(c, v) += pv_over_dt * acc[c].derivative(v);
                }
            }
        }

        for (std::size_t ci = 0; ci < grid_->connections.size(); ++ci) {
            const Connection& conn = grid_->connections[ci];
            const int i = conn.cell_i;
            const int j = conn.cell_j;
            // focus on i, then on j; the values agree, the derivatives differ
            const auto flux_i = connection_flux<Eval3>(conn, ad_states[i], states[j]);
            const auto flux_j = connection_flux<Eval3>(conn, states[i], ad_states[j]);

            const Eval3 fi[3] = {flux_i.water, flux_i.oil, flux_i.gas};
            const Eval3 fj[3] = {flux_j.water, flux_j.oil, flux_j.gas};

            Mat3& jii = sys.jacobian.block(diag_slot_[i]);
            Mat3& jjj = sys.jacobian.block(diag_slot_[j]);
            Mat3& jij = sys.jacobian.block(conn_slots_[ci][0]);
            Mat3& jji = sys.jacobian.block(conn_slots_[ci][1]);

            for (int c = 0; c < 3; ++c) {
                sys.residual[i][c] += fi[c].value();
                sys.residual[j][c] -= fi[c].value();
                for (int v = 0; v < 3; ++v) {
                    jii(c, v) += fi[c].derivative(v);
                    jji(c, v) -= fi[c].derivative(v);
                    jij(c, v) += fj[c].derivative(v);
                    jjj(c, v) -= fj[c].derivative(v);
                }
            }
        }
        return sys;
    }

private:
    const Grid* grid_;
    const RockProps* rock_;
    BlockCsrMatrix pattern_;
    std::vector<int> diag_slot_;
    std::vector<std::array<int, 2>> conn_slots_;
};

/// Start-of-step accumulations (surface volume per pore volume).
inline std::vector<Vec3> accumulations(const std::vector<CellState<double>>& states)
{
    std::vector<Vec3> acc(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        acc[i] = {states[i].acc_w, states[i].acc_o, states[i].acc_g};
    }
    return acc;
}

/// Convergence metrics: MB is the field-average scaled residual (a
/// reservoir-average saturation error), CNV the maximum local one.
struct ConvergenceMetrics {
    std::array<double, 3> mb{};  // per component
    std::array<double, 3> cnv{};

    bool converged(double tol_mb, double tol_cnv) const
    {
        for (int c = 0; c < 3; ++c) {
            if (!(mb[c] < tol_mb) || !(cnv[c] < tol_cnv)) {
                return false;
            }
        }
        return true;
    }
};

inline ConvergenceMetrics convergence_metrics(const BlockVector& residual,
                                              const std::vector<double>& pore_volume,
                                              double dt)
{
    ConvergenceMetrics m;
    std::array<double, 3> sum_r{};
    double sum_pv = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        sum_pv += pore_volume[i];
        for (int c = 0; c < 3; ++c) {
            sum_r[c] += residual[i][c];
            const double local = std::abs(residual[i][c]) * dt / pore_volume[i];
            m.cnv[c] = std::max(m.cnv[c], local);
        }
    }
    for (int c = 0; c < 3; ++c) {
        m.mb[c] = std::abs(sum_r[c]) * dt / sum_pv;
    }
    return m;
}

} // namespace bos
