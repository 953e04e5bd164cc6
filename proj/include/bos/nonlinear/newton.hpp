#pragma once

#include <bos/linalg/bicgstab.hpp>
#include <bos/linalg/ilu0.hpp>
#include <bos/model/assemble.hpp>
#include <bos/model/state.hpp>
#include <bos/wells/schur.hpp>
#include <bos/wells/wells.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bos {

struct NewtonConfig {
    double tol_mb = 1.0e-6;
    double tol_cnv = 1.0e-2;
    double tol_wells = 1.0e-4;
    // control equations are linear in the well unknowns and solved to
    // near machine accuracy; their tolerance is fixed and tight
    double tol_well_control = 1.0e-7;
    int max_newton = 15;
    double ds_max = 0.2;        // max saturation change per iteration
    double dp_max_rel = 0.25;   // max relative pressure change
    BicgstabOptions linear;

    // variable-switching thresholds
    static constexpr double eps_switch = 1.0e-4;
    static constexpr double delta_back = 1.0e-3;
};

/// Switch the interpretation of the third variable when phases appear
/// or disappear. A small threshold plus a re-entry offset keeps the
/// switch from oscillating: applying the rule twice never switches twice.
/// Cells without an oleic phase stay on the gas-saturation meaning.
inline bool switch_variables(PrimaryVariables& pv, const OilPvt& oil)
{
    const double eps = NewtonConfig::eps_switch;
    const double back = NewtonConfig::delta_back;
    if (pv.meaning == XMeaning::Sg) {
        const double s_o = 1.0 - pv.s_w - pv.x;
        if (pv.x < -eps && s_o > 1.0e-8 && oil.is_live()) {
            pv.meaning = XMeaning::Rgo;
            pv.x = oil.saturated_rs(pv.p_o) * (1.0 - back);
            return true;
        }
        pv.x = std::clamp(pv.x, 0.0, 1.0);
    } else {
        const double rs = oil.saturated_rs(pv.p_o);
        if (pv.x > rs * (1.0 + eps)) {
            pv.meaning = XMeaning::Sg;
            pv.x = back;
            return true;
        }
        pv.x = std::clamp(pv.x, 0.0, rs * (1.0 + eps));
    }
    return false;
}

/// Appleyard chop: per-cell limits on the Newton update, plus a
/// truncation that keeps x from jumping far across the saturated /
/// undersaturated boundary in a single iteration. Returns true when the
/// subsequent switching rule changed the variable meaning.
inline bool newton_update_cell(PrimaryVariables& pv,
                               const Vec3& delta,
                               const OilPvt& oil,
                               const NewtonConfig& cfg)
{
    const double eps = NewtonConfig::eps_switch;

    const double dp_lim = cfg.dp_max_rel * std::abs(pv.p_o);
    pv.p_o += std::clamp(delta[0], -dp_lim, dp_lim);
    pv.p_o = std::max(pv.p_o, 1.0e3);

    pv.s_w += std::clamp(delta[1], -cfg.ds_max, cfg.ds_max);
    pv.s_w = std::clamp(pv.s_w, 0.0, 1.0);

    if (pv.meaning == XMeaning::Sg) {
        const double x_old = pv.x;
        double x_new = pv.x + std::clamp(delta[2], -cfg.ds_max, cfg.ds_max);
        if (x_old >= 0.0 && x_new < 0.0) {
            // land just below the phase boundary
            x_new = std::max(x_new, -2.0 * eps);
        }
        pv.x = std::min(x_new, 1.0);
    } else {
        const double rs = oil.saturated_rs(pv.p_o);
        const double scale = std::max({rs, std::abs(pv.x), 1.0e-3});
        const double dx_lim = cfg.ds_max * scale;
        double x_new = pv.x + std::clamp(delta[2], -dx_lim, dx_lim);
        if (pv.x <= rs && x_new > rs) {
            x_new = std::min(x_new, rs * (1.0 + 2.0 * eps));
        }
        pv.x = std::max(x_new, 0.0);
    }
    return switch_variables(pv, oil);
}

/// Everything the Newton loop advances: the per-cell primary variables
/// and the open wells. Static data (grid, rock, fluid system) is held by
/// reference elsewhere.
struct ReservoirSystem {
    const Grid* grid = nullptr;
    const RockProps* rock = nullptr;
    const PvtBundle* pvt = nullptr;
    const SatFunc* sat = nullptr;
    const Assembler* assembler = nullptr;

    std::vector<PrimaryVariables> pv;
    std::vector<StandardWell> wells;
};

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    int linear_iterations = 0;
    int meaning_switches = 0;
    ConvergenceMetrics metrics;
    std::vector<std::string> events; // control switches etc.
    std::string failure_reason;
};

/// Record of a cell switching its variable meaning (for reporting).
struct MeaningSwitch {
    int cell;
    XMeaning from;
    XMeaning to;
    double p_o;
};

/// One implicit Euler step solved by Newton's method with the chop and
/// the switching logic, wells coupled through the Schur complement. On
/// failure the incoming state is restored untouched.
inline NewtonReport solve_timestep(ReservoirSystem& sys,
                                   double dt,
                                   const NewtonConfig& cfg,
                                   std::vector<MeaningSwitch>* switch_log = nullptr)
{
    NewtonReport rep;
    const auto saved_pv = sys.pv;
    const auto saved_wells = sys.wells;

    const auto fail = [&](const std::string& why) {
        sys.pv = saved_pv;
        sys.wells = saved_wells;
        rep.converged = false;
        rep.failure_reason = why;
        return rep;
    };

    try {
        const std::size_t n = sys.pv.size();

        // start-of-step quantities, frozen: accumulations with the
        // current variable meanings, wellbore storage and pressure drops
        std::vector<CellState<double>> states0(n);
        for (std::size_t i = 0; i < n; ++i) {
            states0[i] = update_secondary<double>(sys.pv[i], *sys.pvt, *sys.sat, *sys.rock);
        }
        const std::vector<Vec3> acc0 = accumulations(states0);
        for (auto& w : sys.wells) {
            compute_connection_pressure_drops(w, *sys.pvt);
            w.storage0 = w.wellbore_storage();
        }

        for (int it = 0; it <= cfg.max_newton; ++it) {
            std::vector<CellState<Eval3>> ad_states(n);
            std::vector<CellState<double>> states(n);
            bool extrapolated = false;
            for (std::size_t i = 0; i < n; ++i) {
                ad_states[i] = update_secondary<Eval3>(sys.pv[i], *sys.pvt, *sys.sat, *sys.rock,
                                                       0, &extrapolated);
                states[i] = to_values(ad_states[i]);
            }

            AssembledSystem asys = sys.assembler->assemble(ad_states, states, acc0,
                                                           sys.rock->poro_ref, dt);

            std::vector<WellBlocks> blocks;
            blocks.reserve(sys.wells.size());
            bool wells_ok = true;
            for (auto& w : sys.wells) {
                WellAssembly wa = assemble_well(w, sys.pv, *sys.pvt, *sys.sat, *sys.rock, dt);
                for (std::size_t k = 0; k < wa.blocks.cells.size(); ++k) {
                    const int cell = wa.blocks.cells[k];
                    for (int c = 0; c < 3; ++c) {
                        asys.residual[cell][c] += wa.residual_add[k][c];
                    }
                    const int slot = sys.assembler->pattern().find(cell, cell);
                    asys.jacobian.block(slot) += wa.diag_add[k];
                }
                const auto wc = well_convergence(w, wa.blocks.residual);
                if (wc.component_error >= cfg.tol_wells || wc.control_error >= cfg.tol_well_control) {
                    wells_ok = false;
                }
                blocks.push_back(std::move(wa.blocks));
            }

            rep.metrics = convergence_metrics(asys.residual, asys.pore_volume, dt);
            rep.iterations = it;

            if (rep.metrics.converged(cfg.tol_mb, cfg.tol_cnv) && wells_ok) {
                // verification pass: a converged state must also respect
                // the control limits; a switch restarts the iteration
                bool switched = false;
                for (auto& w : sys.wells) {
                    if (auto ev = switch_control(w)) {
                        rep.events.push_back(w.name + " " + *ev);
                        switched = true;
                    }
                }
                if (!switched) {
                    rep.converged = true;
                    return rep;
                }
                continue;
            }
            if (it == cfg.max_newton) {
                break;
            }

            SchurWellSystem schur(std::move(blocks));
            BlockVector rhs = asys.residual;
            schur.reduce_rhs(rhs);

            const Ilu0 precond(asys.jacobian);
            BlockVector x(n);
            const auto lin = bicgstab(
                [&](const BlockVector& in, BlockVector& out) { schur.apply(asys.jacobian, in, out); },
                rhs,
                [&](const BlockVector& in, BlockVector& out) { precond.apply(in, out); },
                x, cfg.linear);
            rep.linear_iterations += lin.iterations;
            if (!lin.converged) {
                return fail("linear solver failed (relative residual "
                            + std::to_string(lin.relative_residual) + ")");
            }

            // well updates first (x_w depends on x_r), then cells
            for (std::size_t wi = 0; wi < sys.wells.size(); ++wi) {
                const auto x_w = SchurWellSystem::recover(schur.wells()[wi], x);
                apply_well_update(sys.wells[wi], {-x_w[0], -x_w[1], -x_w[2], -x_w[3]});
            }
            for (std::size_t i = 0; i < n; ++i) {
                const XMeaning before = sys.pv[i].meaning;
                const Vec3 delta = {-x[i][0], -x[i][1], -x[i][2]};
                if (newton_update_cell(sys.pv[i], delta, sys.pvt->oil, cfg)) {
                    ++rep.meaning_switches;
                    if (switch_log) {
                        switch_log->push_back({static_cast<int>(i), before,
                                               sys.pv[i].meaning, sys.pv[i].p_o});
                    }
                }
            }
            for (auto& w : sys.wells) {
                if (auto ev = switch_control(w)) {
                    rep.events.push_back(w.name + " " + *ev);
                }
            }
        }
        return fail("no convergence within " + std::to_string(cfg.max_newton)
                    + " Newton iterations");
    } catch (const Error& e) {
        return fail(e.what());
    }
}

} // namespace bos
