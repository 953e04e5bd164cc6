#pragma once

#include <bos/common/log.hpp>
#include <bos/common/units.hpp>
#include <bos/deck/simcase.hpp>
#include <bos/equil/equil.hpp>
#include <bos/model/assemble.hpp>
#include <bos/nonlinear/newton.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace bos {

/// Adaptive time stepping knobs. The suggestion grows only after a full
/// suggested step succeeded; report boundaries clip without penalty.
struct TimestepControl {
    double dt_init = 1.0 * unit::day;
    double dt_min = 1.0e-4 * unit::day;
    double dt_max = 100.0 * unit::day;
    double growth = 2.0;
    double cut = 0.5;
};

struct RunOptions {
    NewtonConfig newton;
    TimestepControl timestep;
    bool record_substeps = false;
    bool field_snapshots = false; // keep per-report-step cell fields
};

struct WellReportRow {
    std::string name;
    WellType type = WellType::producer;
    ControlMode mode = ControlMode::bhp;
    double bhp = 0.0;                 // Pa
    std::array<double, 3> rates{};    // surface m^3/s, + production / - injection
};

struct StepReport {
    double time_days = 0.0;
    double dt_days = 0.0;        // last substep length (substep rows: own length)
    int substeps = 0;
    int newton_iterations = 0;
    int linear_iterations = 0;
    std::array<double, 3> mb{};
    std::array<double, 3> cnv{};
    std::vector<WellReportRow> wells;
    double field_pressure = 0.0;  // pore-volume weighted oil pressure, Pa
    double field_oil_rate = 0.0;  // m^3/s, producers
    std::array<double, 3> fip{};  // surface volumes in place
};

struct ControlSwitchEvent {
    double time_days;
    std::string description;
};

struct MeaningSwitchEvent {
    double time_days;
    int cell;
    XMeaning from;
    XMeaning to;
    double p_o;
};

struct FieldSnapshot {
    int report_step = 0;
    double time_days = 0.0;
    std::vector<double> pressure, s_w, s_g, s_o, r_go;
};

struct SimulationResults {
    bool completed = false;
    std::string error;
    std::vector<StepReport> steps;     // one per report step
    std::vector<StepReport> substeps;  // optional, one per accepted substep
    std::vector<ControlSwitchEvent> control_switches;
    std::vector<MeaningSwitchEvent> meaning_switches;
    std::vector<FieldSnapshot> snapshots;
    std::vector<PrimaryVariables> final_state;
};

namespace sim_detail {

inline std::array<double, 3> in_place_volumes(const Grid& grid,
                                              const RockProps& rock,
                                              const std::vector<CellState<double>>& states)
{
    std::array<double, 3> fip{};
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double pv = rock.poro_ref[i] * grid.volume[i];
        fip[comp_water] += pv * states[i].acc_w;
        fip[comp_oil] += pv * states[i].acc_o;
        fip[comp_gas] += pv * states[i].acc_g;
    }
    return fip;
}

/// Initial guesses for a well's primary variables.
inline void init_well_variables(StandardWell& w,
                                const std::vector<PrimaryVariables>& pv,
                                const PvtBundle& pvt,
                                const SatFunc& sat,
                                const RockProps& rock)
{
    double p_avg = 0.0;
    for (const auto& c : w.connections) {
        p_avg += pv[c.cell].p_o;
    }
    p_avg /= static_cast<double>(w.connections.size());

    if (w.type == WellType::injector) {
        w.f_w = w.injected == InjectedPhase::water ? 1.0 : 0.0;
        w.f_g = w.injected == InjectedPhase::gas ? 1.0 : 0.0;
    } else {
        // composition guess from connection mobilities
        std::array<double, 3> q{};
        for (const auto& c : w.connections) {
            const auto st = update_secondary<double>(pv[c.cell], pvt, sat, rock);
            q[comp_water] += c.wi * st.mob_w * st.b_w;
            q[comp_oil] += c.wi * st.mob_o * st.b_o;
            q[comp_gas] += c.wi * (st.mob_g * st.b_g + st.r_go * st.mob_o * st.b_o);
        }
        const double wsum = rate_weights[0] * q[0] + rate_weights[1] * q[1]
                            + rate_weights[2] * q[2];
        if (wsum > 0) {
            w.f_w = rate_weights[0] * q[0] / wsum;
            w.f_g = rate_weights[2] * q[2] / wsum;
        }
    }

    if (w.control.mode == ControlMode::bhp) {
        w.p_bhp = w.control.bhp_value;
        w.q_t = 0.0;
    } else {
        const double nudge = 1.0e5; // 1 bar
        w.p_bhp = w.type == WellType::producer ? p_avg - nudge : p_avg + nudge;
        const auto unit_rates = StandardWell::component_rates<double>(1.0, w.f_w, w.f_g);
        const double fr = unit_rates[w.control.rate_component];
        w.q_t = std::abs(fr) > 1.0e-12 ? w.control.rate_value / fr : 0.0;
    }
}

} // namespace sim_detail

/// Run the schedule: apply well events at report boundaries, advance
/// with adaptive substeps, and collect well and field time series.
inline SimulationResults run_schedule(const SimCase& cs,
                                      const RunOptions& opts = {},
                                      RunLog* log = nullptr)
{
    SimulationResults res;
    const auto info = [&](const std::string& s) {
        if (log) {
            log->info(s);
        }
    };

    Assembler assembler(cs.grid, cs.rock);
    ReservoirSystem sys;
    sys.grid = &cs.grid;
    sys.rock = &cs.rock;
    sys.pvt = &cs.pvt;
    sys.sat = &cs.sat;
    sys.assembler = &assembler;
    sys.pv = equilibrate(cs.grid, cs.pvt, cs.sat, cs.equil);

    // dynamic well state carried across report steps by name
    std::map<std::string, std::array<double, 4>> carry;

    double time = 0.0;
    double dt_suggest = opts.timestep.dt_init;

    const auto record_report = [&](const StepReport& base, int report_idx) {
        StepReport rep = base;
        rep.time_days = time / unit::day;
        std::vector<CellState<double>> states(sys.pv.size());
        for (std::size_t i = 0; i < sys.pv.size(); ++i) {
            states[i] = update_secondary<double>(sys.pv[i], cs.pvt, cs.sat, cs.rock);
        }
        double pv_sum = 0.0, p_sum = 0.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double pvw = cs.rock.poro_ref[i] * cs.grid.volume[i];
            pv_sum += pvw;
            p_sum += pvw * states[i].p_o;
        }
        rep.field_pressure = p_sum / pv_sum;
        rep.fip = sim_detail::in_place_volumes(cs.grid, cs.rock, states);
        rep.field_oil_rate = 0.0;
        for (const auto& w : sys.wells) {
            WellReportRow row;
            row.name = w.name;
            row.type = w.type;
            row.mode = w.control.mode;
            row.bhp = w.p_bhp;
            row.rates = w.surface_rates();
            if (w.type == WellType::producer) {
                rep.field_oil_rate += std::max(row.rates[comp_oil], 0.0);
            }
            rep.wells.push_back(std::move(row));
        }
        if (opts.field_snapshots) {
            FieldSnapshot snap;
            snap.report_step = report_idx;
            snap.time_days = rep.time_days;
            for (const auto& st : states) {
                snap.pressure.push_back(st.p_o);
                snap.s_w.push_back(st.s_w);
                snap.s_g.push_back(st.s_g);
                snap.s_o.push_back(st.s_o);
                snap.r_go.push_back(st.r_go);
            }
            res.snapshots.push_back(std::move(snap));
        }
        return rep;
    };

    for (std::size_t rs = 0; rs < cs.schedule.size(); ++rs) {
        const ReportStep& step = cs.schedule[rs];

        // apply well events: rebuild the open-well set from the snapshot
        for (const auto& w : sys.wells) {
            carry[w.name] = {w.q_t, w.f_w, w.f_g, w.p_bhp};
        }
        sys.wells.clear();
        for (const auto& snap : step.wells) {
            if (!snap.open()) {
                continue;
            }
            StandardWell w;
            w.name = snap.name;
            w.type = snap.type;
            w.injected = snap.injected;
            w.ref_depth = snap.ref_depth;
            w.control = snap.control;
            for (const auto& c : snap.connections) {
                w.connections.push_back({c.cell, c.wi, c.depth, 0.0});
            }
            const auto it = carry.find(w.name);
            if (it != carry.end()) {
                w.q_t = it->second[0];
                w.f_w = it->second[1];
                w.f_g = it->second[2];
                w.p_bhp = it->second[3];
                if (w.control.mode == ControlMode::bhp) {
                    w.p_bhp = w.control.bhp_value;
                }
            } else {
                sim_detail::init_well_variables(w, sys.pv, cs.pvt, cs.sat, cs.rock);
            }
            sys.wells.push_back(std::move(w));
        }

        const double t_end = time + step.duration;
        StepReport accum;
        while (t_end - time > 1.0e-6) {
            const double dt = std::min(dt_suggest, t_end - time);
            std::vector<MeaningSwitch> switches;
            NewtonReport nrep = solve_timestep(sys, dt, opts.newton, &switches);
            if (!nrep.converged) {
                info("substep failed at day " + std::to_string(time / unit::day) + " (dt "
                     + std::to_string(dt / unit::day) + " d): " + nrep.failure_reason);
                dt_suggest = dt * opts.timestep.cut;
                if (dt_suggest < opts.timestep.dt_min) {
                    res.error = "time step underflow at day " + std::to_string(time / unit::day)
                                + ": " + nrep.failure_reason;
                    res.final_state = sys.pv;
                    return res;
                }
                continue;
            }
            const bool full_step = dt == dt_suggest;
            time = t_end - time <= dt ? t_end : time + dt;
            accum.substeps += 1;
            accum.newton_iterations += nrep.iterations;
            accum.linear_iterations += nrep.linear_iterations;
            accum.mb = nrep.metrics.mb;
            accum.cnv = nrep.metrics.cnv;
            accum.dt_days = dt / unit::day;
            for (const auto& ev : nrep.events) {
                res.control_switches.push_back({time / unit::day, ev});
                info("day " + std::to_string(time / unit::day) + ": " + ev);
            }
            for (const auto& sw : switches) {
                res.meaning_switches.push_back({time / unit::day, sw.cell, sw.from, sw.to, sw.p_o});
            }
            if (opts.record_substeps) {
                StepReport sub = record_report(accum, static_cast<int>(rs));
                sub.substeps = 1;
                sub.newton_iterations = nrep.iterations;
                sub.linear_iterations = nrep.linear_iterations;
                res.substeps.push_back(std::move(sub));
            }
            char line[160];
            std::snprintf(line, sizeof line,
                          "day %10.4f  dt %9.4f d  newton %2d  linear %4d  mb %.2e/%.2e/%.2e",
                          time / unit::day, dt / unit::day, nrep.iterations,
                          nrep.linear_iterations, nrep.metrics.mb[0], nrep.metrics.mb[1],
                          nrep.metrics.mb[2]);
            info(line);
            if (full_step) {
                dt_suggest = std::min(dt_suggest * opts.timestep.growth, opts.timestep.dt_max);
            }
        }
        time = t_end;
        res.steps.push_back(record_report(accum, static_cast<int>(rs)));
    }

    res.completed = true;
    res.final_state = sys.pv;
    return res;
}

} // namespace bos
