#pragma once

#include <bos/autodiff/evaluation.hpp>
#include <bos/common/dense.hpp>
#include <bos/common/error.hpp>
#include <bos/common/units.hpp>
#include <bos/grid/grid.hpp>
#include <bos/linalg/block.hpp>
#include <bos/model/state.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bos {

enum class WellType { producer, injector };
enum class InjectedPhase { water, gas };
enum class ControlMode { bhp, rate };
enum class WellStatus { open, shut };

/// Component index order used throughout the well model: water, oil, gas.
enum Component : int { comp_water = 0, comp_oil = 1, comp_gas = 2 };

inline const char* component_name(int c)
{
    return c == comp_water ? "water" : c == comp_oil ? "oil" : "gas";
}

/// Weights of the total-rate primary variable Q_t = sum_a g_a Q_a. The
/// gas weight is small to keep gas fractions away from unity.
inline constexpr std::array<double, 3> rate_weights = {1.0, 1.0, 0.01};

/// Active control of a well. Rate targets are signed internally:
/// positive for production, negative for injection. In rate mode the
/// bhp value acts as a limit; in bhp mode the rate value does.
struct WellControl {
    ControlMode mode = ControlMode::bhp;
    int rate_component = comp_oil; // controlled component in rate mode
    double rate_value = 0.0;       // m^3/s surface, signed
    double bhp_value = 0.0;        // Pa
};

struct WellConnection {
    int cell = -1;          // active cell index
    double wi = 0.0;        // connection transmissibility factor, m^3
    double depth = 0.0;     // m
    double pressure_drop = 0.0; // h_wj, Pa; explicit, fixed during a step
};

/// Per-well coupling blocks of the linearized system:  the well rows
/// [B | D] and the reservoir-side coupling C, per connected cell.
struct WellBlocks {
    std::vector<int> cells;                       // unique connected cells
    std::vector<std::array<double, 12>> c_blocks; // 3x4 per cell, row-major
    std::vector<std::array<double, 12>> b_blocks; // 4x3 per cell
    DenseMatrix d{4, 4};
    std::array<double, 4> residual{};
    std::shared_ptr<DenseLu> d_lu;

    static double& c_at(std::array<double, 12>& m, int r, int c) { return m[4 * r + c]; }
    static double& b_at(std::array<double, 12>& m, int r, int c) { return m[3 * r + c]; }
};

/// Standard well: four primary variables (weighted total surface rate,
/// weighted water and gas fractions, bottom-hole pressure), one set of
/// connections, and one active control.
class StandardWell {
public:
    std::string name;
    WellType type = WellType::producer;
    InjectedPhase injected = InjectedPhase::water;
    double ref_depth = 0.0;
    std::vector<WellConnection> connections;
    WellControl control;

    // primary variables
    double q_t = 0.0;   // weighted total surface rate, m^3/s
    double f_w = 0.0;
    double f_g = 0.0;
    double p_bhp = 0.0; // Pa

    // frozen at the start of each time step
    std::array<double, 3> storage0{};

    /// Wellbore storage volume; small, for stability of the well solution.
    static constexpr double storage_volume = 0.1; // m^3

    /// Surface rate of each component from the primary variables.
    template <class Value>
    static std::array<Value, 3> component_rates(const Value& qt, const Value& fw, const Value& fg)
    {
        return {fw * qt * (1.0 / rate_weights[comp_water]),
                (1.0 - fw - fg) * qt * (1.0 / rate_weights[comp_oil]),
                fg * qt * (1.0 / rate_weights[comp_gas])};
    }

    std::array<double, 3> surface_rates() const
    {
        return component_rates<double>(q_t, f_w, f_g);
    }

    /// Unweighted wellbore composition: surface volume fraction of each
    /// component held in the wellbore mixture.
    template <class Value>
    static std::array<Value, 3> composition(const Value& fw, const Value& fg)
    {
        const Value aw = fw * (1.0 / rate_weights[comp_water]);
        const Value ag = fg * (1.0 / rate_weights[comp_gas]);
        const Value ao = (1.0 - fw - fg) * (1.0 / rate_weights[comp_oil]);
        const Value den = aw + ao + ag;
        return {aw / den, ao / den, ag / den};
    }

    std::array<double, 3> wellbore_storage() const
    {
        const auto frac = composition<double>(f_w, f_g);
        return {storage_volume * frac[0], storage_volume * frac[1], storage_volume * frac[2]};
    }
};

/// Volumetric connection inflow at reservoir conditions and the derived
/// surface-volume rates; positive for flow into the wellbore.
///
/// A producing connection (positive drawdown) carries the cell fluid
/// with the cell's phase mobilities. An injecting connection carries the
/// uniform wellbore mixture with the cell's total mobility.
template <class Value>
struct ConnectionRates {
    std::array<Value, 3> reservoir{}; // q^r per phase (producing) or mixture split
    std::array<Value, 3> surface{};   // q-hat per component
};

template <class Value>
ConnectionRates<Value> connection_inflow(const Value& drawdown,
                                         double wi,
                                         const CellState<Value>& cell,
                                         const std::array<Value, 3>& wellbore_frac)
{
    ConnectionRates<Value> out;
    if (value_of(drawdown) >= 0.0) {
        // producing: reservoir fluid enters the wellbore
        out.reservoir[comp_water] = drawdown * cell.mob_w * wi;
        out.reservoir[comp_oil] = drawdown * cell.mob_o * wi;
        out.reservoir[comp_gas] = drawdown * cell.mob_g * wi;
        out.surface[comp_water] = cell.b_w * out.reservoir[comp_water];
        out.surface[comp_oil] = cell.b_o * out.reservoir[comp_oil];
        out.surface[comp_gas] = cell.b_g * out.reservoir[comp_gas]
                                + cell.r_go * cell.b_o * out.reservoir[comp_oil];
    } else {
        // injecting: the wellbore mixture is pushed into the formation
        const Value total_mob = cell.mob_w + cell.mob_o + cell.mob_g;
        const Value q_res_total = drawdown * total_mob * wi;
        // reservoir volume of one surface unit of mixture, at cell pressure
        const Value vres = wellbore_frac[comp_water] / cell.b_w
                           + wellbore_frac[comp_oil] / cell.b_o
                           + wellbore_frac[comp_gas] / cell.b_g;
        for (int c = 0; c < 3; ++c) {
            out.surface[c] = q_res_total * wellbore_frac[c] / vres;
            out.reservoir[c] = q_res_total * wellbore_frac[c];
        }
    }
    return out;
}

/// Explicit wellbore pressure drops from datum to every connection,
/// using the start-of-step wellbore composition. Marches away from the
/// datum in both directions, accumulating rho_mix * g * dz segment-wise.
inline void compute_connection_pressure_drops(StandardWell& well, const PvtBundle& pvt)
{
    const auto frac = StandardWell::composition<double>(well.f_w, well.f_g);

    const auto mixture_density = [&](double p) {
        const double b_w = pvt.water.shrinkage(p);
        const auto [b_o, mu_o] = pvt.oil.props(p, pvt.oil.saturated_rs(p), true);
        (void)mu_o;
        const double b_g = pvt.gas.shrinkage(p);
        const double mass = frac[comp_water] * pvt.rho_surface_water
                            + frac[comp_oil] * pvt.rho_surface_oil
                            + frac[comp_gas] * pvt.rho_surface_gas;
        const double vol = frac[comp_water] / b_w + frac[comp_oil] / b_o + frac[comp_gas] / b_g;
        return mass / vol;
    };

    std::vector<int> order(well.connections.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<int>(i);
    }

    const auto march = [&](std::vector<int> idx) {
        double z_prev = well.ref_depth;
        double h_prev = 0.0;
        for (int i : idx) {
            auto& conn = well.connections[i];
            const double p_prev = well.p_bhp + h_prev;
            const double rho = mixture_density(std::max(p_prev, 1.0e4));
            const double h = h_prev + rho * gravity * (conn.depth - z_prev);
            conn.pressure_drop = h;
            z_prev = conn.depth;
            h_prev = h;
        }
    };

    std::vector<int> below, above;
    for (int i : order) {
        (well.connections[i].depth >= well.ref_depth ? below : above).push_back(i);
    }
    std::sort(below.begin(), below.end(), [&](int a, int b) {
        return well.connections[a].depth < well.connections[b].depth;
    });
    std::sort(above.begin(), above.end(), [&](int a, int b) {
        return well.connections[a].depth > well.connections[b].depth;
    });
    march(below);
    march(above);
}

/// Result of assembling one well: coupling blocks plus the additions the
/// well makes to the reservoir residual and Jacobian diagonal.
struct WellAssembly {
    WellBlocks blocks;
    // reservoir-side source terms: per connected cell, residual addition
    // and diagonal Jacobian addition (derivatives w.r.t. the cell's own
    // primary variables)
    std::vector<Vec3> residual_add;
    std::vector<Mat3> diag_add;
};

/// Linearize the four well equations and the reservoir coupling. Cell
/// states are recomputed with a 7-slot AD number: slots 0..3 carry the
/// well unknowns, slots 4..6 the perforated cell's primary variables.
inline WellAssembly assemble_well(const StandardWell& well,
                                  const std::vector<PrimaryVariables>& pv,
                                  const PvtBundle& pvt,
                                  const SatFunc& sat,
                                  const RockProps& rock,
                                  double dt)
{
    using W = EvalWell;
    const W qt = W::variable(well.q_t, 0);
    const W fw = W::variable(well.f_w, 1);
    const W fg = W::variable(well.f_g, 2);
    const W bhp = W::variable(well.p_bhp, 3);

    const auto rates = StandardWell::component_rates<W>(qt, fw, fg);
    const auto frac = StandardWell::composition<W>(fw, fg);

    // component balances: storage change + Q_a - sum_j qhat_aj
    std::array<W, 4> req;
    for (int c = 0; c < 3; ++c) {
        const W storage = frac[c] * StandardWell::storage_volume;
        req[c] = (storage - well.storage0[c]) * (1.0 / dt) + rates[c];
    }
    // control equation
    if (well.control.mode == ControlMode::bhp) {
        req[3] = bhp - well.control.bhp_value;
    } else {
        req[3] = rates[well.control.rate_component] - well.control.rate_value;
    }

    WellAssembly out;
    auto cell_slot = [&](int cell) -> std::size_t {
        for (std::size_t k = 0; k < out.blocks.cells.size(); ++k) {
            if (out.blocks.cells[k] == cell) {
                return k;
            }
        }
        out.blocks.cells.push_back(cell);
        out.blocks.c_blocks.push_back({});
        out.blocks.b_blocks.push_back({});
        out.residual_add.emplace_back(Vec3{});
        out.diag_add.emplace_back(Mat3{});
        return out.blocks.cells.size() - 1;
    };

    // Slots 4..6 of an inflow belong to one specific cell, so C, B and
    // the reservoir-diagonal additions are scattered per connection;
    // only the value and the well-variable slots 0..3 accumulate in req.
    for (const auto& conn : well.connections) {
        const auto cell_state = update_secondary<W>(pv[conn.cell], pvt, sat, rock, 4);
        const W drawdown = cell_state.p_o - (bhp + conn.pressure_drop);
        const auto inflow = connection_inflow<W>(drawdown, conn.wi, cell_state, frac);

        const std::size_t slot = cell_slot(conn.cell);
        for (int c = 0; c < 3; ++c) {
            req[c] -= inflow.surface[c];
            for (int v = 0; v < 3; ++v) {
                WellBlocks::b_at(out.blocks.b_blocks[slot], c, v) -= inflow.surface[c].derivative(4 + v);
            }
            // the same surface flow leaves the reservoir cell
            out.residual_add[slot][c] += inflow.surface[c].value();
            for (int v = 0; v < 3; ++v) {
                out.diag_add[slot](c, v) += inflow.surface[c].derivative(4 + v);
            }
            for (int v = 0; v < 4; ++v) {
                WellBlocks::c_at(out.blocks.c_blocks[slot], c, v) += inflow.surface[c].derivative(v);
            }
        }
    }

    for (int e = 0; e < 4; ++e) {
        out.blocks.residual[e] = req[e].value();
        for (int v = 0; v < 4; ++v) {
            out.blocks.d(e, v) = req[e].derivative(v);
        }
    }

    try {
        out.blocks.d_lu = std::make_shared<DenseLu>(out.blocks.d);
    } catch (const FactorizationError&) {
        throw WellEquationError(well.name, "singular well equation matrix");
    }
    return out;
}

/// One control switch at most; returns a description when a switch
/// happened. Rate-controlled wells falling below (producers) or rising
/// above (injectors) their BHP limit move to BHP control at the limit;
/// BHP-controlled wells exceeding the rate limit move to rate control.
inline std::optional<std::string> switch_control(StandardWell& well)
{
    const double rel = 1.0e-9;
    const auto rates = well.surface_rates();
    if (well.control.mode == ControlMode::rate) {
        const double limit = well.control.bhp_value;
        const bool violated = well.type == WellType::producer
                                  ? well.p_bhp < limit * (1.0 - rel)
                                  : well.p_bhp > limit * (1.0 + rel);
        if (violated) {
            well.control.mode = ControlMode::bhp;
            well.p_bhp = limit;
            return "switched to BHP control at limit";
        }
    } else {
        const int c = well.control.rate_component;
        const double target = well.control.rate_value;
        const bool violated = well.type == WellType::producer
                                  ? rates[c] > target * (1.0 + rel) && target > 0.0
                                  : rates[c] < target * (1.0 + rel) && target < 0.0;
        if (violated) {
            well.control.mode = ControlMode::rate;
            // rescale the total rate so the controlled component meets its target
            const auto frac_rates = StandardWell::component_rates<double>(1.0, well.f_w, well.f_g);
            if (std::abs(frac_rates[c]) > 1.0e-14) {
                well.q_t = target / frac_rates[c];
            }
            return "switched to RATE control at target";
        }
    }
    return std::nullopt;
}

/// Newton update of the well unknowns (delta already negated). Producer
/// fractions are chopped into the physical simplex.
inline void apply_well_update(StandardWell& well, const std::array<double, 4>& delta)
{
    well.q_t += delta[0];
    well.f_w += delta[1];
    well.f_g += delta[2];
    well.p_bhp += delta[3];

    well.f_w = std::clamp(well.f_w, 0.0, 1.0);
    well.f_g = std::clamp(well.f_g, 0.0, 1.0);
    const double s = well.f_w + well.f_g;
    if (s > 1.0) {
        well.f_w /= s;
        well.f_g /= s;
    }
}

/// Scaled residual errors used by the convergence test: component
/// equations relative to the well's rate scale, the control equation
/// relative to its target.
struct WellConvergence {
    double component_error = 0.0;
    double control_error = 0.0;
};

inline WellConvergence well_convergence(const StandardWell& well,
                                        const std::array<double, 4>& residual)
{
    WellConvergence c;
    const auto rates = well.surface_rates();
    double scale = 1.0e-9; // m^3/s floor
    for (int i = 0; i < 3; ++i) {
        scale = std::max(scale, std::abs(rates[i]));
    }
    for (int i = 0; i < 3; ++i) {
        c.component_error = std::max(c.component_error, std::abs(residual[i]) / scale);
    }
    if (well.control.mode == ControlMode::bhp) {
        c.control_error = std::abs(residual[3]) / std::max(std::abs(well.control.bhp_value), 1.0);
    } else {
        c.control_error = std::abs(residual[3]) / std::max(std::abs(well.control.rate_value), 1.0e-9);
    }
    return c;
}

} // namespace bos
