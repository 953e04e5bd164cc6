#pragma once

#include <bos/autodiff/evaluation.hpp>
#include <bos/grid/grid.hpp>
#include <bos/pvt/pvt.hpp>
#include <bos/satfunc/satfunc.hpp>

#include <vector>

namespace bos {

/// Interpretation of the third primary variable. Cells without free gas
/// track the dissolved-gas ratio instead of the gas saturation. (The
/// vaporized-oil interpretation for cells without an oleic phase is not
/// modeled; dry gas only.) Cells without oil keep the gas-saturation
/// interpretation so the gas equation retains a usable diagonal.
enum class XMeaning { Sg, Rgo };

inline const char* to_string(XMeaning m) { return m == XMeaning::Sg ? "Sg" : "Rgo"; }

/// Per-cell primary variables (p_o, s_w, x).
struct PrimaryVariables {
    double p_o = 0.0;  // oil pressure, Pa
    double s_w = 0.0;  // water saturation
    double x = 0.0;    // s_g or r_go depending on meaning
    XMeaning meaning = XMeaning::Sg;
};

/// Secondary quantities derived from the primary variables of one cell.
/// Instantiated with Eval3 during assembly (derivatives with respect to
/// the cell's own primary variables) and with double for passive reads.
template <class Value>
struct CellState {
    XMeaning meaning = XMeaning::Sg;
    Value p_o{}, s_w{}, s_o{}, s_g{};
    Value p_w{}, p_g{};
    Value b_w{}, b_o{}, b_g{};
    Value mu_w{}, mu_o{}, mu_g{};
    Value rho_w{}, rho_o{}, rho_g{};
    Value kr_w{}, kr_o{}, kr_g{};
    Value mob_w{}, mob_o{}, mob_g{};
    Value r_go{};
    Value m_phi{};
    Value acc_w{}, acc_o{}, acc_g{};
};

namespace detail {

template <class Value>
struct AdSeed {
    static Value variable(double v, int slot) { return Value::variable(v, slot); }
    static Value constant(double v) { return Value::constant(v); }
};

template <>
struct AdSeed<double> {
    static double variable(double v, int) { return v; }
    static double constant(double v) { return v; }
};

} // namespace detail

/// Evaluate all secondary quantities of a cell. `slot_offset` selects
/// where the three primary variables sit in the derivative vector
/// (0 for reservoir assembly, 4 when linearizing well equations).
template <class Value>
CellState<Value> update_secondary(const PrimaryVariables& pv,
                                  const PvtBundle& pvt,
                                  const SatFunc& sat,
                                  const RockProps& rock,
                                  int slot_offset = 0,
                                  bool* extrapolated = nullptr)
{
    using Seed = detail::AdSeed<Value>;
    CellState<Value> st;
    st.meaning = pv.meaning;
    st.p_o = Seed::variable(pv.p_o, slot_offset + 0);
    st.s_w = Seed::variable(pv.s_w, slot_offset + 1);
    const Value x = Seed::variable(pv.x, slot_offset + 2);

    const bool saturated = pv.meaning == XMeaning::Sg;
    if (saturated) {
        st.s_g = x;
        st.r_go = pvt.oil.saturated_rs(st.p_o, extrapolated);
    } else {
        st.s_g = Seed::constant(0.0);
        st.r_go = x;
    }
    st.s_o = 1.0 - st.s_w - st.s_g;

    st.p_w = st.p_o - sat.pcow(st.s_w);
    st.p_g = st.p_o + sat.pcog(st.s_g);

    st.b_w = pvt.water.shrinkage(st.p_w);
    st.mu_w = pvt.water.viscosity(st.p_w);
    const auto [b_o, mu_o] = pvt.oil.props(st.p_o, st.r_go, saturated, extrapolated);
    st.b_o = b_o;
    st.mu_o = mu_o;
    st.b_g = pvt.gas.shrinkage(st.p_g, extrapolated);
    st.mu_g = pvt.gas.viscosity(st.p_g, extrapolated);

    st.rho_w = water_density(st.b_w, pvt);
    st.rho_o = oil_density(st.b_o, st.r_go, pvt);
    st.rho_g = gas_density(st.b_g, pvt);

    st.kr_w = sat.water_relperm(st.s_w);
    st.kr_g = sat.gas_relperm(st.s_g);
    st.kr_o = sat.oil_relperm(st.s_w, st.s_g, st.s_o);
    st.mob_w = st.kr_w / st.mu_w;
    st.mob_o = st.kr_o / st.mu_o;
    st.mob_g = st.kr_g / st.mu_g;

    st.m_phi = pore_volume_multiplier(st.p_o, rock);
    st.acc_w = st.m_phi * st.b_w * st.s_w;
    st.acc_o = st.m_phi * st.b_o * st.s_o;
    st.acc_g = st.m_phi * (st.b_g * st.s_g + st.r_go * st.b_o * st.s_o);
    return st;
}

/// Value-only copy of an AD cell state.
template <class Value>
CellState<double> to_values(const CellState<Value>& s)
{
    CellState<double> r;
    r.meaning = s.meaning;
    r.p_o = value_of(s.p_o);
    r.s_w = value_of(s.s_w);
    r.s_o = value_of(s.s_o);
    r.s_g = value_of(s.s_g);
    r.p_w = value_of(s.p_w);
    r.p_g = value_of(s.p_g);
    r.b_w = value_of(s.b_w);
    r.b_o = value_of(s.b_o);
    r.b_g = value_of(s.b_g);
    r.mu_w = value_of(s.mu_w);
    r.mu_o = value_of(s.mu_o);
    r.mu_g = value_of(s.mu_g);
    r.rho_w = value_of(s.rho_w);
    r.rho_o = value_of(s.rho_o);
    r.rho_g = value_of(s.rho_g);
    r.kr_w = value_of(s.kr_w);
    r.kr_o = value_of(s.kr_o);
    r.kr_g = value_of(s.kr_g);
    r.mob_w = value_of(s.mob_w);
    r.mob_o = value_of(s.mob_o);
    r.mob_g = value_of(s.mob_g);
    r.r_go = value_of(s.r_go);
    r.m_phi = value_of(s.m_phi);
    r.acc_w = value_of(s.acc_w);
    r.acc_o = value_of(s.acc_o);
    r.acc_g = value_of(s.acc_g);
    return r;
}

} // namespace bos
