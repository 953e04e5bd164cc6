#pragma once

#include <bos/common/error.hpp>
#include <bos/common/units.hpp>
#include <bos/grid/grid.hpp>
#include <bos/model/state.hpp>
#include <bos/pvt/pvt.hpp>
#include <bos/satfunc/satfunc.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace bos {

/// Equilibration input: datum and the two fluid contacts with their
/// capillary pressures.
struct EquilRecord {
    double datum_depth = 0.0;   // m
    double datum_pressure = 0.0; // Pa
    double woc_depth = 0.0;     // water-oil contact, m
    double pcow_woc = 0.0;      // p_c,ow at the WOC, Pa
    double goc_depth = 0.0;     // gas-oil contact, m
    double pcog_goc = 0.0;      // p_c,og at the GOC, Pa
};

/// Classical RK4 for dp/dz = rho(z, p) g with a fixed step derived from
/// the distance: n = max(20, ceil(|dz| / 0.5 m)).
inline double integrate_phase_pressure(const std::function<double(double, double)>& density,
                                       double z_from, double p_from, double z_to)
{
    const double dz_total = z_to - z_from;
    if (dz_total == 0.0) {
        return p_from;
    }
    const int n = std::max(20, static_cast<int>(std::ceil(std::abs(dz_total) / 0.5)));
    const double h = dz_total / n;
    double z = z_from;
    double p = p_from;
    for (int i = 0; i < n; ++i) {
        const double k1 = density(z, p) * gravity;
        const double k2 = density(z + 0.5 * h, p + 0.5 * h * k1) * gravity;
        const double k3 = density(z + 0.5 * h, p + 0.5 * h * k2) * gravity;
        const double k4 = density(z + h, p + h * k3) * gravity;
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        z += h;
    }
    return p;
}

/// A phase-pressure profile sampled on a fixed sorted depth set. All
/// queries during equilibration hit sample nodes exactly.
class PressureProfile {
public:
    PressureProfile() = default;

    /// Integrate outward from the anchor through every sampled depth.
    PressureProfile(std::vector<double> depths,
                    double z_anchor, double p_anchor,
                    const std::function<double(double, double)>& density)
        : z_(std::move(depths))
        , p_(z_.size())
    {
        // anchor is guaranteed to be one of the samples
        std::size_t a = 0;
        for (std::size_t i = 0; i < z_.size(); ++i) {
            if (z_[i] == z_anchor) {
                a = i;
            }
        }
        p_[a] = p_anchor;
        for (std::size_t i = a + 1; i < z_.size(); ++i) {
            p_[i] = integrate_phase_pressure(density, z_[i - 1], p_[i - 1], z_[i]);
        }
        for (std::size_t i = a; i-- > 0;) {
            p_[i] = integrate_phase_pressure(density, z_[i + 1], p_[i + 1], z_[i]);
        }
    }

    double at(double z) const
    {
        const auto it = std::lower_bound(z_.begin(), z_.end(), z);
        if (it == z_.end()) {
            return p_.back();
        }
        const std::size_t i = static_cast<std::size_t>(std::distance(z_.begin(), it));
        if (*it == z || i == 0) {
            return p_[i];
        }
        const double t = (z - z_[i - 1]) / (z_[i] - z_[i - 1]);
        return p_[i - 1] + t * (p_[i] - p_[i - 1]);
    }

private:
    std::vector<double> z_;
    std::vector<double> p_;
};

/// Vertical-equilibrium initialization. Phase pressures are built
/// zone-by-zone: the phase owning the datum is anchored there, the
/// others are tied at the contacts through the given contact capillary
/// pressures. Saturations come from inverting the capillary curves at
/// the local phase-pressure differences; with zero capillary pressure
/// the contacts are sharp and a cell belongs to the zone containing its
/// center (a center exactly on a contact belongs to the deeper zone).
///
/// The dissolved-gas ratio is the saturated r_s at the local oil
/// pressure, capped by r_s at the gas-oil contact (or by a user-given
/// rs-vs-depth function when provided).
inline std::vector<PrimaryVariables>
equilibrate(const Grid& grid,
            const PvtBundle& pvt,
            const SatFunc& sat,
            const EquilRecord& rec,
            const std::function<double(double)>& rs_vs_depth = nullptr)
{
    if (rec.goc_depth > rec.woc_depth) {
        throw ConfigError("equilibration: gas-oil contact below water-oil contact");
    }

    // sampled depths: cell centers plus the anchoring depths
    std::vector<double> depths;
    depths.reserve(grid.num_active() + 3);
    for (std::size_t i = 0; i < grid.num_active(); ++i) {
        depths.push_back(grid.depth[i]);
    }
    depths.push_back(rec.datum_depth);
    depths.push_back(rec.woc_depth);
    depths.push_back(rec.goc_depth);
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());

    const auto rho_water = [&](double, double p) {
        return pvt.water.shrinkage(p) * pvt.rho_surface_water;
    };
    // oil density with saturated dissolved gas
    const auto rho_oil = [&](double, double p) {
        const double rs = pvt.oil.saturated_rs(p);
        const auto [b_o, mu_o] = pvt.oil.props(p, rs, true);
        (void)mu_o;
        return b_o * (pvt.rho_surface_oil + rs * pvt.rho_surface_gas);
    };
    const auto rho_gas = [&](double, double p) {
        return pvt.gas.shrinkage(p) * pvt.rho_surface_gas;
    };

    // the zone holding the datum is integrated first; ties follow
    PressureProfile p_o, p_w, p_g;
    if (rec.datum_depth >= rec.woc_depth) { // water zone (deeper wins ties)
        p_w = PressureProfile(depths, rec.datum_depth, rec.datum_pressure, rho_water);
        p_o = PressureProfile(depths, rec.woc_depth,
                              p_w.at(rec.woc_depth) + rec.pcow_woc, rho_oil);
        p_g = PressureProfile(depths, rec.goc_depth,
                              p_o.at(rec.goc_depth) + rec.pcog_goc, rho_gas);
    } else if (rec.datum_depth >= rec.goc_depth) { // oil zone
        p_o = PressureProfile(depths, rec.datum_depth, rec.datum_pressure, rho_oil);
        p_w = PressureProfile(depths, rec.woc_depth,
                              p_o.at(rec.woc_depth) - rec.pcow_woc, rho_water);
        p_g = PressureProfile(depths, rec.goc_depth,
                              p_o.at(rec.goc_depth) + rec.pcog_goc, rho_gas);
    } else { // gas zone
        p_g = PressureProfile(depths, rec.datum_depth, rec.datum_pressure, rho_gas);
        p_o = PressureProfile(depths, rec.goc_depth,
                              p_g.at(rec.goc_depth) - rec.pcog_goc, rho_oil);
        p_w = PressureProfile(depths, rec.woc_depth,
                              p_o.at(rec.woc_depth) - rec.pcow_woc, rho_water);
    }

    const double rs_cap = pvt.oil.is_live()
                              ? pvt.oil.saturated_rs(p_o.at(rec.goc_depth))
                              : 0.0;

    const bool sharp_ow = sat.pcow_degenerate();
    const bool sharp_og = sat.pcog_degenerate();

    std::vector<PrimaryVariables> out(grid.num_active());
    for (std::size_t i = 0; i < grid.num_active(); ++i) {
        const double z = grid.depth[i];
        const double po = p_o.at(z);

        double s_w;
        if (sharp_ow) {
            s_w = z >= rec.woc_depth ? sat.max_water() : sat.connate_water();
        } else {
            s_w = sat.invert_pcow(po - p_w.at(z));
        }
        double s_g;
        if (sharp_og) {
            s_g = z < rec.goc_depth ? sat.max_gas() : 0.0;
        } else {
            s_g = sat.invert_pcog(p_g.at(z) - po);
        }
        if (s_w + s_g > 1.0) {
            s_g = 1.0 - s_w;
        }
        const double s_o = 1.0 - s_w - s_g;

        PrimaryVariables pv;
        pv.p_o = po;
        pv.s_w = s_w;
        if (s_g > 0.0 || s_o <= 1.0e-8) {
            pv.meaning = XMeaning::Sg;
            pv.x = s_g;
        } else {
            pv.meaning = XMeaning::Rgo;
            const double rs_local = pvt.oil.saturated_rs(po);
            const double cap = rs_vs_depth ? rs_vs_depth(z) : rs_cap;
            pv.x = std::min(rs_local, cap);
        }
        out[i] = pv;
    }
    return out;
}

} // namespace bos
