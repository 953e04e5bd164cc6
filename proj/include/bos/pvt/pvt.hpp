#pragma once

#include <bos/common/error.hpp>
#include <bos/common/log.hpp>
#include <bos/common/table.hpp>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace bos {

/// Constant-compressibility water: the shrinkage factor and viscosity
/// use the second-order series of exp around the reference pressure,
///   b_w  = b_ref (1 + x + x^2/2),    x = c_w  (p - p_ref),
///   mu_w = mu_ref (1 + y + y^2/2),   y = c_mu (p - p_ref).
struct WaterPvt {
    double b_ref = 1.0;      // surface volume / reservoir volume at p_ref
    double compressibility = 0.0; // 1/Pa
    double p_ref = 0.0;      // Pa
    double mu_ref = 1.0e-3;  // Pa*s
    double viscosibility = 0.0; // 1/Pa

    template <class Value>
    Value shrinkage(const Value& p) const
    {
        const Value x = (p - p_ref) * compressibility;
        return (x * x * 0.5 + x + 1.0) * b_ref;
    }

    template <class Value>
    Value viscosity(const Value& p) const
    {
        const Value y = (p - p_ref) * viscosibility;
        return (y * y * 0.5 + y + 1.0) * mu_ref;
    }
};

/// Tabulated single-phase PVT: rows (p, b, mu) with b the shrinkage /
/// expansion factor (surface volume per reservoir volume). Used for dry
/// gas and for dead oil.
struct TabulatedPvt {
    PiecewiseLinear b;  // p -> b
    PiecewiseLinear mu; // p -> mu

    template <class Value>
    Value shrinkage(const Value& p, bool* extrapolated = nullptr) const
    {
        return b.eval_extrapolating(p, extrapolated);
    }

    template <class Value>
    Value viscosity(const Value& p, bool* extrapolated = nullptr) const
    {
        return mu.eval_extrapolating(p, extrapolated);
    }
};

/// Live oil with dissolved gas. The saturated curves run along the
/// bubble-point locus; undersaturated branches are keyed by their
/// dissolved-gas ratio and tabulated in pressure from the bubble point
/// upward. Between branches the properties are interpolated linearly in
/// r_s at equal distance-to-bubble-point, which keeps the saturated and
/// undersaturated surfaces continuous across the phase boundary.
class LiveOilPvt {
public:
    struct Branch {
        double rs = 0.0;     // dissolved gas ratio of this branch
        double p_bub = 0.0;  // its bubble point pressure
        PiecewiseLinear b;   // p -> b_o along the branch
        PiecewiseLinear mu;  // p -> mu_o
    };

    LiveOilPvt() = default;

    LiveOilPvt(PiecewiseLinear sat_rs, PiecewiseLinear sat_b, PiecewiseLinear sat_mu,
               std::vector<Branch> branches)
        : sat_rs_(std::move(sat_rs))
        , sat_b_(std::move(sat_b))
        , sat_mu_(std::move(sat_mu))
        , branches_(std::move(branches))
        , bub_of_rs_(sat_rs_.ys(), sat_rs_.xs(), "p_bub(rs)")
    {
        for (std::size_t i = 1; i < branches_.size(); ++i) {
            if (!(branches_[i].rs > branches_[i - 1].rs)) {
                throw ConfigError("live oil branches must have strictly increasing rs");
            }
        }
    }

    const PiecewiseLinear& saturated_rs_table() const { return sat_rs_; }
    const std::vector<Branch>& branches() const { return branches_; }

    /// Dissolution capacity r_s(p): constant below the first node,
    /// linear continuation above the last one.
    template <class Value>
    Value saturated_rs(const Value& p, bool* extrapolated = nullptr) const
    {
        return sat_rs_.eval_extrapolating(p, extrapolated);
    }

    /// Bubble point pressure of a given dissolved-gas ratio.
    template <class Value>
    Value bubble_point(const Value& rs, bool* extrapolated = nullptr) const
    {
        return bub_of_rs_.eval_extrapolating(rs, extrapolated);
    }

    template <class Value>
    std::pair<Value, Value> saturated_props(const Value& p, bool* extrapolated = nullptr) const
    {
        return {sat_b_.eval_extrapolating(p, extrapolated),
                sat_mu_.eval_extrapolating(p, extrapolated)};
    }

    /// Properties at pressure p for dissolved-gas ratio rs below the
    /// dissolution capacity.
    template <class Value>
    std::pair<Value, Value> undersaturated_props(const Value& p, const Value& rs,
                                                 bool* extrapolated = nullptr) const
    {
        if (branches_.empty()) {
            return saturated_props(p, extrapolated);
        }
        const Value dp = p - bubble_point(rs, extrapolated);
        const double r = value_of_(rs);

        std::size_t hi = 0;
        while (hi < branches_.size() && branches_[hi].rs < r) {
            ++hi;
        }
        if (hi == 0) {
            return branch_props(0, dp, extrapolated);
        }
        if (hi == branches_.size()) {
            if (extrapolated) {
                *extrapolated = true;
            }
            if (branches_.size() == 1) {
                return branch_props(0, dp, extrapolated);
            }
            hi = branches_.size() - 1; // linear continuation from the last two
        }
        const std::size_t lo = hi - 1;
        const auto [b_lo, mu_lo] = branch_props(lo, dp, extrapolated);
        const auto [b_hi, mu_hi] = branch_props(hi, dp, extrapolated);
        const double drs = branches_[hi].rs - branches_[lo].rs;
        const Value w = (rs - branches_[lo].rs) * (1.0 / drs);
        return {b_lo + w * (b_hi - b_lo), mu_lo + w * (mu_hi - mu_lo)};
    }

    /// True when some branch has no undersaturated rows beyond its
    /// bubble point; such branches evaluate constant in pressure.
    bool has_single_point_branch() const
    {
        for (const auto& br : branches_) {
            if (br.b.size() < 2) {
                return true;
            }
        }
        return false;
    }

private:
    static double value_of_(double x) { return x; }

    template <class E>
    static double value_of_(const E& x) { return x.value(); }

    template <class Value>
    std::pair<Value, Value> branch_props(std::size_t k, const Value& dp,
                                         bool* extrapolated) const
    {
        const Branch& br = branches_[k];
        const Value p_eval = dp + br.p_bub;
        return {br.b.eval_extrapolating(p_eval, extrapolated),
                br.mu.eval_extrapolating(p_eval, extrapolated)};
    }

    PiecewiseLinear sat_rs_;
    PiecewiseLinear sat_b_;
    PiecewiseLinear sat_mu_;
    std::vector<Branch> branches_;
    PiecewiseLinear bub_of_rs_;
};

/// Oleic-phase properties: either dead oil (tabulated, no dissolved gas)
/// or live oil.
class OilPvt {
public:
    OilPvt() = default;
    static OilPvt dead(TabulatedPvt t)
    {
        OilPvt p;
        p.dead_ = std::move(t);
        p.live_oil_ = false;
        return p;
    }
    static OilPvt live(LiveOilPvt t)
    {
        OilPvt p;
        p.live_table_ = std::move(t);
        p.live_oil_ = true;
        return p;
    }

    bool is_live() const { return live_oil_; }
    const LiveOilPvt& live_table() const { return live_table_; }

    template <class Value>
    Value saturated_rs(const Value& p, bool* extrapolated = nullptr) const
    {
        if (!live_oil_) {
            return constant_like(p, 0.0);
        }
        return live_table_.saturated_rs(p, extrapolated);
    }

    /// (b_o, mu_o). For saturated oil the r_go argument is ignored and
    /// the bubble-point locus is evaluated at p.
    template <class Value>
    std::pair<Value, Value> props(const Value& p, const Value& r_go, bool saturated,
                                  bool* extrapolated = nullptr) const
    {
        if (!live_oil_) {
            return {dead_.shrinkage(p, extrapolated), dead_.viscosity(p, extrapolated)};
        }
        if (saturated) {
            return live_table_.saturated_props(p, extrapolated);
        }
        return live_table_.undersaturated_props(p, r_go, extrapolated);
    }

private:
    static double constant_like(double, double y) { return y; }

    template <class E>
    static E constant_like(const E&, double y) { return E::constant(y); }

    TabulatedPvt dead_;
    LiveOilPvt live_table_;
    bool live_oil_ = false;
};

/// Fluid system of the run: per-phase PVT plus surface densities.
struct PvtBundle {
    WaterPvt water;
    OilPvt oil;
    TabulatedPvt gas;
    double rho_surface_water = 1000.0; // kg/m^3
    double rho_surface_oil = 800.0;
    double rho_surface_gas = 1.0;
};

/// Reservoir-condition densities (dry gas: no vaporized oil term).
template <class Value>
Value water_density(const Value& b_w, const PvtBundle& pvt)
{
    return b_w * pvt.rho_surface_water;
}

template <class Value>
Value oil_density(const Value& b_o, const Value& r_go, const PvtBundle& pvt)
{
    return b_o * (r_go * pvt.rho_surface_gas + pvt.rho_surface_oil);
}

template <class Value>
Value gas_density(const Value& b_g, const PvtBundle& pvt)
{
    return b_g * pvt.rho_surface_gas;
}

} // namespace bos
