#pragma once

#include <bos/autodiff/evaluation.hpp>
#include <bos/common/error.hpp>
#include <bos/common/table.hpp>

#include <string>
#include <utility>
#include <vector>

namespace bos {

/// Tabulated two-phase saturation functions (single saturation region):
/// a water/oil table in s_w and a gas/oil table in s_g, combined into a
/// three-phase oil relative permeability by assuming local segregation.
///
/// The two-phase oil curves are evaluated at oil saturation:
///   k_row(s_o) uses the water table at s_w = 1 - s_o   (no gas),
///   k_rog(s_o) uses the gas table at s_g = 1 - s_o - s_wco (connate water).
class SatFunc {
public:
    SatFunc() = default;

    SatFunc(std::vector<double> sw, std::vector<double> krw,
            std::vector<double> krow, std::vector<double> pcow,
            std::vector<double> sg, std::vector<double> krg,
            std::vector<double> krog, std::vector<double> pcog)
        : krw_(sw, krw, "SWOF krw")
        , krow_(sw, krow, "SWOF krow")
        , pcow_(sw, pcow, "SWOF pcow")
        , krg_(sg, krg, "SGOF krg")
        , krog_(sg, krog, "SGOF krog")
        , pcog_(sg, pcog, "SGOF pcog")
    {
        validate_saturation_column(sw, "SWOF");
        validate_saturation_column(sg, "SGOF");
        validate_monotone(krw, false, "SWOF krw");
        validate_monotone(krow, true, "SWOF krow");
        validate_monotone(pcow, true, "SWOF pcow");
        validate_monotone(krg, false, "SGOF krg");
        validate_monotone(krog, true, "SGOF krog");
        validate_monotone(pcog, false, "SGOF pcog");
        validate_relperm_range(krw, "SWOF krw");
        validate_relperm_range(krow, "SWOF krow");
        validate_relperm_range(krg, "SGOF krg");
        validate_relperm_range(krog, "SGOF krog");
        s_wco_ = sw.front();
        s_w_max_ = sw.back();
        s_g_max_ = sg.back();
    }

    double connate_water() const { return s_wco_; }
    double max_water() const { return s_w_max_; }
    double max_gas() const { return s_g_max_; }

    template <class Value>
    Value water_relperm(const Value& s_w) const { return krw_.eval_clamped(s_w); }

    template <class Value>
    Value gas_relperm(const Value& s_g) const { return krg_.eval_clamped(s_g); }

    template <class Value>
    Value oil_relperm_in_water(const Value& s_o) const
    {
        return krow_.eval_clamped(1.0 - s_o);
    }

    template <class Value>
    Value oil_relperm_in_gas(const Value& s_o) const
    {
        return krog_.eval_clamped(1.0 - s_o - s_wco_);
    }

    /// Segregated three-phase oil relative permeability,
    ///   k_ro = [(s_w - s_wco) k_row(s_o) + s_g k_rog(s_o)] / (s_w - s_wco + s_g).
    /// When the denominator vanishes the water-zone limit k_row applies.
    /// Weights are floored at zero so transient iterates below connate
    /// water stay inside the convex hull of the two curves.
    template <class Value>
    Value oil_relperm(const Value& s_w, const Value& s_g, const Value& s_o) const
    {
        const Value ww = max(s_w - s_wco_, 0.0);
        const Value wg = max(s_g, 0.0);
        const Value den = ww + wg;
        if (value_of(den) < eps_segregation) {
            return oil_relperm_in_water(s_o);
        }
        return (ww * oil_relperm_in_water(s_o) + wg * oil_relperm_in_gas(s_o)) / den;
    }

    template <class Value>
    Value pcow(const Value& s_w) const { return pcow_.eval_clamped(s_w); }

    template <class Value>
    Value pcog(const Value& s_g) const { return pcog_.eval_clamped(s_g); }

    /// Capillary inversions for equilibration, clamped to table support.
    double invert_pcow(double pc) const { return pcow_.invert_clamped(pc); }
    double invert_pcog(double pc) const { return pcog_.invert_clamped(pc); }

    bool pcow_degenerate(double eps = 1.0e-30) const { return pcow_.degenerate_ordinate(eps); }
    bool pcog_degenerate(double eps = 1.0e-30) const { return pcog_.degenerate_ordinate(eps); }

    static constexpr double eps_segregation = 1.0e-10;

private:
    static void validate_saturation_column(const std::vector<double>& s, const char* kw)
    {
        if (s.front() < -1.0e-12 || s.back() > 1.0 + 1.0e-12) {
            throw ConfigError(std::string(kw) + ": saturation column outside [0,1]");
        }
    }

    static void validate_monotone(const std::vector<double>& v, bool non_increasing, const std::string& what)
    {
        for (std::size_t i = 1; i < v.size(); ++i) {
            const bool ok = non_increasing ? v[i] <= v[i - 1] + 1.0e-14
                                           : v[i] >= v[i - 1] - 1.0e-14;
            if (!ok) {
                throw ConfigError(what + ": column not monotone at row " + std::to_string(i));
            }
        }
    }

    static void validate_relperm_range(const std::vector<double>& v, const std::string& what)
    {
        for (double x : v) {
            if (x < 0.0 || x > 1.0 + 1.0e-12) {
                throw ConfigError(what + ": relative permeability outside [0,1]");
            }
        }
    }

    static double value_of(double x) { return x; }

    template <class E>
    static double value_of(const E& x) { return x.value(); }

    PiecewiseLinear krw_, krow_, pcow_;
    PiecewiseLinear krg_, krog_, pcog_;
    double s_wco_ = 0.0;
    double s_w_max_ = 1.0;
    double s_g_max_ = 1.0;
};

} // namespace bos
