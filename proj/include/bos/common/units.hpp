#pragma once

#include <bos/common/error.hpp>

#include <string>

namespace bos {

/// Standard gravity, m/s^2.
inline constexpr double gravity = 9.80665;

namespace unit {

// SI base factors for the customary oilfield units.
inline constexpr double feet = 0.3048;                          // m
inline constexpr double psi = 4.4482216152605 / (0.0254 * 0.0254); // Pa
inline constexpr double barsa = 1.0e5;                          // Pa
inline constexpr double day = 86400.0;                          // s
inline constexpr double centipoise = 1.0e-3;                    // Pa*s
inline constexpr double darcy = 9.869232667160130e-13;          // m^2
inline constexpr double millidarcy = 1.0e-3 * darcy;            // m^2
inline constexpr double stb = 0.158987294928;                   // m^3 (42 US gal)
inline constexpr double mscf = 1000.0 * feet * feet * feet;     // m^3
inline constexpr double pound = 0.45359237;                     // kg
inline constexpr double lb_per_ft3 = pound / (feet * feet * feet); // kg/m^3

} // namespace unit

/// Physical dimension tag attached to deck items and tables. Conversion
/// between deck units and SI happens exactly once, at the parse boundary.
enum class Dim {
    none,
    length,
    pressure,
    inv_pressure,
    density,
    permeability,
    viscosity,
    liquid_surface_volume,
    gas_surface_volume,
    liquid_rate,
    gas_rate,
    gas_oil_ratio,
    oil_fvf, // reservoir volume per liquid surface volume
    gas_fvf, // reservoir volume per gas surface volume
    transmissibility,
    time,
};

class UnitSystem {
public:
    enum class Kind { field, metric };

    static UnitSystem field() { return UnitSystem(Kind::field); }
    static UnitSystem metric() { return UnitSystem(Kind::metric); }

    Kind kind() const { return kind_; }
    const char* name() const { return kind_ == Kind::field ? "FIELD" : "METRIC"; }

    /// SI value of one deck unit of the given dimension.
    double factor(Dim d) const
    {
        using namespace unit;
        const bool f = kind_ == Kind::field;
        switch (d) {
        case Dim::none: return 1.0;
        case Dim::length: return f ? feet : 1.0;
        case Dim::pressure: return f ? psi : barsa;
        case Dim::inv_pressure: return f ? 1.0 / psi : 1.0 / barsa;
        case Dim::density: return f ? lb_per_ft3 : 1.0;
        case Dim::permeability: return millidarcy;
        case Dim::viscosity: return centipoise;
        case Dim::liquid_surface_volume: return f ? stb : 1.0;
        case Dim::gas_surface_volume: return f ? mscf : 1.0;
        case Dim::liquid_rate: return f ? stb / day : 1.0 / day;
        case Dim::gas_rate: return f ? mscf / day : 1.0 / day;
        case Dim::gas_oil_ratio: return f ? mscf / stb : 1.0;
        case Dim::oil_fvf: return f ? 1.0 : 1.0; // rb/stb is volume-neutral
        case Dim::gas_fvf: return f ? stb / mscf : 1.0;
        case Dim::transmissibility:
            // cP*rb/day/psi resp. cP*m^3/day/bar
            return f ? centipoise * stb / (day * psi)
                     : centipoise / (day * barsa);
        case Dim::time: return day;
        }
        throw ConfigError("unknown dimension tag");
    }

    double to_si(Dim d, double deck_value) const { return deck_value * factor(d); }
    double from_si(Dim d, double si_value) const { return si_value / factor(d); }

private:
    explicit UnitSystem(Kind k) : kind_(k) {}
    Kind kind_;
};

/// Dimension tag by schema name; used when loading keyword schemas.
inline Dim dim_from_name(const std::string& name)
{
    if (name == "none") return Dim::none;
    if (name == "length") return Dim::length;
    if (name == "pressure") return Dim::pressure;
    if (name == "inv_pressure") return Dim::inv_pressure;
    if (name == "density") return Dim::density;
    if (name == "permeability") return Dim::permeability;
    if (name == "viscosity") return Dim::viscosity;
    if (name == "liquid_surface_volume") return Dim::liquid_surface_volume;
    if (name == "gas_surface_volume") return Dim::gas_surface_volume;
    if (name == "liquid_rate") return Dim::liquid_rate;
    if (name == "gas_rate") return Dim::gas_rate;
    if (name == "gas_oil_ratio") return Dim::gas_oil_ratio;
    if (name == "oil_fvf") return Dim::oil_fvf;
    if (name == "gas_fvf") return Dim::gas_fvf;
    if (name == "transmissibility") return Dim::transmissibility;
    if (name == "time") return Dim::time;
    throw ConfigError("unknown dimension name '" + name + "'");
}

} // namespace bos
