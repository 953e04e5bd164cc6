#pragma once

#include <bos/common/error.hpp>
#include <bos/common/log.hpp>
#include <bos/common/units.hpp>
#include <bos/deck/deck.hpp>
#include <bos/deck/schema.hpp>
#include <bos/equil/equil.hpp>
#include <bos/grid/grid.hpp>
#include <bos/pvt/pvt.hpp>
#include <bos/satfunc/satfunc.hpp>
#include <bos/wells/wells.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bos {

struct WellConnDef {
    int cell = -1;    // active cell index
    double wi = 0.0;  // m^3
    double depth = 0.0;
};

/// Complete state of one well at a report step boundary.
struct WellSnapshot {
    std::string name;
    WellType type = WellType::producer;
    InjectedPhase injected = InjectedPhase::water;
    WellStatus status = WellStatus::shut;
    bool has_control = false;
    WellControl control;
    std::vector<WellConnDef> connections;
    double ref_depth = 0.0;
    int head_i = 0, head_j = 0; // 0-based

    bool open() const { return status == WellStatus::open; }
};

struct ReportStep {
    double duration = 0.0; // seconds
    std::vector<WellSnapshot> wells;
};

struct SummaryRequest {
    std::string keyword;   // WBHP, WOPR, ..., FOPR, FPR
    std::string well;      // empty for field vectors
};

/// Stage-2 result: the semantically resolved simulation case.
struct SimCase {
    UnitSystem units = UnitSystem::metric();
    std::string start_date;
    bool disgas = false;

    Grid grid;
    RockProps rock;
    PvtBundle pvt;
    SatFunc sat;
    EquilRecord equil;

    std::vector<ReportStep> schedule;
    std::vector<SummaryRequest> summary;

    std::string describe() const;
};

namespace case_detail {

inline double item_si(const UnitSystem& us, const DeckItem& it)
{
    return it.si_value ? it.rval : us.to_si(it.dim, it.rval);
}

inline DeckError located(const DeckKeyword& kw, const std::string& msg)
{
    return DeckError(kw.file, kw.line, kw.name + ": " + msg);
}

inline std::vector<double> read_real_array(const UnitSystem& us, const DeckKeyword& kw,
                                           std::size_t expected)
{
    if (kw.records.size() != 1) {
        throw located(kw, "expected one data record");
    }
    const auto& items = kw.records[0].items;
    if (items.size() != expected) {
        throw located(kw, "expected " + std::to_string(expected) + " values, got "
                      + std::to_string(items.size()));
    }
    std::vector<double> out(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        out[i] = item_si(us, items[i]);
    }
    return out;
}

struct TableColumns {
    std::vector<std::vector<double>> col;
};

inline TableColumns read_table(const UnitSystem& us, const DeckKeyword& kw,
                               const DeckRecord& rec, int arity)
{
    TableColumns t;
    t.col.resize(arity);
    if (rec.items.empty() || rec.items.size() % static_cast<std::size_t>(arity) != 0) {
        throw located(kw, "table needs a positive whole number of rows of "
                      + std::to_string(arity) + " columns");
    }
    for (std::size_t i = 0; i < rec.items.size(); ++i) {
        t.col[i % arity].push_back(item_si(us, rec.items[i]));
    }
    return t;
}

/// Schedule fold state for one well.
struct WorkingWell {
    WellSnapshot snap;
    bool ref_depth_defaulted = false;
};

} // namespace case_detail

/// Stage 2: fold the keyword container into a consistent simulation
/// case. Sections are validated in canonical order; SCHEDULE keywords
/// act on a running well table from which a snapshot is taken at every
/// TSTEP (later keywords override earlier state).
inline SimCase build_case(const Deck& deck, const SchemaRegistry& registry, RunLog* log = nullptr)
{
    using namespace case_detail;
    SimCase cs;

    // ---- section ordering --------------------------------------------
    static const std::vector<std::string> canonical = {
        "RUNSPEC", "GRID", "PROPS", "SOLUTION", "SUMMARY", "SCHEDULE"};
    {
        int level = -1;
        for (const auto& kw : deck.keywords) {
            const auto it = std::find(canonical.begin(), canonical.end(), kw.name);
            if (it != canonical.end()) {
                const int lvl = static_cast<int>(it - canonical.begin());
                if (lvl <= level) {
                    throw located(kw, "section out of canonical order");
                }
                level = lvl;
                continue;
            }
            if (!registry.has(kw.name)) {
                throw located(kw, "keyword has no schema");
            }
            const auto& section = registry.get(kw.name).section;
            if (section.empty()) {
                continue;
            }
            if (level < 0 || canonical[level] != section) {
                throw located(kw, "keyword belongs to section " + section);
            }
        }
        if (level < 0) {
            throw DeckError("<deck>", 0, "no sections found");
        }
    }

    const auto require = [&](const char* name) -> const DeckKeyword& {
        const DeckKeyword* kw = deck.find(name);
        if (!kw) {
            throw DeckError("<deck>", 0, std::string("required keyword ") + name + " is missing");
        }
        return *kw;
    };

    // ---- RUNSPEC ------------------------------------------------------
    if (!deck.has("OIL") || !deck.has("WATER") || !deck.has("GAS")) {
        throw DeckError("<deck>", 0,
                        "three-phase runs only: OIL, WATER and GAS must all be present");
    }
    cs.disgas = deck.has("DISGAS");
    if (deck.has("FIELD") && deck.has("METRIC")) {
        throw DeckError("<deck>", 0, "FIELD and METRIC are mutually exclusive");
    }
    cs.units = deck.has("FIELD") ? UnitSystem::field() : UnitSystem::metric();
    const UnitSystem& us = cs.units;

    const auto& dimens = require("DIMENS");
    const int nx = static_cast<int>(dimens.records.at(0).items.at(0).ival);
    const int ny = static_cast<int>(dimens.records.at(0).items.at(1).ival);
    const int nz = static_cast<int>(dimens.records.at(0).items.at(2).ival);
    if (nx <= 0 || ny <= 0 || nz <= 0) {
        throw located(dimens, "grid dimensions must be positive");
    }
    const std::size_t ncart = static_cast<std::size_t>(nx) * ny * nz;

    if (const auto* start = deck.find("START")) {
        const auto& it = start->records[0].items;
        cs.start_date = std::to_string(it[0].ival) + " " + it[1].sval + " "
                        + std::to_string(it[2].ival);
    }

    // ---- GRID ----------------------------------------------------------
    CartesianGridInput gin;
    gin.nx = nx;
    gin.ny = ny;
    gin.nz = nz;
    gin.dx = read_real_array(us, require("DX"), ncart);
    gin.dy = read_real_array(us, require("DY"), ncart);
    gin.dz = read_real_array(us, require("DZ"), ncart);
    gin.tops = read_real_array(us, require("TOPS"), static_cast<std::size_t>(nx) * ny);
    if (const auto* act = deck.find("ACTNUM")) {
        const auto vals = read_real_array(us, *act, ncart);
        gin.actnum.resize(ncart);
        for (std::size_t i = 0; i < ncart; ++i) {
            if (vals[i] != 0.0 && vals[i] != 1.0) {
                throw located(*act, "ACTNUM entries must be 0 or 1");
            }
            gin.actnum[i] = static_cast<int>(vals[i]);
        }
    }
    try {
        cs.grid = build_cartesian(gin);
    } catch (const ConfigError& e) {
        throw DeckError(dimens.file, dimens.line, e.what());
    }

    const auto permx = read_real_array(us, require("PERMX"), ncart);
    const auto permy = read_real_array(us, require("PERMY"), ncart);
    const auto permz = read_real_array(us, require("PERMZ"), ncart);
    const auto poro = read_real_array(us, require("PORO"), ncart);
    cs.rock.perm.resize(cs.grid.num_active());
    cs.rock.poro_ref.resize(cs.grid.num_active());
    for (std::size_t a = 0; a < cs.grid.num_active(); ++a) {
        const int c = cs.grid.cartesian_index[a];
        if (permx[c] < 0 || permy[c] < 0 || permz[c] < 0) {
            throw located(require("PERMX"), "negative permeability");
        }
        if (poro[c] < 0.0 || poro[c] > 1.0) {
            throw located(require("PORO"), "porosity outside [0,1]");
        }
        cs.rock.perm[a] = {permx[c], permy[c], permz[c]};
        cs.rock.poro_ref[a] = poro[c];
    }

    // ---- PROPS ----------------------------------------------------------
    {
        const auto& rock = require("ROCK");
        const auto& it = rock.records.at(0).items;
        cs.rock.rock_ref_pressure = item_si(us, it.at(0));
        cs.rock.rock_compressibility = item_si(us, it.at(1));
    }
    {
        const auto& dens = require("DENSITY");
        const auto& it = dens.records.at(0).items;
        cs.pvt.rho_surface_oil = item_si(us, it.at(0));
        cs.pvt.rho_surface_water = item_si(us, it.at(1));
        cs.pvt.rho_surface_gas = item_si(us, it.at(2));
    }
    {
        const auto& pvtw = require("PVTW");
        const auto& it = pvtw.records.at(0).items;
        const double b_fvf = item_si(us, it.at(1));
        if (!(b_fvf > 0)) {
            throw located(pvtw, "water formation volume factor must be positive");
        }
        cs.pvt.water.p_ref = item_si(us, it.at(0));
        cs.pvt.water.b_ref = 1.0 / b_fvf;
        cs.pvt.water.compressibility = item_si(us, it.at(2));
        cs.pvt.water.mu_ref = item_si(us, it.at(3));
        cs.pvt.water.viscosibility = item_si(us, it.at(4));
    }
    {
        const auto& pvdg = require("PVDG");
        const auto t = read_table(us, pvdg, pvdg.records.at(0), 3);
        std::vector<double> b(t.col[1].size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(t.col[1][i] > 0) || !(t.col[2][i] > 0)) {
                throw located(pvdg, "Bg and viscosity must be positive in row "
                              + std::to_string(i + 1));
            }
            b[i] = 1.0 / t.col[1][i];
        }
        try {
            cs.pvt.gas.b = PiecewiseLinear(t.col[0], b, "PVDG b");
            cs.pvt.gas.mu = PiecewiseLinear(t.col[0], t.col[2], "PVDG mu");
        } catch (const ConfigError& e) {
            throw located(pvdg, e.what());
        }
    }
    if (cs.disgas) {
        const auto* pvto = deck.find("PVTO");
        if (!pvto) {
            throw DeckError("<deck>", 0, "DISGAS requires PVTO");
        }
        if (deck.has("PVDO")) {
            throw located(*deck.find("PVDO"), "PVDO cannot be combined with DISGAS/PVTO");
        }
        std::vector<double> rs, p_bub, b_sat, mu_sat;
        std::vector<LiveOilPvt::Branch> branches;
        for (std::size_t r = 0; r < pvto->records.size(); ++r) {
            const auto& rec = pvto->records[r];
            if (rec.items.size() < 4) {
                throw located(*pvto, "record " + std::to_string(r + 1)
                              + " needs RS and at least one (P, Bo, mu) row");
            }
            const double rs_val = item_si(us, rec.items[0]);
            std::vector<double> p, b, mu;
            for (std::size_t i = 1; i + 2 < rec.items.size() + 1; i += 3) {
                p.push_back(item_si(us, rec.items[i]));
                const double fvf = item_si(us, rec.items[i + 1]);
                const double visc = item_si(us, rec.items[i + 2]);
                if (!(fvf > 0) || !(visc > 0)) {
                    throw located(*pvto, "Bo and viscosity must be positive (record "
                                  + std::to_string(r + 1) + ")");
                }
                b.push_back(1.0 / fvf);
                mu.push_back(visc);
            }
            if (!rs.empty() && !(rs_val > rs.back())) {
                throw located(*pvto, "RS must be strictly increasing (record "
                              + std::to_string(r + 1) + ")");
            }
            rs.push_back(rs_val);
            p_bub.push_back(p.front());
            b_sat.push_back(b.front());
            mu_sat.push_back(mu.front());
            LiveOilPvt::Branch br;
            br.rs = rs_val;
            br.p_bub = p.front();
            try {
                br.b = PiecewiseLinear(p, b, "PVTO b");
                br.mu = PiecewiseLinear(p, mu, "PVTO mu");
            } catch (const ConfigError& e) {
                throw located(*pvto, std::string(e.what()) + " (record "
                              + std::to_string(r + 1) + ")");
            }
            if (p.size() < 2 && log) {
                log->warn("PVTO record " + std::to_string(r + 1)
                          + " has no undersaturated rows; constant extrapolation in pressure");
            }
            branches.push_back(std::move(br));
        }
        try {
            cs.pvt.oil = OilPvt::live(LiveOilPvt(
                PiecewiseLinear(p_bub, rs, "PVTO rs"),
                PiecewiseLinear(p_bub, b_sat, "PVTO sat b"),
                PiecewiseLinear(p_bub, mu_sat, "PVTO sat mu"),
                std::move(branches)));
        } catch (const ConfigError& e) {
            throw located(*pvto, e.what());
        }
    } else {
        const auto* pvdo = deck.find("PVDO");
        if (!pvdo) {
            throw DeckError("<deck>", 0, "dead-oil runs require PVDO");
        }
        if (deck.has("PVTO")) {
            throw located(*deck.find("PVTO"), "PVTO requires DISGAS");
        }
        const auto t = read_table(us, *pvdo, pvdo->records.at(0), 3);
        std::vector<double> b(t.col[1].size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(t.col[1][i] > 0) || !(t.col[2][i] > 0)) {
                throw located(*pvdo, "Bo and viscosity must be positive in row "
                              + std::to_string(i + 1));
            }
            b[i] = 1.0 / t.col[1][i];
        }
        TabulatedPvt dead;
        try {
            dead.b = PiecewiseLinear(t.col[0], b, "PVDO b");
            dead.mu = PiecewiseLinear(t.col[0], t.col[2], "PVDO mu");
        } catch (const ConfigError& e) {
            throw located(*pvdo, e.what());
        }
        cs.pvt.oil = OilPvt::dead(std::move(dead));
    }
    {
        const auto& swof = require("SWOF");
        const auto& sgof = require("SGOF");
        const auto tw = read_table(us, swof, swof.records.at(0), 4);
        const auto tg = read_table(us, sgof, sgof.records.at(0), 4);
        try {
            cs.sat = SatFunc(tw.col[0], tw.col[1], tw.col[2], tw.col[3],
                             tg.col[0], tg.col[1], tg.col[2], tg.col[3]);
        } catch (const ConfigError& e) {
            throw DeckError(swof.file, swof.line, e.what());
        }
    }

    // NNCs need the permeability-derived lattice connections in place
    std::vector<Nnc> nncs;
    if (const auto* nnc = deck.find("NNC")) {
        for (std::size_t r = 0; r < nnc->records.size(); ++r) {
            const auto& it = nnc->records[r].items;
            const auto cart_of = [&](int i, int j, int k) {
                if (i < 1 || i > nx || j < 1 || j > ny || k < 1 || k > nz) {
                    throw located(*nnc, "cell index out of range in record "
                                  + std::to_string(r + 1));
                }
                return cs.grid.cart(i - 1, j - 1, k - 1);
            };
            Nnc n;
            n.cart_a = cart_of(static_cast<int>(it.at(0).ival), static_cast<int>(it.at(1).ival),
                               static_cast<int>(it.at(2).ival));
            n.cart_b = cart_of(static_cast<int>(it.at(3).ival), static_cast<int>(it.at(4).ival),
                               static_cast<int>(it.at(5).ival));
            n.trans = item_si(us, it.at(6));
            nncs.push_back(n);
        }
    }
    try {
        connect_cells(cs.grid, cs.rock, nncs);
    } catch (const Error& e) {
        throw DeckError(deck.find("NNC") ? deck.find("NNC")->file : dimens.file,
                        deck.find("NNC") ? deck.find("NNC")->line : dimens.line, e.what());
    }

    // ---- SOLUTION --------------------------------------------------------
    {
        const auto& eq = require("EQUIL");
        const auto& it = eq.records.at(0).items;
        cs.equil.datum_depth = item_si(us, it.at(0));
        cs.equil.datum_pressure = item_si(us, it.at(1));
        cs.equil.woc_depth = item_si(us, it.at(2));
        cs.equil.pcow_woc = item_si(us, it.at(3));
        cs.equil.goc_depth = item_si(us, it.at(4));
        cs.equil.pcog_goc = item_si(us, it.at(5));
        if (cs.equil.goc_depth > cs.equil.woc_depth) {
            throw located(eq, "gas-oil contact must lie above the water-oil contact");
        }
    }

    // ---- SUMMARY -----------------------------------------------------------
    std::vector<std::pair<std::string, std::string>> summary_raw; // (kw, well or "*")
    static const char* well_vectors[] = {"WBHP", "WOPR", "WWPR", "WGPR", "WGOR", "WWIR", "WGIR"};
    for (const char* v : well_vectors) {
        for (const auto* kw : deck.all(v)) {
            const auto& items = kw->records.at(0).items;
            if (items.empty()) {
                summary_raw.emplace_back(v, "*");
            } else {
                for (const auto& it : items) {
                    summary_raw.emplace_back(v, it.sval);
                }
            }
        }
    }
    if (deck.has("FOPR")) {
        summary_raw.emplace_back("FOPR", "");
    }
    if (deck.has("FPR")) {
        summary_raw.emplace_back("FPR", "");
    }

    // ---- SCHEDULE ------------------------------------------------------------
    std::vector<case_detail::WorkingWell> wells; // definition order
    const auto well_index = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < wells.size(); ++i) {
            if (wells[i].snap.name == name) {
                return static_cast<int>(i);
            }
        }
        return -1;
    };

    for (const auto& kw : deck.keywords) {
        if (kw.name == "WELSPECS") {
            for (const auto& rec : kw.records) {
                const auto& it = rec.items;
                const std::string name = it.at(0).sval;
                int idx = well_index(name);
                if (idx < 0) {
                    wells.push_back({});
                    idx = static_cast<int>(wells.size()) - 1;
                    wells[idx].snap.name = name;
                }
                auto& w = wells[idx];
                w.snap.head_i = static_cast<int>(it.at(2).ival) - 1;
                w.snap.head_j = static_cast<int>(it.at(3).ival) - 1;
                if (w.snap.head_i < 0 || w.snap.head_i >= nx || w.snap.head_j < 0
                    || w.snap.head_j >= ny) {
                    throw DeckError(kw.file, rec.line, "WELSPECS: head position of '" + name
                                    + "' outside the grid");
                }
                const double rd = item_si(us, it.at(4));
                w.ref_depth_defaulted = it.at(4).defaulted;
                w.snap.ref_depth = rd;
            }
        } else if (kw.name == "COMPDAT") {
            for (const auto& rec : kw.records) {
                const auto& it = rec.items;
                const std::string name = it.at(0).sval;
                const int idx = well_index(name);
                if (idx < 0) {
                    throw DeckError(kw.file, rec.line,
                                    "COMPDAT for undefined well '" + name + "'");
                }
                auto& w = wells[idx];
                int ci = static_cast<int>(it.at(1).ival);
                int cj = static_cast<int>(it.at(2).ival);
                if (ci <= 0) {
                    ci = w.snap.head_i + 1;
                }
                if (cj <= 0) {
                    cj = w.snap.head_j + 1;
                }
                const int k1 = static_cast<int>(it.at(3).ival);
                const int k2 = static_cast<int>(it.at(4).ival);
                const std::string status = it.at(5).sval;
                if (it.at(7).defaulted) {
                    throw DeckError(kw.file, rec.line,
                                    "COMPDAT: connection transmissibility factor is required");
                }
                const double wi = item_si(us, it.at(7));
                if (ci < 1 || ci > nx || cj < 1 || cj > ny || k1 < 1 || k2 < k1 || k2 > nz) {
                    throw DeckError(kw.file, rec.line, "COMPDAT: cell range out of grid");
                }
                for (int k = k1; k <= k2; ++k) {
                    const int cell = cs.grid.active(ci - 1, cj - 1, k - 1);
                    if (cell < 0) {
                        throw DeckError(kw.file, rec.line,
                                        "COMPDAT: connection in inactive cell ("
                                        + std::to_string(ci) + "," + std::to_string(cj) + ","
                                        + std::to_string(k) + ")");
                    }
                    auto& conns = w.snap.connections;
                    const auto existing = std::find_if(conns.begin(), conns.end(),
                                                       [&](const WellConnDef& c) {
                                                           return c.cell == cell;
                                                       });
                    if (status == "SHUT") {
                        if (existing != conns.end()) {
                            conns.erase(existing);
                        }
                        continue;
                    }
                    WellConnDef def;
                    def.cell = cell;
                    def.wi = wi;
                    def.depth = cs.grid.depth[cell];
                    if (existing != conns.end()) {
                        *existing = def; // later keyword overrides
                    } else {
                        conns.push_back(def);
                    }
                }
            }
        } else if (kw.name == "WCONPROD") {
            for (const auto& rec : kw.records) {
                const auto& it = rec.items;
                const int idx = well_index(it.at(0).sval);
                if (idx < 0) {
                    throw DeckError(kw.file, rec.line,
                                    "WCONPROD for undefined well '" + it.at(0).sval + "'");
                }
                auto& w = wells[idx];
                w.snap.type = WellType::producer;
                const std::string status = it.at(1).sval;
                w.snap.status = status == "OPEN" ? WellStatus::open : WellStatus::shut;
                const std::string mode = it.at(2).sval;
                const double orat = item_si(us, it.at(3));
                const double wrat = item_si(us, it.at(4));
                const double grat = item_si(us, it.at(5));
                if (!it.at(6).defaulted || !it.at(7).defaulted) {
                    throw DeckError(kw.file, rec.line, "WCONPROD: LRAT/RESV not supported");
                }
                WellControl ctl;
                ctl.bhp_value = item_si(us, it.at(8));
                if (mode == "ORAT" || mode == "WRAT" || mode == "GRAT") {
                    ctl.mode = ControlMode::rate;
                    ctl.rate_component = mode == "ORAT" ? comp_oil
                                        : mode == "WRAT" ? comp_water
                                                         : comp_gas;
                    ctl.rate_value = mode == "ORAT" ? orat : mode == "WRAT" ? wrat : grat;
                } else if (mode == "BHP") {
                    ctl.mode = ControlMode::bhp;
                    // any given rate acts as a limit for switching back
                    if (orat > 0) {
                        ctl.rate_component = comp_oil;
                        ctl.rate_value = orat;
                    } else if (wrat > 0) {
                        ctl.rate_component = comp_water;
                        ctl.rate_value = wrat;
                    } else if (grat > 0) {
                        ctl.rate_component = comp_gas;
                        ctl.rate_value = grat;
                    } else {
                        ctl.rate_component = comp_oil;
                        ctl.rate_value = 1.0e30;
                    }
                } else {
                    throw DeckError(kw.file, rec.line,
                                    "WCONPROD: unsupported control mode '" + mode + "'");
                }
                w.snap.control = ctl;
                w.snap.has_control = true;
            }
        } else if (kw.name == "WCONINJE") {
            for (const auto& rec : kw.records) {
                const auto& it = rec.items;
                const int idx = well_index(it.at(0).sval);
                if (idx < 0) {
                    throw DeckError(kw.file, rec.line,
                                    "WCONINJE for undefined well '" + it.at(0).sval + "'");
                }
                auto& w = wells[idx];
                w.snap.type = WellType::injector;
                const std::string type = it.at(1).sval;
                if (type == "WATER" || type == "WAT") {
                    w.snap.injected = InjectedPhase::water;
                } else if (type == "GAS") {
                    w.snap.injected = InjectedPhase::gas;
                } else {
                    throw DeckError(kw.file, rec.line,
                                    "WCONINJE: unsupported injected phase '" + type + "'");
                }
                const std::string status = it.at(2).sval;
                w.snap.status = status == "OPEN" ? WellStatus::open : WellStatus::shut;
                const std::string mode = it.at(3).sval;
                const Dim rate_dim = w.snap.injected == InjectedPhase::gas ? Dim::gas_rate
                                                                           : Dim::liquid_rate;
                const double rate = it.at(4).si_value ? it.at(4).rval
                                                      : us.to_si(rate_dim, it.at(4).rval);
                if (!it.at(5).defaulted) {
                    throw DeckError(kw.file, rec.line, "WCONINJE: RESV control not supported");
                }
                WellControl ctl;
                ctl.rate_component = w.snap.injected == InjectedPhase::gas ? comp_gas : comp_water;
                ctl.bhp_value = item_si(us, it.at(6));
                if (mode == "RATE") {
                    ctl.mode = ControlMode::rate;
                    ctl.rate_value = -rate; // injection is negative internally
                } else if (mode == "BHP") {
                    ctl.mode = ControlMode::bhp;
                    ctl.rate_value = rate > 0 ? -rate : -1.0e30;
                } else {
                    throw DeckError(kw.file, rec.line,
                                    "WCONINJE: unsupported control mode '" + mode + "'");
                }
                w.snap.control = ctl;
                w.snap.has_control = true;
            }
        } else if (kw.name == "TSTEP") {
            for (const auto& item : kw.records.at(0).items) {
                ReportStep step;
                step.duration = item_si(us, item);
                if (!(step.duration > 0)) {
                    throw located(kw, "TSTEP values must be positive");
                }
                for (auto& w : wells) {
                    if (w.snap.open()) {
                        if (!w.snap.has_control) {
                            throw located(kw, "well '" + w.snap.name
                                          + "' is OPEN without a control");
                        }
                        if (w.snap.connections.empty()) {
                            throw located(kw, "well '" + w.snap.name
                                          + "' is OPEN without connections");
                        }
                        if (w.ref_depth_defaulted) {
                            w.snap.ref_depth = w.snap.connections.front().depth;
                            w.ref_depth_defaulted = false;
                        }
                    }
                    step.wells.push_back(w.snap);
                }
                cs.schedule.push_back(std::move(step));
            }
        }
    }

    // expand SUMMARY well wildcards in well definition order
    for (const auto& [vec, well] : summary_raw) {
        if (well == "*") {
            for (const auto& w : wells) {
                cs.summary.push_back({vec, w.snap.name});
            }
        } else {
            cs.summary.push_back({vec, well});
        }
    }
    return cs;
}

inline std::string SimCase::describe() const
{
    std::ostringstream os;
    char buf[128];
    os << "units " << units.name() << "\n";
    os << "phases OIL WATER GAS" << (disgas ? " DISGAS" : "") << "\n";
    os << "grid " << grid.nx << "x" << grid.ny << "x" << grid.nz << " active "
       << grid.num_active() << " connections " << grid.connections.size() << "\n";
    os << "oil pvt " << (pvt.oil.is_live() ? "live" : "dead") << "\n";
    os << "satfunc swco " << sat.connate_water() << " swmax " << sat.max_water() << " sgmax "
       << sat.max_gas() << "\n";
    std::snprintf(buf, sizeof buf, "equil datum %.6g p %.6g woc %.6g goc %.6g\n",
                  equil.datum_depth, equil.datum_pressure, equil.woc_depth, equil.goc_depth);
    os << buf;
    os << "summary";
    for (const auto& s : summary) {
        os << " " << s.keyword << (s.well.empty() ? "" : ":" + s.well);
    }
    os << "\n";
    os << "schedule " << schedule.size() << " report steps\n";
    for (std::size_t r = 0; r < schedule.size(); ++r) {
        const auto& st = schedule[r];
        std::snprintf(buf, sizeof buf, "step %zu days %.6g\n", r + 1, st.duration / unit::day);
        os << buf;
        for (const auto& w : st.wells) {
            os << "  well " << w.name << (w.type == WellType::producer ? " PROD" : " INJ")
               << (w.open() ? " OPEN" : " SHUT");
            if (w.has_control) {
                if (w.control.mode == ControlMode::bhp) {
                    std::snprintf(buf, sizeof buf, " BHP target %.6g Pa", w.control.bhp_value);
                } else {
                    std::snprintf(buf, sizeof buf, " RATE %s target %.6g m3/s (bhp limit %.6g Pa)",
                                  component_name(w.control.rate_component),
                                  w.control.rate_value, w.control.bhp_value);
                }
                os << buf;
            }
            os << " conns " << w.connections.size() << "\n";
        }
    }
    return os.str();
}

} // namespace bos
