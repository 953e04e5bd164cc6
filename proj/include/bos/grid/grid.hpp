#pragma once

#include <bos/common/error.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace bos {

using Point3 = std::array<double, 3>;

/// Diagonal permeability tensor, SI (m^2).
struct PermTensor {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
};

struct RockProps {
    std::vector<PermTensor> perm;  // per active cell
    std::vector<double> poro_ref;  // reference porosity per active cell
    double rock_compressibility = 0.0; // 1/Pa
    double rock_ref_pressure = 0.0;    // Pa
};

/// Cell-to-cell connection; the transmissibility is the symmetric
/// harmonic combination of the two half-transmissibilities, stored once.
struct Connection {
    int cell_i = -1;           // active-cell index
    int cell_j = -1;
    double trans = 0.0;        // m^3
    double depth_diff = 0.0;   // z_i - z_j, m
};

/// Cartesian grid with per-cell sizes and depths. Cells are indexed
/// i + nx*(j + ny*k); only active cells carry an active index. Columns
/// stack downward in z starting from the per-column tops depth.
class Grid {
public:
    int nx = 0, ny = 0, nz = 0;

    // per active cell
    std::vector<double> volume;      // m^3
    std::vector<double> depth;       // cell-center depth, m
    std::vector<Point3> centroid;    // (x, y, depth)
    std::vector<double> dx, dy, dz;  // m
    std::vector<int> cartesian_index;

    std::vector<int> active_index;   // per cartesian cell; -1 if inactive
    std::vector<Connection> connections;

    // full cartesian geometry kept for writers (per cartesian cell / column)
    std::vector<double> cart_dx, cart_dy, cart_dz;
    std::vector<double> cart_tops;

    std::size_t num_active() const { return volume.size(); }
    std::size_t num_cartesian() const { return static_cast<std::size_t>(nx) * ny * nz; }

    int cart(int i, int j, int k) const { return i + nx * (j + ny * k); }

    /// Active index of (i,j,k); -1 when inactive.
    int active(int i, int j, int k) const { return active_index[cart(i, j, k)]; }

    std::array<int, 3> ijk(int cart_idx) const
    {
        const int i = cart_idx % nx;
        const int j = (cart_idx / nx) % ny;
        const int k = cart_idx / (nx * ny);
        return {i, j, k};
    }
};

/// Explicit non-neighbor connection carrying a user-given transmissibility.
struct Nnc {
    int cart_a = -1;
    int cart_b = -1;
    double trans = 0.0; // m^3
};

/// Half-transmissibility of a cell with respect to one of its faces:
///   t = |F| * (K (c_f - c)) . n / |c_f - c|^2
/// with face area |F|, cell centroid c, face centroid c_f, and outward
/// unit normal n.
inline double half_transmissibility(const Point3& cell_centroid,
                                    const PermTensor& k,
                                    const Point3& face_centroid,
                                    const Point3& unit_normal,
                                    double face_area)
{
    const double dx = face_centroid[0] - cell_centroid[0];
    const double dy = face_centroid[1] - cell_centroid[1];
    const double dz = face_centroid[2] - cell_centroid[2];
    const double dist2 = dx * dx + dy * dy + dz * dz;
    if (dist2 <= 0.0) {
        throw GeometryError("half_transmissibility: face centroid coincides with cell centroid");
    }
    const double kd_n = k.kx * dx * unit_normal[0]
                      + k.ky * dy * unit_normal[1]
                      + k.kz * dz * unit_normal[2];
    return face_area * kd_n / dist2;
}

/// Harmonic combination of two half-transmissibilities; 0/0 is 0.
inline double combine_transmissibility(double t_ij, double t_ji)
{
    const double s = t_ij + t_ji;
    if (s <= 0.0) {
        return 0.0;
    }
    return t_ij * t_ji / s;
}

struct CartesianGridInput {
    int nx = 0, ny = 0, nz = 0;
    std::vector<double> dx, dy, dz;  // per cartesian cell, m
    std::vector<double> tops;        // per column (nx*ny), depth of top face, m
    std::vector<int> actnum;         // per cartesian cell; empty means all active
};

/// Build geometry: centroids, volumes, depths, and the active map.
/// Connections are not created here; call connect_cells with the rock
/// permeabilities afterwards.
inline Grid build_cartesian(const CartesianGridInput& in)
{
    if (in.nx <= 0 || in.ny <= 0 || in.nz <= 0) {
        throw ConfigError("grid dimensions must be positive");
    }
    const std::size_t ncart = static_cast<std::size_t>(in.nx) * in.ny * in.nz;
    if (in.dx.size() != ncart || in.dy.size() != ncart || in.dz.size() != ncart) {
        throw ConfigError("grid size arrays must have nx*ny*nz entries");
    }
    if (in.tops.size() != static_cast<std::size_t>(in.nx) * in.ny) {
        throw ConfigError("tops must have nx*ny entries");
    }
    if (!in.actnum.empty() && in.actnum.size() != ncart) {
        throw ConfigError("actnum must have nx*ny*nz entries");
    }
    for (std::size_t c = 0; c < ncart; ++c) {
        if (!(in.dx[c] > 0) || !(in.dy[c] > 0) || !(in.dz[c] > 0)) {
            throw ConfigError("cell sizes must be positive");
        }
    }

    Grid g;
    g.nx = in.nx;
    g.ny = in.ny;
    g.nz = in.nz;
    g.active_index.assign(ncart, -1);

    for (int k = 0; k < in.nz; ++k) {
        for (int j = 0; j < in.ny; ++j) {
            for (int i = 0; i < in.nx; ++i) {
                const int c = g.cart(i, j, k);
                if (!in.actnum.empty() && in.actnum[c] == 0) {
                    continue;
                }
                // x/y positions accumulate along the row/column of sizes;
                // depth accumulates down the column from tops.
                double x0 = 0.0;
                for (int ii = 0; ii < i; ++ii) {
                    x0 += in.dx[g.cart(ii, j, k)];
                }
                double y0 = 0.0;
                for (int jj = 0; jj < j; ++jj) {
                    y0 += in.dy[g.cart(i, jj, k)];
                }
                double ztop = in.tops[i + in.nx * j];
                for (int kk = 0; kk < k; ++kk) {
                    ztop += in.dz[g.cart(i, j, kk)];
                }
                const double cdx = in.dx[c];
                const double cdy = in.dy[c];
                const double cdz = in.dz[c];

                g.active_index[c] = static_cast<int>(g.volume.size());
                g.cartesian_index.push_back(c);
                g.volume.push_back(cdx * cdy * cdz);
                g.depth.push_back(ztop + 0.5 * cdz);
                g.centroid.push_back({x0 + 0.5 * cdx, y0 + 0.5 * cdy, ztop + 0.5 * cdz});
                g.dx.push_back(cdx);
                g.dy.push_back(cdy);
                g.dz.push_back(cdz);
            }
        }
    }
    return g;
}

namespace detail {

inline Connection make_lattice_connection(const Grid& g, const RockProps& rock,
                                          int a, int b, int axis)
{
    // Face between two axis-neighbors: centroid halfway along the axis,
    // area from the transverse cell sizes of each side.
    const Point3& ca = g.centroid[a];
    const Point3& cb = g.centroid[b];
    Point3 normal{0, 0, 0};
    normal[axis] = 1.0;

    const auto face_of = [&](int cell, double sign) {
        Point3 f = g.centroid[cell];
        const double half = 0.5 * (axis == 0 ? g.dx[cell] : axis == 1 ? g.dy[cell] : g.dz[cell]);
        f[axis] += sign * half;
        return f;
    };

    const auto area_of = [&](int cell) {
        switch (axis) {
        case 0: return g.dy[cell] * g.dz[cell];
        case 1: return g.dx[cell] * g.dz[cell];
        default: return g.dx[cell] * g.dy[cell];
        }
    };

    const double t_a = half_transmissibility(ca, rock.perm[a], face_of(a, +1.0), normal, area_of(a));
    Point3 neg_normal{0, 0, 0};
    neg_normal[axis] = -1.0;
    const double t_b = half_transmissibility(cb, rock.perm[b], face_of(b, -1.0), neg_normal, area_of(b));

    Connection conn;
    conn.cell_i = a;
    conn.cell_j = b;
    conn.trans = combine_transmissibility(t_a, t_b);
    conn.depth_diff = g.depth[a] - g.depth[b];
    return conn;
}

} // namespace detail

/// Populate the connection list: lattice adjacency of active cells plus
/// explicit NNCs. NNC transmissibilities are taken as given; an NNC that
/// duplicates a lattice connection replaces its transmissibility.
inline void connect_cells(Grid& g, const RockProps& rock, const std::vector<Nnc>& nncs = {})
{
    g.connections.clear();
    for (int k = 0; k < g.nz; ++k) {
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const int a = g.active(i, j, k);
                if (a < 0) {
                    continue;
                }
                const int neighbors[3] = {
                    i + 1 < g.nx ? g.active(i + 1, j, k) : -1,
                    j + 1 < g.ny ? g.active(i, j + 1, k) : -1,
                    k + 1 < g.nz ? g.active(i, j, k + 1) : -1,
                };
                for (int axis = 0; axis < 3; ++axis) {
                    const int b = neighbors[axis];
                    if (b >= 0) {
                        g.connections.push_back(detail::make_lattice_connection(g, rock, a, b, axis));
                    }
                }
            }
        }
    }
    for (const auto& nnc : nncs) {
        const int a = g.active_index.at(nnc.cart_a);
        const int b = g.active_index.at(nnc.cart_b);
        if (a < 0 || b < 0) {
            throw ConfigError("NNC references an inactive cell");
        }
        if (a == b) {
            throw ConfigError("NNC connects a cell to itself");
        }
        bool replaced = false;
        for (auto& c : g.connections) {
            if ((c.cell_i == a && c.cell_j == b) || (c.cell_i == b && c.cell_j == a)) {
                c.trans = nnc.trans;
                replaced = true;
                break;
            }
        }
        if (!replaced) {
            Connection c;
            c.cell_i = a;
            c.cell_j = b;
            c.trans = nnc.trans;
            c.depth_diff = g.depth[a] - g.depth[b];
            g.connections.push_back(c);
        }
    }
}

/// Pore-volume multiplier, linear in pressure:  m_phi = 1 + c_r (p - p_ref).
/// Templated so AD numbers carry the pressure derivative through.
template <class Value>
Value pore_volume_multiplier(const Value& pressure, const RockProps& rock)
{
    return (pressure - rock.rock_ref_pressure) * rock.rock_compressibility + 1.0;
}

} // namespace bos
