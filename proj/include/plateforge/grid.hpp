#ifndef PLATEFORGE_GRID_HPP
#define PLATEFORGE_GRID_HPP

#include <array>
#include <span>
#include <vector>

namespace plateforge {

enum class DomainKind {
    UnitSquare,  // (0,1)^2, node-centered interior lattice
    UnitDisk,    // {|x|<1}, masked Cartesian cells
    RadialDisk   // {|x|<1} reduced to the 1D radial profile
};

struct Domain {
    DomainKind kind = DomainKind::UnitSquare;
    int n = 0;  // cells (or nodes+1) per side; radial cells for RadialDisk
};

const char* domain_kind_name(DomainKind kind);

// Discretized domain. Cells are indexed 0..num_cells-1; the lattice maps
// translate between structured (i,j) coordinates and cell indices.
// Immutable after build_grid; safe to share across threads.
struct Grid {
    Domain domain;
    double h = 0.0;       // grid spacing
    int num_cells = 0;    // N
    double omega_h = 0.0; // discrete measure |Omega|_h = sum of cell measures

    int nx = 0, ny = 0;                        // lattice extents (ny=1 for radial)
    std::vector<int> lattice_to_cell;          // size nx*ny, -1 for exterior sites
    std::vector<std::array<int, 2>> cell_to_lattice;
    std::vector<std::array<double, 2>> cell_center;  // (x,y); (r,0) for radial
    std::vector<double> cell_measure;
    std::vector<bool> boundary_adjacent;  // a 4-neighbour (or radial neighbour) is exterior

    // Index permutations induced by the 8 dihedral symmetries of the masked
    // disk lattice (UnitDisk only; empty otherwise). symmetry_maps[0] = identity.
    std::vector<std::vector<int>> symmetry_maps;

    int cell_at(int i, int j) const { return lattice_to_cell[static_cast<size_t>(j) * nx + i]; }
    bool in_lattice(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    double radius(int cell) const;  // |x| of the cell center
};

// Builds the discrete domain. Throws ConfigError when domain.n < 4.
Grid build_grid(const Domain& domain);

// Integral of an indicator (per-cell fraction in [0,1]) against the cell
// measures. Throws DimensionError on length mismatch, DomainError when an
// entry falls outside [0,1].
double measure_of_set(const Grid& grid, std::span<const double> indicator);

// Inner radius r(A) of the shell {r(A) < |x| < 1} of prescribed measure A
// in the unit disk: pi*(1 - r^2) = A. Throws DomainError unless 0 <= A <= pi.
double shell_radius(double area);

}  // namespace plateforge

#endif
