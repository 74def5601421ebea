#include "plateforge/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "plateforge/errors.hpp"

namespace plateforge {

const char* domain_kind_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::UnitSquare: return "square";
        case DomainKind::UnitDisk: return "disk";
        case DomainKind::RadialDisk: return "radial-disk";
    }
    return "?";
}

double Grid::radius(int cell) const {
    const auto& c = cell_center[static_cast<size_t>(cell)];
    return std::sqrt(c[0] * c[0] + c[1] * c[1]);
}

namespace {

// The 8 dihedral lattice maps of an n x n block, as (i,j) -> (i',j').
std::array<int, 2> dihedral_map(int op, int i, int j, int n) {
    const int m = n - 1;
    switch (op) {
        case 0: return {i, j};
        case 1: return {j, m - i};          // rotate 90
        case 2: return {m - i, m - j};      // rotate 180
        case 3: return {m - j, i};          // rotate 270
        case 4: return {m - i, j};          // mirror x
        case 5: return {i, m - j};          // mirror y
        case 6: return {j, i};              // mirror diagonal
        default: return {m - j, m - i};     // mirror antidiagonal
    }
}

Grid build_square(int n) {
    Grid g;
    g.domain = {DomainKind::UnitSquare, n};
    g.h = 1.0 / n;
    g.nx = g.ny = n - 1;  // interior nodes only; the boundary layer carries u=0
    g.lattice_to_cell.assign(static_cast<size_t>(g.nx) * g.ny, -1);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.num_cells++;
            g.lattice_to_cell[static_cast<size_t>(j) * g.nx + i] = c;
            g.cell_to_lattice.push_back({i, j});
            g.cell_center.push_back({(i + 1) * g.h, (j + 1) * g.h});
            g.cell_measure.push_back(g.h * g.h);
            g.boundary_adjacent.push_back(i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1);
            g.omega_h += g.h * g.h;
        }
    }
    return g;
}

Grid build_disk(int n) {
    Grid g;
    g.domain = {DomainKind::UnitDisk, n};
    g.h = 2.0 / n;
    g.nx = g.ny = n;
    g.lattice_to_cell.assign(static_cast<size_t>(n) * n, -1);
    auto center = [&](int i) { return -1.0 + (i + 0.5) * g.h; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = center(i), y = center(j);
            if (x * x + y * y >= 1.0) continue;
            const int c = g.num_cells++;
            g.lattice_to_cell[static_cast<size_t>(j) * n + i] = c;
            g.cell_to_lattice.push_back({i, j});
            g.cell_center.push_back({x, y});
            g.cell_measure.push_back(g.h * g.h);
            g.omega_h += g.h * g.h;
        }
    }
    for (int c = 0; c < g.num_cells; ++c) {
        const auto [i, j] = g.cell_to_lattice[static_cast<size_t>(c)];
        bool adj = false;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (!g.in_lattice(ii, jj) || g.cell_at(ii, jj) < 0) adj = true;
        }
        g.boundary_adjacent.push_back(adj);
    }
    g.symmetry_maps.assign(8, std::vector<int>(static_cast<size_t>(g.num_cells)));
    for (int op = 0; op < 8; ++op) {
        for (int c = 0; c < g.num_cells; ++c) {
            const auto [i, j] = g.cell_to_lattice[static_cast<size_t>(c)];
            const auto [ii, jj] = dihedral_map(op, i, j, n);
            g.symmetry_maps[static_cast<size_t>(op)][static_cast<size_t>(c)] = g.cell_at(ii, jj);
        }
    }
    return g;
}

Grid build_radial(int n) {
    Grid g;
    g.domain = {DomainKind::RadialDisk, n};
    g.h = 1.0 / n;
    g.nx = n;
    g.ny = 1;
    g.lattice_to_cell.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * g.h;
        g.lattice_to_cell[static_cast<size_t>(i)] = i;
        g.cell_to_lattice.push_back({i, 0});
        g.cell_center.push_back({r, 0.0});
        g.cell_measure.push_back(2.0 * std::numbers::pi * r * g.h);  // annulus area
        g.boundary_adjacent.push_back(i == n - 1);
        g.omega_h += g.cell_measure.back();
    }
    g.num_cells = n;
    return g;
}

}  // namespace

Grid build_grid(const Domain& domain) {
    if (domain.n < 4)
        throw ConfigError("grid: n must be at least 4, got " + std::to_string(domain.n));
    switch (domain.kind) {
        case DomainKind::UnitSquare: return build_square(domain.n);
        case DomainKind::UnitDisk: return build_disk(domain.n);
        case DomainKind::RadialDisk: return build_radial(domain.n);
    }
    throw ConfigError("grid: unknown domain kind");
}

double measure_of_set(const Grid& grid, std::span<const double> indicator) {
    if (static_cast<int>(indicator.size()) != grid.num_cells)
        throw DimensionError("measure_of_set: indicator has " + std::to_string(indicator.size()) +
                             " entries, grid has " + std::to_string(grid.num_cells) + " cells");
    double s = 0.0;
    for (int c = 0; c < grid.num_cells; ++c) {
        const double v = indicator[static_cast<size_t>(c)];
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw DomainError("measure_of_set: indicator entry outside [0,1]");
        s += v * grid.cell_measure[static_cast<size_t>(c)];
    }
    return s;
}

double shell_radius(double area) {
    if (area < 0.0 || area > std::numbers::pi + 1e-12)
        throw DomainError("shell_radius: area must lie in [0, pi]");
    const double ratio = std::min(1.0, area / std::numbers::pi);
    return std::sqrt(1.0 - ratio);
}

}  // namespace plateforge
