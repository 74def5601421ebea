#include "plateforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "plateforge/parallel.hpp"

namespace plateforge {

PositivityReport check_positivity(const Grid& grid, const OptimalPair& pair) {
    PositivityReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (int c = 0; c < grid.num_cells; ++c) {
        const double v = pair.u.values[static_cast<size_t>(c)];
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.min_cell = c;
        }
    }
    rep.positive = rep.min_value > 0.0;
    return rep;
}

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Interface radius for the shell {r(A) < |x| < 1}, clamped to the analytic
// disk measure so slightly-off discrete areas stay in range.
double interface_radius(double area) {
    return shell_radius(std::clamp(area, 0.0, std::numbers::pi));
}

}  // namespace

SymmetryReport check_radial(const Grid& grid, const OptimalPair& pair) {
    if (grid.domain.kind == DomainKind::UnitSquare)
        throw DomainError("check_radial: radial diagnostics apply to disk domains only");
    SymmetryReport rep;
    const auto& u = pair.u.values;
    const double umax = max_abs(u);
    const double scale = umax > 0.0 ? umax : 1.0;

    for (const auto& perm : grid.symmetry_maps) {
        double defect = 0.0;
        for (int c = 0; c < grid.num_cells; ++c)
            defect = std::max(defect, std::abs(u[static_cast<size_t>(c)] - u[static_cast<size_t>(perm[static_cast<size_t>(c)])]));
        rep.dihedral_defects.push_back(defect / scale);
        rep.max_dihedral_defect = std::max(rep.max_dihedral_defect, defect / scale);
    }

    // Radial bins of width h.
    const int nbins = static_cast<int>(std::ceil(1.0 / grid.h)) + 1;
    std::vector<double> sum(static_cast<size_t>(nbins), 0.0);
    std::vector<int> count(static_cast<size_t>(nbins), 0);
    auto bin_of = [&](double r) { return std::min(nbins - 1, static_cast<int>(r / grid.h)); };
    for (int c = 0; c < grid.num_cells; ++c) {
        const int b = bin_of(grid.radius(c));
        sum[static_cast<size_t>(b)] += u[static_cast<size_t>(c)];
        ++count[static_cast<size_t>(b)];
    }
    for (int b = 0; b < nbins; ++b) {
        if (count[static_cast<size_t>(b)] == 0) continue;
        rep.profile_radius.push_back((b + 0.5) * grid.h);
        rep.profile_mean.push_back(sum[static_cast<size_t>(b)] / count[static_cast<size_t>(b)]);
    }
    std::vector<int> bin_index(static_cast<size_t>(grid.num_cells));
    {
        std::vector<int> compact(static_cast<size_t>(nbins), -1);
        int k = 0;
        for (int b = 0; b < nbins; ++b)
            if (count[static_cast<size_t>(b)] > 0) compact[static_cast<size_t>(b)] = k++;
        for (int c = 0; c < grid.num_cells; ++c)
            bin_index[static_cast<size_t>(c)] = compact[static_cast<size_t>(bin_of(grid.radius(c)))];
    }
    for (int c = 0; c < grid.num_cells; ++c)
        rep.profile_scatter = std::max(
            rep.profile_scatter,
            std::abs(u[static_cast<size_t>(c)] - rep.profile_mean[static_cast<size_t>(bin_index[static_cast<size_t>(c)])]) / scale);

    // Non-increasing bin profile; one bin of slack at r=0 and the boundary band.
    const int nb = static_cast<int>(rep.profile_mean.size());
    rep.radially_nonincreasing = true;
    for (int b = 0; b + 1 < nb; ++b) {
        if (b == 0 || b + 1 >= nb - 2) continue;
        if (rep.profile_mean[static_cast<size_t>(b) + 1] > rep.profile_mean[static_cast<size_t>(b)] + 1e-9 * scale)
            rep.radially_nonincreasing = false;
    }

    const double rc = interface_radius(pair.indicator.area);
    double mismatch = 0.0;
    for (int c = 0; c < grid.num_cells; ++c) {
        const double shell = grid.radius(c) > rc ? 1.0 : 0.0;
        mismatch += grid.cell_measure[static_cast<size_t>(c)] *
                    std::abs(pair.indicator.eta[static_cast<size_t>(c)] - shell);
    }
    rep.annulus_mismatch = mismatch;

    // Strict drop across the S interface, one bin on each side.
    if (pair.indicator.area > 0.0 && nb >= 3) {
        int bc_bin = 0;
        for (int b = 0; b < nb; ++b)
            if (rep.profile_radius[static_cast<size_t>(b)] <= rc) bc_bin = b;
        const int lo = std::max(0, bc_bin - 1), hi = std::min(nb - 1, bc_bin + 1);
        rep.strict_decrease_across_interface =
            rep.profile_mean[static_cast<size_t>(lo)] > rep.profile_mean[static_cast<size_t>(hi)];
    }
    return rep;
}

BcComparison compare_bc(const Grid& grid, const CPParams& params, const SolveOptions& opts) {
    CPParams navier = params, dirichlet = params;
    navier.bc = BoundaryCondition::Navier;
    dirichlet.bc = BoundaryCondition::Dirichlet;
    BcComparison cmp;
    cmp.theta_navier = solve_cp(grid, navier, opts).eigenvalue;
    cmp.theta_dirichlet = solve_cp(grid, dirichlet, opts).eigenvalue;
    cmp.difference = cmp.theta_dirichlet - cmp.theta_navier;
    cmp.ratio = cmp.theta_dirichlet / cmp.theta_navier;
    return cmp;
}

namespace {

SweepTable sweep_common(const Grid& grid, std::vector<double> params, bool alpha_sweep,
                        double fixed, BoundaryCondition bc, const SolveOptions& opts) {
    if (params.size() < 3) throw DomainError("sweep: at least 3 sample points required");
    std::sort(params.begin(), params.end());
    const SparseOperator K = assemble_bilaplacian(grid, bc);
    const DiagonalWeight mass = unit_mass(grid);

    SweepTable table;
    table.param_name = alpha_sweep ? "alpha" : "area";
    table.rows.resize(params.size());
    const int count = static_cast<int>(params.size());
    parallel_for(count, effective_threads(opts.threads, count), [&](int i) {
        GParams gp;
        gp.bc = bc;
        gp.alpha = alpha_sweep ? params[static_cast<size_t>(i)] : fixed;
        gp.area = alpha_sweep ? fixed : params[static_cast<size_t>(i)];
        SolveOptions o = opts;
        o.threads = 1;
        const OptimalPair pair = solve_g(grid, K, mass, gp, o);
        table.rows[static_cast<size_t>(i)] =
            SweepRow{params[static_cast<size_t>(i)], pair.eigenvalue, pair.iterations, pair.residual};
    });

    table.monotone = true;
    for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const double a = table.rows[i].lambda, b = table.rows[i + 1].lambda;
        if (alpha_sweep ? !(b > a) : b < a - 1e-9 * std::abs(a)) table.monotone = false;
    }
    if (alpha_sweep) {
        table.has_alpha_laws = true;
        table.lipschitz_bound = fixed / grid.omega_h;
        for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
            const double slope = (table.rows[i + 1].lambda - table.rows[i].lambda) /
                                 (table.rows[i + 1].param - table.rows[i].param);
            table.max_slope = std::max(table.max_slope, slope);
        }
        table.lipschitz_ok = table.max_slope <= table.lipschitz_bound * 1.05;
        table.lambda_minus_alpha_decreasing = true;
        for (size_t i = 0; i + 1 < table.rows.size(); ++i) {
            const double g0 = table.rows[i].lambda - table.rows[i].param;
            const double g1 = table.rows[i + 1].lambda - table.rows[i + 1].param;
            if (!(g1 < g0)) table.lambda_minus_alpha_decreasing = false;
        }
        const double first = table.rows.front().lambda - table.rows.front().param;
        const double last = table.rows.back().lambda - table.rows.back().param;
        table.sign_change = first > 0.0 && last < 0.0;
    }
    return table;
}

}  // namespace

SweepTable sweep_alpha(const Grid& grid, double area, std::vector<double> alphas,
                       BoundaryCondition bc, const SolveOptions& opts) {
    return sweep_common(grid, std::move(alphas), true, area, bc, opts);
}

SweepTable sweep_area(const Grid& grid, double alpha, std::vector<double> areas,
                      BoundaryCondition bc, const SolveOptions& opts) {
    return sweep_common(grid, std::move(areas), false, alpha, bc, opts);
}

void write_csv(const SweepTable& table, std::ostream& out) {
    out << table.param_name << ",lambda,iterations,residual\n";
    char buf[128];
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g\n", row.param, row.lambda,
                      row.iterations, row.residual);
        out << buf;
    }
}

namespace {

// Piecewise-linear radial profile, pinned to u(1) = 0.
double interp_profile(const Grid& radial, std::span<const double> u, double r) {
    const int n = radial.num_cells;
    const double h = radial.h;
    const double r0 = 0.5 * h;
    if (r <= r0) return u[0];
    const double rn = (n - 0.5) * h;
    if (r >= rn) {
        const double w = (1.0 - r) / (1.0 - rn);
        return w * u[static_cast<size_t>(n - 1)];
    }
    const double s = (r - r0) / h;
    const int i = std::min(n - 2, static_cast<int>(s));
    const double w = s - i;
    return (1.0 - w) * u[static_cast<size_t>(i)] + w * u[static_cast<size_t>(i) + 1];
}

DiskCrossValidation compare_disk_pairs(const Grid& radial, const OptimalPair& pr, const Grid& masked,
                                       const OptimalPair& pm) {
    DiskCrossValidation cv;
    cv.n1d = radial.domain.n;
    cv.n2d = masked.domain.n;
    cv.lambda_radial = pr.eigenvalue;
    cv.lambda_masked = pm.eigenvalue;
    cv.relative_gap = std::abs(pm.eigenvalue - pr.eigenvalue) / pr.eigenvalue;
    const double scale = max_abs(pr.u.values);
    for (int c = 0; c < masked.num_cells; ++c) {
        const double ref = interp_profile(radial, pr.u.values, masked.radius(c));
        cv.profile_sup_diff = std::max(
            cv.profile_sup_diff, std::abs(pm.u.values[static_cast<size_t>(c)] - ref) / scale);
    }
    const double rc = interface_radius(pm.indicator.area);
    for (int c = 0; c < masked.num_cells; ++c) {
        const double shell = masked.radius(c) > rc ? 1.0 : 0.0;
        cv.annulus_mismatch += masked.cell_measure[static_cast<size_t>(c)] *
                               std::abs(pm.indicator.eta[static_cast<size_t>(c)] - shell);
    }
    return cv;
}

}  // namespace

DiskCrossValidation cross_validate_disk(const GParams& params, int n1d, int n2d,
                                        const SolveOptions& opts) {
    const Grid radial = build_grid({DomainKind::RadialDisk, n1d});
    const Grid masked = build_grid({DomainKind::UnitDisk, n2d});
    GParams p1 = params, p2 = params;
    // The prescribed area is interpreted as a fraction of each grid's measure
    // so the constraint is consistent on both meshes.
    const double frac = params.area / std::numbers::pi;
    p1.area = frac * radial.omega_h;
    p2.area = frac * masked.omega_h;
    const OptimalPair pr = solve_g(radial, p1, opts);
    const OptimalPair pm = solve_g(masked, p2, opts);
    return compare_disk_pairs(radial, pr, masked, pm);
}

DiskCrossValidation cross_validate_disk(const CPParams& params, int n1d, int n2d,
                                        const SolveOptions& opts) {
    const Grid radial = build_grid({DomainKind::RadialDisk, n1d});
    const Grid masked = build_grid({DomainKind::UnitDisk, n2d});
    CPParams p1 = params, p2 = params;
    const double frac = params.mass / std::numbers::pi;
    p1.mass = frac * radial.omega_h;
    p2.mass = frac * masked.omega_h;
    const OptimalPair pr = solve_cp(radial, p1, opts);
    const OptimalPair pm = solve_cp(masked, p2, opts);
    return compare_disk_pairs(radial, pr, masked, pm);
}

}  // namespace plateforge
