#ifndef PLATEFORGE_ANALYSIS_HPP
#define PLATEFORGE_ANALYSIS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "plateforge/optimize.hpp"

namespace plateforge {

struct PositivityReport {
    double min_value = 0.0;
    int min_cell = -1;
    bool positive = false;
};

// Minimum of u over interior cells after the sign convention.
PositivityReport check_positivity(const Grid& grid, const OptimalPair& pair);

struct SymmetryReport {
    std::vector<double> dihedral_defects;  // per symmetry map (masked disk)
    double max_dihedral_defect = 0.0;      // relative to max|u|
    double profile_scatter = 0.0;          // max deviation from the radial bin mean
    double annulus_mismatch = 0.0;         // |S symdiff {r > r(A)}| on the mesh
    std::vector<double> profile_radius;    // bin centers
    std::vector<double> profile_mean;      // bin-averaged u
    bool radially_nonincreasing = false;   // up to one bin at r=0 and the boundary band
    bool strict_decrease_across_interface = false;
};

// Radial diagnostics for disk pairs (RadialDisk profiles are exact bins).
SymmetryReport check_radial(const Grid& grid, const OptimalPair& pair);

struct BcComparison {
    double theta_navier = 0.0;
    double theta_dirichlet = 0.0;
    double difference = 0.0;  // theta_dirichlet - theta_navier
    double ratio = 0.0;       // theta_dirichlet / theta_navier
};

// Solves the composite problem under both boundary conditions on one grid.
BcComparison compare_bc(const Grid& grid, const CPParams& params, const SolveOptions& opts = {});

struct SweepRow {
    double param = 0.0;
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct SweepTable {
    std::string param_name;  // "alpha" or "area"
    std::vector<SweepRow> rows;
    bool monotone = false;           // strictly increasing (alpha) / non-decreasing (area)
    bool has_alpha_laws = false;     // the three verdicts below apply to alpha sweeps
    double max_slope = 0.0;
    double lipschitz_bound = 0.0;    // area / |Omega|_h
    bool lipschitz_ok = false;       // max_slope <= bound * 1.05
    bool lambda_minus_alpha_decreasing = false;
    bool sign_change = false;        // Lambda - alpha brackets the fixed point
};

SweepTable sweep_alpha(const Grid& grid, double area, std::vector<double> alphas,
                       BoundaryCondition bc, const SolveOptions& opts = {});
SweepTable sweep_area(const Grid& grid, double alpha, std::vector<double> areas,
                      BoundaryCondition bc, const SolveOptions& opts = {});

// Header row, comma separated, '.' decimal point.
void write_csv(const SweepTable& table, std::ostream& out);

struct DiskCrossValidation {
    int n1d = 0, n2d = 0;
    double lambda_radial = 0.0;
    double lambda_masked = 0.0;
    double relative_gap = 0.0;      // |masked - radial| / radial
    double profile_sup_diff = 0.0;  // sup |u_2d - interp(u_1d)| / max|u_1d|
    double annulus_mismatch = 0.0;  // on the masked grid, vs {r > r(A)}
};

// Solves the same disk problem on the radial oracle grid and the masked 2D
// grid and compares eigenvalue, profile, and set geometry.
DiskCrossValidation cross_validate_disk(const GParams& params, int n1d, int n2d,
                                        const SolveOptions& opts = {});
DiskCrossValidation cross_validate_disk(const CPParams& params, int n1d, int n2d,
                                        const SolveOptions& opts = {});

}  // namespace plateforge

#endif
