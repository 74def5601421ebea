#ifndef PLATEFORGE_OPERATOR_HPP
#define PLATEFORGE_OPERATOR_HPP

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "plateforge/grid.hpp"

namespace plateforge {

enum class BoundaryCondition {
    Navier,    // hinged: u = lap u = 0
    Dirichlet  // clamped: u = du/dnu = 0
};

const char* boundary_condition_name(BoundaryCondition bc);

// Rectangular factor of a quadratic form: K = A^T diag(d) A with d >= 0.
// Keeping the factor around lets u^T K u evaluate as a sum of squares, free
// of the cancellation that dot(K u, u) suffers on stiff fourth-order pencils.
struct EnergyFactor {
    int rows = 0, cols = 0;
    std::vector<int> row_ptr;  // size rows+1
    std::vector<int> col;
    std::vector<double> val;
    std::vector<double> d;  // per-row weights, all >= 0
};

// Symmetric sparse matrix in CSR form (both triangles stored, rows sorted).
// All assembled operators are measure-weighted: u^T K u approximates the
// integral quadratic form, and eigenproblems are posed as pencils (K, M).
struct SparseOperator {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col;
    std::vector<double> val;

    // Optional factored form: K = energy + diag(energy_shift).
    std::shared_ptr<const EnergyFactor> energy;
    std::vector<double> energy_shift;

    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    // u^T K u; uses the factored form when available.
    double quadratic_form(std::span<const double> u) const;

    double entry(int i, int j) const;          // 0 if not stored
    double max_asymmetry() const;              // max |K_ij - K_ji|
    int bandwidth() const;                     // max |i - j| over stored entries
    int nnz() const { return static_cast<int>(val.size()); }

    // K + alpha * diag(d). d entries must align with rows; the diagonal of K
    // must be structurally present (stencils always have it).
    SparseOperator plus_diagonal(double alpha, std::span<const double> d) const;

    // Builds from triplets, summing duplicates.
    static SparseOperator from_triplets(int n, std::vector<int> rows, std::vector<int> cols,
                                        std::vector<double> vals);
};

// Assembles K = A^T diag(d) A from the factor, accumulated on the upper
// triangle and mirrored, so the result is exactly symmetric entrywise. The
// factor is retained on the result for stable quadratic forms.
SparseOperator operator_from_energy(EnergyFactor factor);

// Convenience wrapper for a square factor matrix.
SparseOperator transpose_weighted_product(const SparseOperator& a, std::span<const double> d);

// Diagonal quadratic-form weight: entries values_i * cell_measure_i.
struct DiagonalWeight {
    std::vector<double> d;
    double quadratic_form(std::span<const double> u) const;
};

// Measure-weighted negative Laplacian (SPD):
//   square/disk: 5-point stencil, homogeneous Dirichlet on exterior sites;
//   radial: cell-centered finite volumes in the 2*pi*r dr inner product.
SparseOperator assemble_laplacian(const Grid& grid);

// Measure-weighted discrete bilaplacian.
//   Navier: K = L M^-1 L (the second-order splitting made exact on the mesh).
//   Dirichlet: 13-point stencil with mirror ghosts on the square and masked
//   disk; one-sided clamped wall row at r=1 on the radial grid.
SparseOperator assemble_bilaplacian(const Grid& grid, BoundaryCondition bc);

// Per-cell unit mass matrix, diag(cell_measure).
DiagonalWeight unit_mass(const Grid& grid);

// diag(values_i * cell_measure_i). Throws on negative entries and on an
// identically zero weight (the density class requires rho != 0).
DiagonalWeight assemble_weight(const Grid& grid, std::span<const double> values);

// Matrix Market coordinate format, symmetric, lower triangle, 1-based.
void write_matrix_market(const SparseOperator& op, std::ostream& out);

}  // namespace plateforge

#endif
