#ifndef PLATEFORGE_OPTIMIZE_HPP
#define PLATEFORGE_OPTIMIZE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "plateforge/eigen.hpp"
#include "plateforge/grid.hpp"
#include "plateforge/operator.hpp"

namespace plateforge {

// Parameters of the penalized problem: minimize the first eigenvalue of
// bilap + alpha * chi_S over sets S of measure `area`.
struct GParams {
    double alpha = 0.0;
    double area = 0.0;
    BoundaryCondition bc = BoundaryCondition::Navier;
};

// Parameters of the composite plate problem: densities between rho_min and
// rho_max with prescribed total mass.
struct CPParams {
    double rho_min = 0.0;
    double rho_max = 0.0;
    double mass = 0.0;
    BoundaryCondition bc = BoundaryCondition::Navier;
};

// Relaxed set indicator. eta is 1 on {u^2 < t}, 0 on {u^2 > t}, and carries
// one uniform fraction on the tie set {u^2 = t} so the measure is exactly
// `area`.
struct Indicator {
    std::vector<double> eta;
    double threshold = 0.0;  // t, in u^2 units
    double area = 0.0;       // prescribed measure
};

struct OptimalPair {
    StateField u;
    Indicator indicator;
    double eigenvalue = 0.0;        // Lambda (G mode) or Theta (CP mode)
    std::vector<double> rho;        // CP mode only: rho_min*eta + rho_max*(1-eta)
    int iterations = 0;
    bool converged = false;
    int restart_index = -1;         // which start won (0 = supplied warm start)
    double residual = 0.0;          // eigen residual of the final solve
    std::vector<double> objective_history;  // non-increasing
};

struct SolveOptions {
    double tol = 1e-8;        // relative objective change across outer iterations
    int max_outer = 500;
    double eig_tol = 1e-10;
    int eig_max_iter = 10000;
    int restarts = 5;         // seeded random initial indicators
    std::uint64_t seed = 1;
    int threads = 0;          // 0 = auto; restarts run in parallel
    const Indicator* initial = nullptr;  // optional extra start (restart index 0)
};

// Thrown when the alternating minimization hits max_outer; carries the best
// iterate found.
struct OptimizeIterationLimitError : Error {
    OptimalPair best;
    explicit OptimizeIterationLimitError(OptimalPair b)
        : Error("alternating minimization: outer iteration limit reached"), best(std::move(b)) {}
};

// Minimizes sum(eta_i u_i^2 m_i) over {0 <= eta <= 1, sum(eta_i m_i) = area}
// by filling the sub-level set of u^2. Threshold ties are broken
// deterministically: the tie set receives one uniform fraction, and all mass
// sums are taken in cell-index order so equal inputs give bit-equal outputs.
Indicator bathtub_rearrange(std::span<const double> cell_measure, std::span<const double> u_values,
                            double area);
Indicator bathtub_rearrange(const Grid& grid, const StateField& u, double area);

// Alternating minimization for the penalized problem: eigen solve with the
// current indicator, then bathtub rearrangement on u^2, until the indicator
// is unchanged twice in a row and the eigenvalue has settled. Returns the
// best pair over the seeded restarts (ties by restart index).
OptimalPair solve_g(const Grid& grid, const SparseOperator& K, const DiagonalWeight& mass,
                    const GParams& params, const SolveOptions& opts = {});
OptimalPair solve_g(const Grid& grid, const GParams& params, const SolveOptions& opts = {});

// Alternating minimization for the composite plate problem on the pencil
// (K, M_rho). The set constraint is area = (rho_max |Omega|_h - mass) /
// (rho_max - rho_min); the converged density is two-valued off the tie set.
OptimalPair solve_cp(const Grid& grid, const SparseOperator& K, const CPParams& params,
                     const SolveOptions& opts = {});
OptimalPair solve_cp(const Grid& grid, const CPParams& params, const SolveOptions& opts = {});

// Parameter translations between the two problems.
GParams cp_to_g(const CPParams& cp, double theta, double omega_h);
double g_lambda_from_theta(double theta, double rho_max);
double cp_area(const CPParams& cp, double omega_h);

// First eigenvalue of the plain bilaplacian pencil (unit density).
double mu_omega(const Grid& grid, BoundaryCondition bc, double eig_tol = 1e-10);

struct AlphaBarResult {
    double alpha_bar = 0.0;
    double lambda_at_alpha_bar = 0.0;     // one extra evaluation at the fixed point
    std::vector<double> history;          // alpha_0, alpha_1, ...
    std::vector<double> ratios;           // |d_{k+1}| / |d_k| between increments
    int iterations = 0;
    bool converged = false;
};

// Banach fixed point of alpha -> Lambda(alpha, area), started at mu(Omega).
// The map contracts with ratio area/|Omega|_h. Requires area < |Omega|_h.
AlphaBarResult find_alpha_bar(const Grid& grid, double area, BoundaryCondition bc,
                              const SolveOptions& opts = {}, double fp_tol = 1e-7,
                              int fp_max_iter = 100);

// Validates CP parameters against the grid measure; throws DomainError.
void validate_cp_params(const CPParams& params, double omega_h);

}  // namespace plateforge

#endif
