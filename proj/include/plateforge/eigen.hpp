#ifndef PLATEFORGE_EIGEN_HPP
#define PLATEFORGE_EIGEN_HPP

#include <span>
#include <vector>

#include "plateforge/errors.hpp"
#include "plateforge/operator.hpp"

namespace plateforge {

// Per-cell state values (an eigenfunction sample).
struct StateField {
    std::vector<double> values;
    int size() const { return static_cast<int>(values.size()); }
};

// Banded Cholesky factorization of an SPD sparse operator. Construction
// throws FactorizationError on a non-positive pivot, which signals an
// assembly bug rather than a recoverable condition.
class Factorization {
public:
    explicit Factorization(const SparseOperator& op);

    std::vector<double> solve(std::span<const double> rhs) const;
    int dimension() const { return n_; }
    int bandwidth() const { return bw_; }

private:
    int n_ = 0, bw_ = 0;
    std::vector<double> band_;  // row-major lower band, band_[i*(bw+1) + (i-j)]

    double& at(int i, int j) { return band_[static_cast<size_t>(i) * (bw_ + 1) + (i - j)]; }
    double at(int i, int j) const { return band_[static_cast<size_t>(i) * (bw_ + 1) + (i - j)]; }
};

Factorization factorize(const SparseOperator& op);

struct EigenResult {
    // Smallest eigenvalue of the pencil (K + alpha D, M). For unit mass this
    // is 1/length^4; rho-weighted pencils carry the extra 1/density factor.
    double eigenvalue = 0.0;
    StateField u;           // M-normalized, sign fixed so sum(u_i M_i) > 0
    double residual = 0.0;  // ||K u - lambda M u|| / (max|diag K| * ||u||)
    int iterations = 0;
    std::vector<double> rayleigh_history;  // non-increasing by construction
};

struct EigenOptions {
    double tol = 1e-10;   // relative eigenvalue change and residual threshold
    int max_iter = 10000;
};

// Thrown when inverse iteration hits max_iter; carries the best iterate.
struct EigenIterationLimitError : Error {
    EigenResult best;
    explicit EigenIterationLimitError(EigenResult b)
        : Error("smallest_eigenpair: iteration limit reached"), best(std::move(b)) {}
};

// Smallest eigenpair of (K + alpha*diag(shift), M) by inverse power
// iteration with a single factorization. Deterministic: the start vector is
// u0 when given, all-ones otherwise. Rayleigh quotients decrease
// monotonically; a violation throws (it cannot happen for an SPD pencil).
EigenResult smallest_eigenpair(const SparseOperator& K, const DiagonalWeight* shift_weight,
                               double alpha, const DiagonalWeight& mass,
                               const StateField* u0 = nullptr, const EigenOptions& opts = {});

// Same iteration against a prefactored K_eff (pencil (K_eff, mass)); used by
// the composite solver, which keeps one factorization across density updates.
EigenResult smallest_eigenpair_prefactored(const SparseOperator& K_eff, const Factorization& f,
                                           const DiagonalWeight& mass, const StateField* u0 = nullptr,
                                           const EigenOptions& opts = {});

// (u^T K u + alpha u^T D u) / (u^T M u). Throws DomainError for u = 0.
double rayleigh(std::span<const double> u, const SparseOperator& K, double alpha,
                const DiagonalWeight* shift_weight, const DiagonalWeight& mass);

}  // namespace plateforge

#endif
