#include "plateforge/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace plateforge {

Factorization::Factorization(const SparseOperator& op) : n_(op.n), bw_(op.bandwidth()) {
    band_.assign(static_cast<size_t>(n_) * (bw_ + 1), 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = op.row_ptr[static_cast<size_t>(i)]; k < op.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            const int j = op.col[static_cast<size_t>(k)];
            if (j <= i) at(i, j) = op.val[static_cast<size_t>(k)];
        }
    for (int j = 0; j < n_; ++j) {
        const int klo = std::max(0, j - bw_);
        double d = at(j, j);
        for (int k = klo; k < j; ++k) d -= at(j, k) * at(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw FactorizationError("factorize: non-positive pivot at row " + std::to_string(j) +
                                     " (matrix not SPD)");
        const double ljj = std::sqrt(d);
        at(j, j) = ljj;
        const int imax = std::min(n_ - 1, j + bw_);
        for (int i = j + 1; i <= imax; ++i) {
            double s = at(i, j);
            const int lo = std::max(klo, i - bw_);
            for (int k = lo; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / ljj;
        }
    }
}

std::vector<double> Factorization::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw DimensionError("Factorization::solve: size mismatch");
    std::vector<double> x(rhs.begin(), rhs.end());
    for (int i = 0; i < n_; ++i) {
        double s = x[static_cast<size_t>(i)];
        for (int k = std::max(0, i - bw_); k < i; ++k) s -= at(i, k) * x[static_cast<size_t>(k)];
        x[static_cast<size_t>(i)] = s / at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[static_cast<size_t>(i)];
        const int kmax = std::min(n_ - 1, i + bw_);
        for (int k = i + 1; k <= kmax; ++k) s -= at(k, i) * x[static_cast<size_t>(k)];
        x[static_cast<size_t>(i)] = s / at(i, i);
    }
    return x;
}

Factorization factorize(const SparseOperator& op) { return Factorization(op); }

namespace {

double mass_norm(std::span<const double> u, const DiagonalWeight& m) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += m.d[i] * u[i] * u[i];
    return std::sqrt(s);
}

}  // namespace

EigenResult smallest_eigenpair_prefactored(const SparseOperator& K_eff, const Factorization& f,
                                           const DiagonalWeight& mass, const StateField* u0,
                                           const EigenOptions& opts) {
    const int n = K_eff.n;
    if (static_cast<int>(mass.d.size()) != n) throw DimensionError("smallest_eigenpair: mass size mismatch");
    for (double m : mass.d)
        if (!(m > 0.0)) throw DomainError("smallest_eigenpair: mass diagonal must be positive");
    if (opts.tol <= 0.0) throw DomainError("smallest_eigenpair: tol must be positive");

    double diag_scale = 0.0;
    for (int i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(K_eff.entry(i, i)));
    if (diag_scale == 0.0) diag_scale = 1.0;

    std::vector<double> u;
    if (u0 != nullptr) {
        if (u0->size() != n) throw DimensionError("smallest_eigenpair: u0 size mismatch");
        u = u0->values;
    } else {
        u.assign(static_cast<size_t>(n), 1.0);
    }
    {
        const double nm = mass_norm(u, mass);
        if (!(nm > 0.0)) throw DomainError("smallest_eigenpair: start vector is zero");
        for (double& v : u) v /= nm;
    }

    EigenResult res;
    double lambda = K_eff.quadratic_form(u);  // ||u||_M = 1
    res.rayleigh_history.push_back(lambda);

    // Descent holds exactly in real arithmetic; in floats the iterate carries
    // solve noise of order eps*kappa, so the assertion allows jitter up to
    // the requested tolerance (and never less than the quadratic-form floor).
    const double descent_slack =
        std::max(opts.tol, 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n));

    std::vector<double> rhs(static_cast<size_t>(n));
    bool converged = false;
    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    for (it = 1; it <= opts.max_iter; ++it) {
        for (int i = 0; i < n; ++i) rhs[static_cast<size_t>(i)] = mass.d[static_cast<size_t>(i)] * u[static_cast<size_t>(i)];
        std::vector<double> w = f.solve(rhs);
        const double nm = mass_norm(w, mass);
        for (double& v : w) v /= nm;
        const double lambda_new = K_eff.quadratic_form(w);
        if (lambda_new > lambda * (1.0 + descent_slack))
            throw Error("smallest_eigenpair: Rayleigh quotient increased (solver bug)");
        res.rayleigh_history.push_back(lambda_new);
        const std::vector<double> ku = K_eff.apply(w);
        double rnorm = 0.0, wnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ku[static_cast<size_t>(i)] -
                             lambda_new * mass.d[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
            rnorm += r * r;
            wnorm += w[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
        }
        residual = std::sqrt(rnorm) / (diag_scale * std::sqrt(wnorm));
        const double change = std::abs(lambda_new - lambda);
        u = std::move(w);
        lambda = lambda_new;
        if (change < opts.tol * std::abs(lambda) && residual < opts.tol) {
            converged = true;
            break;
        }
    }

    // Deterministic sign: the M-weighted mean is positive.
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += mass.d[static_cast<size_t>(i)] * u[static_cast<size_t>(i)];
    if (mean < 0.0)
        for (double& v : u) v = -v;

    res.eigenvalue = lambda;
    res.u.values = std::move(u);
    res.residual = residual;
    res.iterations = std::min(it, opts.max_iter);
    if (!converged) throw EigenIterationLimitError(std::move(res));
    if (!(res.eigenvalue > 0.0)) throw Error("smallest_eigenpair: non-positive eigenvalue");
    return res;
}

EigenResult smallest_eigenpair(const SparseOperator& K, const DiagonalWeight* shift_weight,
                               double alpha, const DiagonalWeight& mass, const StateField* u0,
                               const EigenOptions& opts) {
    if (alpha < 0.0) throw DomainError("smallest_eigenpair: alpha must be >= 0");
    if (shift_weight != nullptr && alpha > 0.0) {
        const SparseOperator K_eff = K.plus_diagonal(alpha, shift_weight->d);
        const Factorization f(K_eff);
        return smallest_eigenpair_prefactored(K_eff, f, mass, u0, opts);
    }
    const Factorization f(K);
    return smallest_eigenpair_prefactored(K, f, mass, u0, opts);
}

double rayleigh(std::span<const double> u, const SparseOperator& K, double alpha,
                const DiagonalWeight* shift_weight, const DiagonalWeight& mass) {
    if (static_cast<int>(u.size()) != K.n) throw DimensionError("rayleigh: size mismatch");
    double unorm = 0.0;
    for (double v : u) unorm += v * v;
    if (unorm == 0.0) throw DomainError("rayleigh: u must be nonzero");
    double num = K.quadratic_form(u);
    if (shift_weight != nullptr && alpha != 0.0) {
        double s = 0.0;
        for (size_t i = 0; i < u.size(); ++i) s += shift_weight->d[i] * u[i] * u[i];
        num += alpha * s;
    }
    double den = 0.0;
    for (size_t i = 0; i < u.size(); ++i) den += mass.d[i] * u[i] * u[i];
    return num / den;
}

}  // namespace plateforge
