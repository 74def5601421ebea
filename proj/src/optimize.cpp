#include "plateforge/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "plateforge/parallel.hpp"

namespace plateforge {

namespace {

constexpr double kRelSlack = 1e-12;

double index_order_sum(std::span<const double> m) {
    double s = 0.0;
    for (double v : m) s += v;
    return s;
}

}  // namespace

Indicator bathtub_rearrange(std::span<const double> cell_measure, std::span<const double> u_values,
                            double area) {
    const size_t n = cell_measure.size();
    if (u_values.size() != n) throw DimensionError("bathtub_rearrange: field size mismatch");
    const double total = index_order_sum(cell_measure);
    if (area < -kRelSlack * total || area > total * (1.0 + kRelSlack))
        throw DomainError("bathtub_rearrange: area must lie in [0, |Omega|_h]");
    area = std::clamp(area, 0.0, total);

    std::vector<double> s(n);
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(u_values[i]))
            throw DomainError("bathtub_rearrange: field entries must be finite");
        s[i] = u_values[i] * u_values[i];
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return s[a] != s[b] ? s[a] < s[b] : a < b; });

    // Pass 1: locate the threshold level t by walking value groups upward.
    double t = s[order[n - 1]];
    double cum = 0.0;
    for (size_t k = 0; k < n;) {
        const double v = s[order[k]];
        double gm = 0.0;
        size_t j = k;
        while (j < n && s[order[j]] == v) gm += cell_measure[order[j++]];
        if (cum + gm < area) {
            cum += gm;
            k = j;
        } else {
            t = v;
            break;
        }
    }

    // Pass 2: masses in cell-index order, so equal fill sets give bit-equal
    // indicators regardless of how the sort visited them.
    double below = 0.0, tie = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (s[i] < t) below += cell_measure[i];
        else if (s[i] == t) tie += cell_measure[i];
    }
    double frac = tie > 0.0 ? (area - below) / tie : 0.0;
    frac = std::clamp(frac, 0.0, 1.0);

    Indicator ind;
    ind.eta.resize(n);
    for (size_t i = 0; i < n; ++i) ind.eta[i] = s[i] < t ? 1.0 : (s[i] == t ? frac : 0.0);
    ind.threshold = t;
    ind.area = area;
    return ind;
}

Indicator bathtub_rearrange(const Grid& grid, const StateField& u, double area) {
    return bathtub_rearrange(grid.cell_measure, u.values, area);
}

namespace {

Indicator random_indicator(const Grid& grid, std::uint64_t seed, int restart, double area) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1)));
    StateField scores;
    scores.values.resize(static_cast<size_t>(grid.num_cells));
    for (double& v : scores.values) v = std::ldexp(static_cast<double>(rng() >> 11), -53);
    return bathtub_rearrange(grid, scores, area);
}

struct AltProblem {
    const Grid& grid;
    const SparseOperator& K;
    const DiagonalWeight& unit_m;
    bool cp_mode = false;
    double alpha = 0.0;               // G mode shift strength
    double area = 0.0;                // indicator measure (cp_area in CP mode)
    double rho_min = 0.0, rho_max = 0.0;
    const Factorization* k_fact = nullptr;  // CP mode: K factorized once
};

std::vector<double> density_from(const Indicator& ind, double rho_min, double rho_max) {
    std::vector<double> rho(ind.eta.size());
    for (size_t i = 0; i < rho.size(); ++i)
        rho[i] = rho_min * ind.eta[i] + rho_max * (1.0 - ind.eta[i]);
    return rho;
}

OptimalPair run_one_start(const AltProblem& p, Indicator ind, const SolveOptions& opts,
                          int restart_index) {
    const EigenOptions eopts{opts.eig_tol, opts.eig_max_iter};
    OptimalPair pair;
    pair.restart_index = restart_index;
    StateField u;
    double prev = std::numeric_limits<double>::infinity();
    int stable = 0;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        EigenResult er;
        try {
            const StateField* warm = outer > 0 ? &u : nullptr;
            if (p.cp_mode) {
                DiagonalWeight m_rho;
                m_rho.d.resize(ind.eta.size());
                for (size_t i = 0; i < ind.eta.size(); ++i) {
                    const double rho = p.rho_min * ind.eta[i] + p.rho_max * (1.0 - ind.eta[i]);
                    m_rho.d[i] = rho * p.grid.cell_measure[i];
                }
                er = smallest_eigenpair_prefactored(p.K, *p.k_fact, m_rho, warm, eopts);
            } else {
                DiagonalWeight shift;
                shift.d.resize(ind.eta.size());
                double shift_mass = 0.0;
                for (size_t i = 0; i < ind.eta.size(); ++i) {
                    shift.d[i] = ind.eta[i] * p.grid.cell_measure[i];
                    shift_mass += shift.d[i];
                }
                const DiagonalWeight* sp = shift_mass > 0.0 ? &shift : nullptr;
                er = smallest_eigenpair(p.K, sp, p.alpha, p.unit_m, warm, eopts);
            }
        } catch (const EigenIterationLimitError&) {
            pair.converged = false;
            pair.iterations = outer + 1;
            break;
        }
        const double lambda = er.eigenvalue;
        if (outer > 0 && lambda > prev * (1.0 + 1e-9))
            throw Error("alternating minimization: objective increased");
        pair.objective_history.push_back(lambda);
        u = std::move(er.u);
        pair.residual = er.residual;
        pair.iterations = outer + 1;

        Indicator next = bathtub_rearrange(p.grid, u, p.area);
        stable = next.eta == ind.eta ? stable + 1 : 0;
        const bool settled = outer > 0 && std::abs(lambda - prev) < opts.tol * std::abs(lambda);
        ind = std::move(next);
        prev = lambda;
        if (stable >= 2 && settled) {
            pair.converged = true;
            break;
        }
    }
    // Sign convention against the plain cell measure, matching the reports.
    double mean = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) mean += u.values[i] * p.grid.cell_measure[i];
    if (mean < 0.0)
        for (double& v : u.values) v = -v;
    pair.u = std::move(u);
    pair.indicator = std::move(ind);
    pair.eigenvalue = prev;
    if (p.cp_mode) pair.rho = density_from(pair.indicator, p.rho_min, p.rho_max);
    return pair;
}

OptimalPair run_restarts(const AltProblem& p, const SolveOptions& opts) {
    std::vector<Indicator> starts;
    if (opts.initial != nullptr) {
        if (static_cast<int>(opts.initial->eta.size()) != p.grid.num_cells)
            throw DimensionError("solve: initial indicator size mismatch");
        starts.push_back(*opts.initial);
    }
    for (int r = 0; r < std::max(1, opts.restarts); ++r)
        starts.push_back(random_indicator(p.grid, opts.seed, r, p.area));

    std::vector<OptimalPair> results(starts.size());
    const int count = static_cast<int>(starts.size());
    parallel_for(count, effective_threads(opts.threads, count),
                 [&](int i) { results[static_cast<size_t>(i)] = run_one_start(p, starts[static_cast<size_t>(i)], opts, i); });

    int best = 0;
    for (int i = 1; i < count; ++i)
        if (results[static_cast<size_t>(i)].eigenvalue < results[static_cast<size_t>(best)].eigenvalue) best = i;
    OptimalPair winner = std::move(results[static_cast<size_t>(best)]);
    if (!winner.converged) throw OptimizeIterationLimitError(std::move(winner));
    return winner;
}

}  // namespace

OptimalPair solve_g(const Grid& grid, const SparseOperator& K, const DiagonalWeight& mass,
                    const GParams& params, const SolveOptions& opts) {
    if (!(params.alpha > 0.0)) throw DomainError("solve_g: alpha must be positive");
    if (params.area < -kRelSlack * grid.omega_h || params.area > grid.omega_h * (1.0 + kRelSlack))
        throw DomainError("solve_g: area must lie in [0, |Omega|_h]");
    AltProblem p{grid, K, mass};
    p.alpha = params.alpha;
    p.area = std::clamp(params.area, 0.0, grid.omega_h);
    return run_restarts(p, opts);
}

OptimalPair solve_g(const Grid& grid, const GParams& params, const SolveOptions& opts) {
    const SparseOperator K = assemble_bilaplacian(grid, params.bc);
    const DiagonalWeight mass = unit_mass(grid);
    return solve_g(grid, K, mass, params, opts);
}

void validate_cp_params(const CPParams& params, double omega_h) {
    if (params.rho_min < 0.0) throw DomainError("solve_cp: rho_min must be >= 0");
    if (!(params.rho_min < params.rho_max))
        throw DomainError("solve_cp: rho_min < rho_max is required");
    const double lo = params.rho_min * omega_h, hi = params.rho_max * omega_h;
    const double slack = 1e-9 * hi;
    if (params.mass < lo - slack || params.mass > hi + slack)
        throw DomainError("solve_cp: mass must lie in [rho_min |Omega|_h, rho_max |Omega|_h]");
    if (params.rho_min == 0.0 && params.mass < hi * (1.0 - 1e-12))
        throw DomainError(
            "solve_cp: rho_min = 0 forces |S| = 0; only mass = rho_max |Omega|_h is solvable");
}

double cp_area(const CPParams& cp, double omega_h) {
    return std::clamp((cp.rho_max * omega_h - cp.mass) / (cp.rho_max - cp.rho_min), 0.0, omega_h);
}

OptimalPair solve_cp(const Grid& grid, const SparseOperator& K, const CPParams& params,
                     const SolveOptions& opts) {
    validate_cp_params(params, grid.omega_h);
    const DiagonalWeight mass = unit_mass(grid);
    const Factorization f(K);
    AltProblem p{grid, K, mass};
    p.cp_mode = true;
    p.area = cp_area(params, grid.omega_h);
    p.rho_min = params.rho_min;
    p.rho_max = params.rho_max;
    p.k_fact = &f;
    return run_restarts(p, opts);
}

OptimalPair solve_cp(const Grid& grid, const CPParams& params, const SolveOptions& opts) {
    const SparseOperator K = assemble_bilaplacian(grid, params.bc);
    return solve_cp(grid, K, params, opts);
}

GParams cp_to_g(const CPParams& cp, double theta, double omega_h) {
    if (!(theta > 0.0)) throw DomainError("cp_to_g: theta must be positive");
    GParams g;
    g.alpha = (cp.rho_max - cp.rho_min) * theta;
    g.area = cp_area(cp, omega_h);
    g.bc = cp.bc;
    return g;
}

double g_lambda_from_theta(double theta, double rho_max) { return rho_max * theta; }

double mu_omega(const Grid& grid, BoundaryCondition bc, double eig_tol) {
    const SparseOperator K = assemble_bilaplacian(grid, bc);
    const DiagonalWeight mass = unit_mass(grid);
    EigenOptions eopts;
    eopts.tol = eig_tol;
    return smallest_eigenpair(K, nullptr, 0.0, mass, nullptr, eopts).eigenvalue;
}

AlphaBarResult find_alpha_bar(const Grid& grid, double area, BoundaryCondition bc,
                              const SolveOptions& opts, double fp_tol, int fp_max_iter) {
    if (area < 0.0 || area >= grid.omega_h * (1.0 - 1e-12))
        throw DomainError("find_alpha_bar: requires 0 <= area < |Omega|_h");
    const SparseOperator K = assemble_bilaplacian(grid, bc);
    const DiagonalWeight mass = unit_mass(grid);

    AlphaBarResult out;
    double alpha = mu_omega(grid, bc, opts.eig_tol);
    out.history.push_back(alpha);

    Indicator chain;
    bool have_chain = false;
    double prev_delta = -1.0;
    for (int k = 0; k < fp_max_iter; ++k) {
        SolveOptions o = opts;
        if (have_chain) o.initial = &chain;
        GParams gp{alpha, area, bc};
        OptimalPair pair = solve_g(grid, K, mass, gp, o);
        const double lambda = pair.eigenvalue;
        out.history.push_back(lambda);
        chain = pair.indicator;
        have_chain = true;
        const double delta = std::abs(lambda - alpha);
        if (prev_delta > 0.0) out.ratios.push_back(delta / prev_delta);
        prev_delta = delta;
        alpha = lambda;
        out.iterations = k + 1;
        if (delta < fp_tol * std::abs(alpha)) {
            out.converged = true;
            break;
        }
    }
    out.alpha_bar = alpha;
    {
        SolveOptions o = opts;
        if (have_chain) o.initial = &chain;
        GParams gp{alpha, area, bc};
        out.lambda_at_alpha_bar = solve_g(grid, K, mass, gp, o).eigenvalue;
    }
    return out;
}

}  // namespace plateforge
