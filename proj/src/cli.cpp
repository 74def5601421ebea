#include "plateforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "plateforge/analysis.hpp"
#include "plateforge/eigen.hpp"
#include "plateforge/operator.hpp"

namespace plateforge::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonConfig {
    std::string domain = "square";
    int n = 64;
    std::string bc = "navier";
    double tol = 1e-8;
    double eig_tol = 1e-10;
    int max_outer = 500;
    int restarts = 5;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = ".";
    bool pgm = false;
    std::string config_file;  // consumed by the argv pre-pass
};

std::string trimmed(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat key=value config file; keys already given on the command line win.
// Implemented by appending the missing flags before parsing.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string file;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
    }
    if (file.empty()) return args;
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file);
    std::vector<std::string> present;
    for (const std::string& a : args)
        if (a.rfind("--", 0) == 0) present.push_back(a.substr(0, a.find('=')));
    std::string line;
    while (std::getline(in, line)) {
        line = trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file: expected key=value, got '" + line + "'");
        const std::string key = "--" + trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (std::find(present.begin(), present.end(), key) != present.end()) continue;
        if (value == "true") {
            args.push_back(key);
        } else if (value != "false") {
            args.push_back(key);
            args.push_back(value);
        }
    }
    return args;
}

void add_common(CLI::App* sub, CommonConfig& c) {
    sub->add_option("--domain", c.domain, "square | disk | radial-disk")
        ->check(CLI::IsMember({"square", "disk", "radial-disk"}));
    sub->add_option("--n", c.n, "grid resolution (cells per side / radial cells)");
    sub->add_option("--bc", c.bc, "navier | dirichlet")
        ->check(CLI::IsMember({"navier", "dirichlet"}));
    sub->add_option("--tol", c.tol, "outer relative tolerance");
    sub->add_option("--eig-tol", c.eig_tol, "eigen solver tolerance");
    sub->add_option("--max-outer", c.max_outer, "outer iteration cap");
    sub->add_option("--restarts", c.restarts, "seeded random restarts");
    sub->add_option("--seed", c.seed, "random seed (all randomness flows from it)");
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_flag("--pgm", c.pgm, "write u.pgm / s.pgm");
    sub->add_option("--config", c.config_file, "key=value config file; command-line flags win");
}

Domain parse_domain(const CommonConfig& c) {
    DomainKind kind = DomainKind::UnitSquare;
    if (c.domain == "disk") kind = DomainKind::UnitDisk;
    else if (c.domain == "radial-disk") kind = DomainKind::RadialDisk;
    return Domain{kind, c.n};
}

BoundaryCondition parse_bc(const CommonConfig& c) {
    return c.bc == "dirichlet" ? BoundaryCondition::Dirichlet : BoundaryCondition::Navier;
}

SolveOptions solve_options(const CommonConfig& c) {
    SolveOptions o;
    o.tol = c.tol;
    o.eig_tol = c.eig_tol;
    o.max_outer = c.max_outer;
    o.restarts = c.restarts;
    o.seed = c.seed;
    o.threads = c.threads;
    return o;
}

ordered_json config_echo(const std::string& sub, const CommonConfig& c) {
    ordered_json j;
    j["subcommand"] = sub;
    j["domain"] = c.domain;
    j["n"] = c.n;
    j["bc"] = c.bc;
    j["tol"] = c.tol;
    j["eig_tol"] = c.eig_tol;
    j["max_outer"] = c.max_outer;
    j["restarts"] = c.restarts;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out_dir;
    j["pgm"] = c.pgm;
    return j;
}

ordered_json pair_json(const Grid& grid, const OptimalPair& pair) {
    ordered_json r;
    r["lambda"] = pair.eigenvalue;
    r["t"] = pair.indicator.threshold;
    r["area_s"] = measure_of_set(grid, pair.indicator.eta);
    r["iterations"] = pair.iterations;
    r["residual"] = pair.residual;
    r["converged"] = pair.converged;
    r["restart_index"] = pair.restart_index;
    r["objective_history"] = pair.objective_history;

    ordered_json diag;
    const PositivityReport pos = check_positivity(grid, pair);
    diag["min_u"] = pos.min_value;
    diag["min_u_cell"] = pos.min_cell;
    diag["positive"] = pos.positive;
    if (grid.domain.kind != DomainKind::UnitSquare) {
        const SymmetryReport sym = check_radial(grid, pair);
        diag["max_dihedral_defect"] = sym.max_dihedral_defect;
        diag["profile_scatter"] = sym.profile_scatter;
        diag["annulus_mismatch"] = sym.annulus_mismatch;
        diag["radially_nonincreasing"] = sym.radially_nonincreasing;
    }
    r["diagnostics"] = std::move(diag);
    return r;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
}

void write_result(const fs::path& dir, ordered_json config, ordered_json result, double wall_ms) {
    ordered_json j;
    j["schema"] = 1;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    j["wall_time_ms"] = wall_ms;
    write_text_file(dir / "result.json", j.dump(2) + "\n");
}

void maybe_write_pgm(const CommonConfig& c, const Grid& grid, const OptimalPair& pair) {
    if (!c.pgm) return;
    write_pgm_field(grid, pair.u.values, (fs::path(c.out_dir) / "u.pgm").string());
    write_pgm_indicator(grid, pair.indicator, (fs::path(c.out_dir) / "s.pgm").string());
}

std::vector<double> linspace(double from, double to, int points) {
    std::vector<double> v(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i)
        v[static_cast<size_t>(i)] = from + (to - from) * (points > 1 ? static_cast<double>(i) / (points - 1) : 0.0);
    return v;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

void write_pgm_field(const Grid& grid, std::span<const double> values, const std::string& path) {
    if (static_cast<int>(values.size()) != grid.num_cells)
        throw DimensionError("write_pgm_field: size mismatch");
    double lo = values.empty() ? 0.0 : values[0], hi = lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "P5\n" << grid.nx << " " << grid.ny << "\n255\n";
    for (int j = grid.ny - 1; j >= 0; --j)
        for (int i = 0; i < grid.nx; ++i) {
            const int c = grid.cell_at(i, j);
            unsigned char px = 0;
            if (c >= 0 && span > 0.0)
                px = static_cast<unsigned char>(
                    std::lround(255.0 * (values[static_cast<size_t>(c)] - lo) / span));
            out.put(static_cast<char>(px));
        }
}

void write_pgm_indicator(const Grid& grid, const Indicator& indicator, const std::string& path) {
    if (static_cast<int>(indicator.eta.size()) != grid.num_cells)
        throw DimensionError("write_pgm_indicator: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "P5\n" << grid.nx << " " << grid.ny << "\n255\n";
    for (int j = grid.ny - 1; j >= 0; --j)
        for (int i = 0; i < grid.nx; ++i) {
            const int c = grid.cell_at(i, j);
            unsigned char px = 0;
            if (c >= 0) {
                const double e = indicator.eta[static_cast<size_t>(c)];
                px = e == 1.0 ? 255 : (e == 0.0 ? 0 : 128);
            }
            out.put(static_cast<char>(px));
        }
}

namespace {

int run_solve_g(const CommonConfig& c, double alpha, double area) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    if (!(alpha > 0.0)) throw ConfigError("solve-g: --alpha must be positive");
    if (area < 0.0 || area > grid.omega_h * (1.0 + 1e-12))
        throw ConfigError("solve-g: --area must lie in [0, |Omega|_h = " +
                          std::to_string(grid.omega_h) + "]");
    const GParams params{alpha, area, parse_bc(c)};
    OptimalPair pair;
    int code = 0;
    try {
        pair = solve_g(grid, params, solve_options(c));
    } catch (OptimizeIterationLimitError& e) {
        pair = std::move(e.best);
        code = 3;
        std::cerr << "solve-g: not converged within --max-outer iterations\n";
    }
    ordered_json cfg = config_echo("solve-g", c);
    cfg["alpha"] = alpha;
    cfg["area"] = area;
    write_result(c.out_dir, std::move(cfg), pair_json(grid, pair), timer.ms());
    maybe_write_pgm(c, grid, pair);
    std::cout << "lambda = " << pair.eigenvalue << "  (t = " << pair.indicator.threshold
              << ", iterations = " << pair.iterations << ")\n";
    return code;
}

int run_solve_cp(const CommonConfig& c, double rho_min, double rho_max, double mass) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    const CPParams params{rho_min, rho_max, mass, parse_bc(c)};
    try {
        validate_cp_params(params, grid.omega_h);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("solve-cp: ") + e.what());
    }
    OptimalPair pair;
    int code = 0;
    try {
        pair = solve_cp(grid, params, solve_options(c));
    } catch (OptimizeIterationLimitError& e) {
        pair = std::move(e.best);
        code = 3;
        std::cerr << "solve-cp: not converged within --max-outer iterations\n";
    }
    ordered_json cfg = config_echo("solve-cp", c);
    cfg["rho_min"] = rho_min;
    cfg["rho_max"] = rho_max;
    cfg["mass"] = mass;
    ordered_json r = pair_json(grid, pair);
    r["theta"] = pair.eigenvalue;
    double mass_rho = 0.0;
    for (int i = 0; i < grid.num_cells; ++i)
        mass_rho += pair.rho[static_cast<size_t>(i)] * grid.cell_measure[static_cast<size_t>(i)];
    r["mass_rho"] = mass_rho;
    const GParams equiv = cp_to_g(params, pair.eigenvalue, grid.omega_h);
    r["alpha_equiv"] = equiv.alpha;
    r["area_equiv"] = equiv.area;
    r["lambda_equiv"] = g_lambda_from_theta(pair.eigenvalue, rho_max);
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());
    maybe_write_pgm(c, grid, pair);
    std::cout << "theta = " << pair.eigenvalue << "  (t = " << pair.indicator.threshold
              << ", iterations = " << pair.iterations << ")\n";
    return code;
}

int run_alpha_bar(const CommonConfig& c, double area, double fp_tol, int fp_max_iter) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    if (area < 0.0 || area >= grid.omega_h)
        throw ConfigError("alpha-bar: --area must lie in [0, |Omega|_h)");
    AlphaBarResult res;
    int code = 0;
    try {
        res = find_alpha_bar(grid, area, parse_bc(c), solve_options(c), fp_tol, fp_max_iter);
    } catch (OptimizeIterationLimitError&) {
        std::cerr << "alpha-bar: inner solve did not converge\n";
        return 3;
    }
    if (!res.converged) code = 3;

    ordered_json cfg = config_echo("alpha-bar", c);
    cfg["area"] = area;
    cfg["fp_tol"] = fp_tol;
    cfg["fp_max_iter"] = fp_max_iter;
    ordered_json r;
    r["alpha_bar"] = res.alpha_bar;
    r["lambda_at_alpha_bar"] = res.lambda_at_alpha_bar;
    r["fixed_point_gap"] = std::abs(res.lambda_at_alpha_bar - res.alpha_bar);
    r["iterations"] = res.iterations;
    r["converged"] = res.converged;
    r["history"] = res.history;
    r["ratios"] = res.ratios;
    r["contraction_bound"] = area / grid.omega_h;
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());

    std::string csv = "k,alpha,delta,ratio\n";
    char buf[160];
    for (size_t k = 0; k < res.history.size(); ++k) {
        const double delta = k > 0 ? res.history[k] - res.history[k - 1] : 0.0;
        const double ratio = k >= 2 && res.history[k - 1] != res.history[k - 2]
                                 ? std::abs(delta) / std::abs(res.history[k - 1] - res.history[k - 2])
                                 : 0.0;
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, res.history[k], delta, ratio);
        csv += buf;
    }
    write_text_file(fs::path(c.out_dir) / "table.csv", csv);

    std::cout << "alpha_bar = " << res.alpha_bar << "  (|Lambda(alpha_bar) - alpha_bar| = "
              << std::abs(res.lambda_at_alpha_bar - res.alpha_bar) << ")\n";
    std::cout << "k alpha delta ratio\n";
    for (size_t k = 0; k < res.history.size(); ++k) {
        const double delta = k > 0 ? res.history[k] - res.history[k - 1] : 0.0;
        const double ratio = k >= 2 && res.history[k - 1] != res.history[k - 2]
                                 ? std::abs(delta) / std::abs(res.history[k - 1] - res.history[k - 2])
                                 : 0.0;
        std::cout << k << " " << res.history[k] << " " << delta << " " << ratio << "\n";
    }
    return code;
}

int run_sweep(const CommonConfig& c, const std::string& param, double from, double to, int points,
              double fixed_alpha, double fixed_area) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    if (points < 3) throw ConfigError("sweep: --points must be at least 3");
    if (!(from < to)) throw ConfigError("sweep: --from must be smaller than --to");
    SweepTable table;
    if (param == "alpha") {
        if (fixed_area < 0.0 || fixed_area > grid.omega_h)
            throw ConfigError("sweep: --area must lie in [0, |Omega|_h]");
        table = sweep_alpha(grid, fixed_area, linspace(from, to, points), parse_bc(c), solve_options(c));
    } else {
        if (!(fixed_alpha > 0.0)) throw ConfigError("sweep: --alpha must be positive");
        table = sweep_area(grid, fixed_alpha, linspace(from, to, points), parse_bc(c), solve_options(c));
    }
    ordered_json cfg = config_echo("sweep", c);
    cfg["param"] = param;
    cfg["from"] = from;
    cfg["to"] = to;
    cfg["points"] = points;
    cfg["alpha"] = fixed_alpha;
    cfg["area"] = fixed_area;
    ordered_json r;
    r["param"] = table.param_name;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json jr;
        jr[table.param_name] = row.param;
        jr["lambda"] = row.lambda;
        jr["iterations"] = row.iterations;
        jr["residual"] = row.residual;
        rows.push_back(std::move(jr));
    }
    r["rows"] = std::move(rows);
    r["monotone"] = table.monotone;
    if (table.has_alpha_laws) {
        r["max_slope"] = table.max_slope;
        r["lipschitz_bound"] = table.lipschitz_bound;
        r["lipschitz_ok"] = table.lipschitz_ok;
        r["lambda_minus_alpha_decreasing"] = table.lambda_minus_alpha_decreasing;
        r["sign_change"] = table.sign_change;
    }
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());
    std::ofstream csv(fs::path(c.out_dir) / "table.csv", std::ios::binary);
    write_csv(table, csv);
    std::cout << "sweep: " << table.rows.size() << " points, monotone = " << table.monotone << "\n";
    return 0;
}

int run_compare_bc(const CommonConfig& c, double rho_min, double rho_max, double mass) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    const CPParams params{rho_min, rho_max, mass, parse_bc(c)};
    try {
        validate_cp_params(params, grid.omega_h);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("compare-bc: ") + e.what());
    }
    const BcComparison cmp = compare_bc(grid, params, solve_options(c));
    ordered_json cfg = config_echo("compare-bc", c);
    cfg["rho_min"] = rho_min;
    cfg["rho_max"] = rho_max;
    cfg["mass"] = mass;
    ordered_json r;
    r["theta_navier"] = cmp.theta_navier;
    r["theta_dirichlet"] = cmp.theta_dirichlet;
    r["difference"] = cmp.difference;
    r["ratio"] = cmp.ratio;
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());
    std::cout << "theta_navier = " << cmp.theta_navier
              << ", theta_dirichlet = " << cmp.theta_dirichlet << " (ratio " << cmp.ratio << ")\n";
    return 0;
}

int run_cross_validate(const CommonConfig& c, int n1d, int n2d, double alpha, double area,
                       double rho_min, double rho_max, double mass, bool g_mode) {
    Timer timer;
    DiskCrossValidation cv;
    if (g_mode) {
        if (!(alpha > 0.0)) throw ConfigError("cross-validate: --alpha must be positive");
        cv = cross_validate_disk(GParams{alpha, area, parse_bc(c)}, n1d, n2d, solve_options(c));
    } else {
        const CPParams params{rho_min, rho_max, mass, parse_bc(c)};
        try {
            validate_cp_params(params, std::acos(-1.0));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("cross-validate: ") + e.what());
        }
        cv = cross_validate_disk(params, n1d, n2d, solve_options(c));
    }
    ordered_json cfg = config_echo("cross-validate", c);
    cfg["n1d"] = n1d;
    cfg["n2d"] = n2d;
    if (g_mode) {
        cfg["alpha"] = alpha;
        cfg["area"] = area;
    } else {
        cfg["rho_min"] = rho_min;
        cfg["rho_max"] = rho_max;
        cfg["mass"] = mass;
    }
    ordered_json r;
    r["lambda_radial"] = cv.lambda_radial;
    r["lambda_masked"] = cv.lambda_masked;
    r["relative_gap"] = cv.relative_gap;
    r["profile_sup_diff"] = cv.profile_sup_diff;
    r["annulus_mismatch"] = cv.annulus_mismatch;
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());
    std::cout << "radial lambda = " << cv.lambda_radial << ", masked lambda = " << cv.lambda_masked
              << " (gap " << cv.relative_gap << ")\n";
    return 0;
}

int run_dump_operator(const CommonConfig& c, const std::string& which) {
    Timer timer;
    const Grid grid = build_grid(parse_domain(c));
    const SparseOperator op = which == "laplacian" ? assemble_laplacian(grid)
                                                   : assemble_bilaplacian(grid, parse_bc(c));
    const fs::path path = fs::path(c.out_dir) / "operator.mtx";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_matrix_market(op, out);
    ordered_json cfg = config_echo("dump-operator", c);
    cfg["operator"] = which;
    ordered_json r;
    r["operator"] = which;
    r["dimension"] = op.n;
    r["nnz"] = op.nnz();
    r["file"] = "operator.mtx";
    write_result(c.out_dir, std::move(cfg), std::move(r), timer.ms());
    std::cout << "wrote " << path.string() << " (" << op.n << "x" << op.n << ")\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"plateforge: composite plate eigenvalue optimization"};
    app.require_subcommand(1);

    CommonConfig cg, ccp, cab, csw, cbc, ccv, cdo;
    double alpha = 0.0, area = 0.0;
    double rho_min = 0.0, rho_max = 0.0, mass = 0.0;

    auto* sg = app.add_subcommand("solve-g", "penalized set problem: minimize lambda(alpha, S)");
    add_common(sg, cg);
    sg->add_option("--alpha", alpha, "penalization strength")->required();
    sg->add_option("--area", area, "measure of S")->required();

    auto* scp = app.add_subcommand("solve-cp", "composite plate: minimize theta(rho)");
    add_common(scp, ccp);
    scp->add_option("--rho-min", rho_min, "lower density bound h")->required();
    scp->add_option("--rho-max", rho_max, "upper density bound H")->required();
    scp->add_option("--mass", mass, "total mass M")->required();

    double ab_area = 0.0, fp_tol = 1e-7;
    int fp_max_iter = 100;
    auto* sab = app.add_subcommand("alpha-bar", "fixed point of alpha -> Lambda(alpha, A)");
    add_common(sab, cab);
    sab->add_option("--area", ab_area, "measure of S")->required();
    sab->add_option("--fp-tol", fp_tol, "fixed point relative tolerance");
    sab->add_option("--fp-max-iter", fp_max_iter, "fixed point iteration cap");

    std::string sweep_param = "alpha";
    double sw_from = 0.0, sw_to = 0.0, sw_alpha = 0.0, sw_area = 0.0;
    int sw_points = 6;
    auto* ssw = app.add_subcommand("sweep", "parameter sweep with monotonicity verdicts");
    add_common(ssw, csw);
    ssw->add_option("--param", sweep_param, "alpha | area")->check(CLI::IsMember({"alpha", "area"}));
    ssw->add_option("--from", sw_from, "sweep start")->required();
    ssw->add_option("--to", sw_to, "sweep end")->required();
    ssw->add_option("--points", sw_points, "sample count (>= 3)");
    ssw->add_option("--alpha", sw_alpha, "fixed alpha (area sweeps)");
    ssw->add_option("--area", sw_area, "fixed area (alpha sweeps)");

    auto* sbc = app.add_subcommand("compare-bc", "theta under Navier vs Dirichlet conditions");
    add_common(sbc, cbc);
    sbc->add_option("--rho-min", rho_min, "lower density bound h")->required();
    sbc->add_option("--rho-max", rho_max, "upper density bound H")->required();
    sbc->add_option("--mass", mass, "total mass M")->required();

    int n1d = 400, n2d = 64;
    double cv_alpha = 0.0, cv_area = 0.0, cv_rho_min = 0.0, cv_rho_max = 0.0, cv_mass = 0.0;
    auto* scv = app.add_subcommand("cross-validate", "radial oracle vs masked 2D disk");
    add_common(scv, ccv);
    scv->add_option("--n1d", n1d, "radial cells");
    scv->add_option("--n2d", n2d, "masked disk cells per side");
    auto* cv_alpha_opt = scv->add_option("--alpha", cv_alpha, "penalization strength (G mode)");
    scv->add_option("--area", cv_area, "measure of S (G mode)");
    scv->add_option("--rho-min", cv_rho_min, "lower density bound (CP mode)");
    scv->add_option("--rho-max", cv_rho_max, "upper density bound (CP mode)");
    scv->add_option("--mass", cv_mass, "total mass (CP mode)");

    std::string which_op = "bilaplacian";
    auto* sdo = app.add_subcommand("dump-operator", "Matrix Market dump of the assembled operator");
    add_common(sdo, cdo);
    sdo->add_option("--operator", which_op, "laplacian | bilaplacian")
        ->check(CLI::IsMember({"laplacian", "bilaplacian"}));

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(std::move(args));
        std::vector<const char*> cargv;
        cargv.push_back(argc > 0 ? argv[0] : "plateforge");
        for (const std::string& a : args) cargv.push_back(a.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
        const CommonConfig* active = nullptr;
        if (sg->parsed()) active = &cg;
        else if (scp->parsed()) active = &ccp;
        else if (sab->parsed()) active = &cab;
        else if (ssw->parsed()) active = &csw;
        else if (sbc->parsed()) active = &cbc;
        else if (scv->parsed()) active = &ccv;
        else active = &cdo;
        fs::create_directories(active->out_dir);

        if (sg->parsed()) return run_solve_g(cg, alpha, area);
        if (scp->parsed()) return run_solve_cp(ccp, rho_min, rho_max, mass);
        if (sab->parsed()) return run_alpha_bar(cab, ab_area, fp_tol, fp_max_iter);
        if (ssw->parsed()) return run_sweep(csw, sweep_param, sw_from, sw_to, sw_points, sw_alpha, sw_area);
        if (sbc->parsed()) return run_compare_bc(cbc, rho_min, rho_max, mass);
        if (scv->parsed())
            return run_cross_validate(ccv, n1d, n2d, cv_alpha, cv_area, cv_rho_min, cv_rho_max,
                                      cv_mass, cv_alpha_opt->count() > 0);
        return run_dump_operator(cdo, which_op);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const EigenIterationLimitError& e) {
        std::cerr << "solver did not converge: " << e.what() << "\n";
        return 3;
    } catch (const OptimizeIterationLimitError& e) {
        std::cerr << "solver did not converge: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("plateforge");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace plateforge::cli
