#include "plateforge/operator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "plateforge/errors.hpp"

namespace plateforge {

const char* boundary_condition_name(BoundaryCondition bc) {
    return bc == BoundaryCondition::Navier ? "navier" : "dirichlet";
}

SparseOperator SparseOperator::from_triplets(int n, std::vector<int> rows, std::vector<int> cols,
                                             std::vector<double> vals) {
    const size_t m = vals.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
    });

    SparseOperator op;
    op.n = n;
    op.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    for (size_t k = 0; k < m;) {
        const int r = rows[order[k]], c = cols[order[k]];
        double sum = 0.0;
        while (k < m && rows[order[k]] == r && cols[order[k]] == c) sum += vals[order[k++]];
        op.col.push_back(c);
        op.val.push_back(sum);
        ++op.row_ptr[static_cast<size_t>(r) + 1];
    }
    for (int r = 0; r < n; ++r) op.row_ptr[static_cast<size_t>(r) + 1] += op.row_ptr[static_cast<size_t>(r)];
    return op;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw DimensionError("SparseOperator::apply: size mismatch");
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
            s += val[static_cast<size_t>(k)] * x[static_cast<size_t>(col[static_cast<size_t>(k)])];
        y[static_cast<size_t>(i)] = s;
    }
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
    std::vector<double> y(static_cast<size_t>(n));
    apply(x, y);
    return y;
}

double SparseOperator::quadratic_form(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != n) throw DimensionError("quadratic_form: size mismatch");
    if (energy) {
        double s = 0.0;
        for (int r = 0; r < energy->rows; ++r) {
            double t = 0.0;
            for (int k = energy->row_ptr[static_cast<size_t>(r)]; k < energy->row_ptr[static_cast<size_t>(r) + 1]; ++k)
                t += energy->val[static_cast<size_t>(k)] * u[static_cast<size_t>(energy->col[static_cast<size_t>(k)])];
            s += energy->d[static_cast<size_t>(r)] * t * t;
        }
        for (size_t i = 0; i < energy_shift.size(); ++i) s += energy_shift[i] * u[i] * u[i];
        return s;
    }
    const std::vector<double> ku = apply(u);
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += ku[i] * u[i];
    return s;
}

double SparseOperator::entry(int i, int j) const {
    for (int k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
        if (col[static_cast<size_t>(k)] == j) return val[static_cast<size_t>(k)];
    return 0.0;
}

double SparseOperator::max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
            worst = std::max(worst, std::abs(val[static_cast<size_t>(k)] -
                                             entry(col[static_cast<size_t>(k)], i)));
    return worst;
}

int SparseOperator::bandwidth() const {
    int bw = 0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
            bw = std::max(bw, std::abs(col[static_cast<size_t>(k)] - i));
    return bw;
}

SparseOperator SparseOperator::plus_diagonal(double alpha, std::span<const double> d) const {
    if (static_cast<int>(d.size()) != n)
        throw DimensionError("plus_diagonal: weight size mismatch");
    SparseOperator out = *this;
    bool nonneg = true;
    for (int i = 0; i < n; ++i) {
        bool found = false;
        for (int k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            if (col[static_cast<size_t>(k)] == i) {
                out.val[static_cast<size_t>(k)] += alpha * d[static_cast<size_t>(i)];
                found = true;
                break;
            }
        }
        if (!found) throw Error("plus_diagonal: missing structural diagonal");
        if (alpha * d[static_cast<size_t>(i)] < 0.0) nonneg = false;
    }
    if (energy && nonneg) {
        if (out.energy_shift.empty()) out.energy_shift.assign(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) out.energy_shift[static_cast<size_t>(i)] += alpha * d[static_cast<size_t>(i)];
    } else {
        out.energy.reset();
        out.energy_shift.clear();
    }
    return out;
}

SparseOperator operator_from_energy(EnergyFactor factor) {
    // Upper-triangle accumulation: K_ij = sum_r A_ri d_r A_rj for i <= j.
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int r = 0; r < factor.rows; ++r) {
        const int lo = factor.row_ptr[static_cast<size_t>(r)], hi = factor.row_ptr[static_cast<size_t>(r) + 1];
        for (int p = lo; p < hi; ++p) {
            const double w = factor.val[static_cast<size_t>(p)] * factor.d[static_cast<size_t>(r)];
            const int ci = factor.col[static_cast<size_t>(p)];
            for (int q = lo; q < hi; ++q) {
                const int cj = factor.col[static_cast<size_t>(q)];
                if (cj < ci) continue;
                ti.push_back(ci);
                tj.push_back(cj);
                tv.push_back(w * factor.val[static_cast<size_t>(q)]);
            }
        }
    }
    const SparseOperator upper =
        SparseOperator::from_triplets(factor.cols, std::move(ti), std::move(tj), std::move(tv));
    // Mirror the consolidated upper entries so both triangles hold identical values.
    std::vector<int> ri, rj;
    std::vector<double> rv;
    for (int i = 0; i < upper.n; ++i) {
        for (int k = upper.row_ptr[static_cast<size_t>(i)]; k < upper.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            const int j = upper.col[static_cast<size_t>(k)];
            const double v = upper.val[static_cast<size_t>(k)];
            ri.push_back(i);
            rj.push_back(j);
            rv.push_back(v);
            if (j != i) {
                ri.push_back(j);
                rj.push_back(i);
                rv.push_back(v);
            }
        }
    }
    SparseOperator out = SparseOperator::from_triplets(factor.cols, std::move(ri), std::move(rj), std::move(rv));
    out.energy = std::make_shared<const EnergyFactor>(std::move(factor));
    return out;
}

namespace {

EnergyFactor energy_from_square_matrix(const SparseOperator& a, std::span<const double> d) {
    EnergyFactor f;
    f.rows = f.cols = a.n;
    f.row_ptr = a.row_ptr;
    f.col = a.col;
    f.val = a.val;
    f.d.assign(d.begin(), d.end());
    return f;
}

}  // namespace

SparseOperator transpose_weighted_product(const SparseOperator& a, std::span<const double> d) {
    if (static_cast<int>(d.size()) != a.n)
        throw DimensionError("transpose_weighted_product: weight size mismatch");
    return operator_from_energy(energy_from_square_matrix(a, d));
}

double DiagonalWeight::quadratic_form(std::span<const double> u) const {
    if (u.size() != d.size()) throw DimensionError("DiagonalWeight: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < d.size(); ++i) s += d[i] * u[i] * u[i];
    return s;
}

namespace {

SparseOperator laplacian_2d(const Grid& g) {
    // Uniform cell measure: scale = m/h^2 = 1, kept explicit for clarity.
    const double scale = g.cell_measure[0] / (g.h * g.h);
    std::vector<int> ti, tj;
    std::vector<double> tv;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int c = 0; c < g.num_cells; ++c) {
        const auto [i, j] = g.cell_to_lattice[static_cast<size_t>(c)];
        ti.push_back(c);
        tj.push_back(c);
        tv.push_back(4.0 * scale);
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (!g.in_lattice(ii, jj)) continue;  // exterior site carries u = 0
            const int nb = g.cell_at(ii, jj);
            if (nb < 0) continue;
            ti.push_back(c);
            tj.push_back(nb);
            tv.push_back(-scale);
        }
    }
    return SparseOperator::from_triplets(g.num_cells, std::move(ti), std::move(tj), std::move(tv));
}

SparseOperator laplacian_radial(const Grid& g) {
    // Finite volumes in the 2*pi*r dr inner product; faces at r = i*h.
    // Row i: flux(i) - flux(i+1) with flux(f) = 2*pi*f*(u_f - u_{f-1}).
    // The r=0 face carries no flux; the r=1 face uses the odd ghost u = -u_{n-1}.
    const int n = g.num_cells;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int i = 0; i < n; ++i) {
        double diag = two_pi * (2 * i + 1);
        if (i > 0) {
            ti.push_back(i);
            tj.push_back(i - 1);
            tv.push_back(-two_pi * i);
        }
        if (i < n - 1) {
            ti.push_back(i);
            tj.push_back(i + 1);
            tv.push_back(-two_pi * (i + 1));
        } else {
            diag += two_pi * n;  // ghost elimination doubles the wall flux coefficient
        }
        ti.push_back(i);
        tj.push_back(i);
        tv.push_back(diag);
    }
    return SparseOperator::from_triplets(n, std::move(ti), std::move(tj), std::move(tv));
}

std::vector<double> inverse_measure(const Grid& g) {
    std::vector<double> inv(static_cast<size_t>(g.num_cells));
    for (int c = 0; c < g.num_cells; ++c) inv[static_cast<size_t>(c)] = 1.0 / g.cell_measure[static_cast<size_t>(c)];
    return inv;
}

// Clamped plate on the square and the masked disk: the Navier product
// L M^-1 L plus one penalty row per wall adjacency. Each wall face mirrors
// the adjacent value (ghost u_ghost = u_mirror, the du/dnu = 0 reflection),
// adding (m/2) * (2 u_c / h^2)^2 to the energy. On the square this
// reproduces the 13-point ghost-reflection stencil entrywise; the wall-
// adjacent 1D row keeps its 7/h^4 center (6 + the reflected ghost).
SparseOperator bilaplacian_2d_clamped(const Grid& g) {
    const SparseOperator lap = laplacian_2d(g);
    EnergyFactor f;
    f.cols = g.num_cells;
    f.row_ptr.push_back(0);
    for (int i = 0; i < lap.n; ++i) {
        for (int k = lap.row_ptr[static_cast<size_t>(i)]; k < lap.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            f.col.push_back(lap.col[static_cast<size_t>(k)]);
            f.val.push_back(lap.val[static_cast<size_t>(k)]);
        }
        f.row_ptr.push_back(static_cast<int>(f.col.size()));
        f.d.push_back(1.0 / g.cell_measure[static_cast<size_t>(i)]);
    }
    const double wall_coeff = 2.0 / (g.h * g.h);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int c = 0; c < g.num_cells; ++c) {
        const auto [i, j] = g.cell_to_lattice[static_cast<size_t>(c)];
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            const bool wall = !g.in_lattice(ii, jj) || g.cell_at(ii, jj) < 0;
            if (!wall) continue;
            f.col.push_back(c);
            f.val.push_back(wall_coeff);
            f.row_ptr.push_back(static_cast<int>(f.col.size()));
            f.d.push_back(0.5 * g.cell_measure[static_cast<size_t>(c)]);
        }
    }
    f.rows = static_cast<int>(f.d.size());
    return operator_from_energy(std::move(f));
}

// Clamped plate on the radial grid. Cells 0..n-2 keep the finite-volume
// Laplacian rows. Over the wall cell the ghost is eliminated one-sidedly:
// u(1) = u'(1) = 0 leave u(1-s) = a s^2/2 + c s^3 through the last two
// cells, and the cell's energy is the two-point midpoint quadrature of
// (lap u)^2 for that profile, one point per half band. Both wall rows
// diverge on boundary-condition violations (1/h^3 on values, 1/h on
// slopes), which is what pins the clamped space discretely.
SparseOperator bilaplacian_radial_clamped(const Grid& g) {
    const int n = g.num_cells;
    const double h = g.h;
    EnergyFactor f;
    f.cols = n;
    f.row_ptr.push_back(0);
    const SparseOperator lap = laplacian_radial(g);
    for (int i = 0; i + 1 < n; ++i) {
        for (int k = lap.row_ptr[static_cast<size_t>(i)]; k < lap.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            f.col.push_back(lap.col[static_cast<size_t>(k)]);
            f.val.push_back(lap.val[static_cast<size_t>(k)] / g.cell_measure[static_cast<size_t>(i)]);
        }
        f.row_ptr.push_back(static_cast<int>(f.col.size()));
        f.d.push_back(g.cell_measure[static_cast<size_t>(i)]);
    }
    // Fit coefficients from u_{n-1} (s = h/2) and u_{n-2} (s = 3h/2):
    //   a = (216 u_{n-1} -  8 u_{n-2}) / (18 h^2)
    //   c = (-72 u_{n-1} +  8 u_{n-2}) / (18 h^3)
    // lap u (s) = a + 6 c s - (a s + 3 c s^2) / (1 - s).
    const double a1 = 216.0 / (18.0 * h * h), a2 = -8.0 / (18.0 * h * h);
    const double c1 = -72.0 / (18.0 * h * h * h), c2 = 8.0 / (18.0 * h * h * h);
    for (const double s : {0.25 * h, 0.75 * h}) {
        const double r = 1.0 - s;
        const double ca = 1.0 - s / r;
        const double cc = 6.0 * s - 3.0 * s * s / r;
        f.col.push_back(n - 2);
        f.val.push_back(ca * a2 + cc * c2);
        f.col.push_back(n - 1);
        f.val.push_back(ca * a1 + cc * c1);
        f.row_ptr.push_back(static_cast<int>(f.col.size()));
        const double lo = s < 0.5 * h ? 0.0 : 0.5 * h;  // annulus [1-lo-h/2, 1-lo]
        const double hi = lo + 0.5 * h;
        f.d.push_back(std::numbers::pi * ((1.0 - lo) * (1.0 - lo) - (1.0 - hi) * (1.0 - hi)));
    }
    f.rows = static_cast<int>(f.d.size());
    return operator_from_energy(std::move(f));
}

}  // namespace

SparseOperator assemble_laplacian(const Grid& grid) {
    return grid.domain.kind == DomainKind::RadialDisk ? laplacian_radial(grid) : laplacian_2d(grid);
}

SparseOperator assemble_bilaplacian(const Grid& grid, BoundaryCondition bc) {
    if (bc == BoundaryCondition::Navier) {
        const SparseOperator lap = assemble_laplacian(grid);
        return transpose_weighted_product(lap, inverse_measure(grid));
    }
    switch (grid.domain.kind) {
        case DomainKind::UnitSquare:
        case DomainKind::UnitDisk: return bilaplacian_2d_clamped(grid);
        case DomainKind::RadialDisk: return bilaplacian_radial_clamped(grid);
    }
    throw ConfigError("assemble_bilaplacian: unknown domain kind");
}

DiagonalWeight unit_mass(const Grid& grid) {
    return DiagonalWeight{grid.cell_measure};
}

DiagonalWeight assemble_weight(const Grid& grid, std::span<const double> values) {
    if (static_cast<int>(values.size()) != grid.num_cells)
        throw DimensionError("assemble_weight: values size mismatch");
    DiagonalWeight w;
    w.d.resize(values.size());
    double largest = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw DomainError("assemble_weight: negative weight value");
        w.d[i] = values[i] * grid.cell_measure[i];
        largest = std::max(largest, w.d[i]);
    }
    if (largest == 0.0) throw DegenerateWeightError("assemble_weight: weight is identically zero");
    return w;
}

void write_matrix_market(const SparseOperator& op, std::ostream& out) {
    int nnz_lower = 0;
    for (int i = 0; i < op.n; ++i)
        for (int k = op.row_ptr[static_cast<size_t>(i)]; k < op.row_ptr[static_cast<size_t>(i) + 1]; ++k)
            if (op.col[static_cast<size_t>(k)] <= i) ++nnz_lower;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << op.n << " " << op.n << " " << nnz_lower << "\n";
    char buf[64];
    for (int i = 0; i < op.n; ++i) {
        for (int k = op.row_ptr[static_cast<size_t>(i)]; k < op.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            const int j = op.col[static_cast<size_t>(k)];
            if (j > i) continue;
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, j + 1, op.val[static_cast<size_t>(k)]);
            out << buf;
        }
    }
}

}  // namespace plateforge
