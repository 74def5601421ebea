#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace oracles {

double bessel_j0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_j1(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 0.5 * x * sum;
}

double bessel_i0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 120; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double bessel_i1(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 120; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return 0.5 * x * sum;
}

double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("bisect: no sign change on [a,b]");
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0 || 0.5 * (b - a) < 1e-16 * std::abs(m)) return m;
        if (fa * fm < 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

double j0_first_root() {
    return bisect([](double x) { return bessel_j0(x); }, 2.0, 3.0);
}

double clamped_plate_beta() {
    return bisect(
        [](double b) { return bessel_j0(b) * bessel_i1(b) + bessel_i0(b) * bessel_j1(b); }, 3.0,
        3.5);
}

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[static_cast<size_t>(i) * n + k]) > std::abs(a[static_cast<size_t>(piv) * n + k])) piv = i;
        if (a[static_cast<size_t>(piv) * n + k] == 0.0) throw std::runtime_error("dense_solve: singular");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(piv) * n + j]);
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a[static_cast<size_t>(i) * n + k] / a[static_cast<size_t>(k) * n + k];
            for (int j = k; j < n; ++j) a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= a[static_cast<size_t>(i) * n + j] * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = s / a[static_cast<size_t>(i) * n + i];
    }
    return x;
}

double dense_smallest_eigenvalue(const std::vector<double>& k_dense, int n,
                                 const std::vector<double>& m_diag) {
    // C = M^-1/2 K M^-1/2 shares the pencil spectrum.
    std::vector<double> c(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            c[static_cast<size_t>(i) * n + j] = k_dense[static_cast<size_t>(i) * n + j] /
                                                std::sqrt(m_diag[static_cast<size_t>(i)] * m_diag[static_cast<size_t>(j)]);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += c[static_cast<size_t>(p) * n + q] * c[static_cast<size_t>(p) * n + q];
        if (off < 1e-28 * n * n) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = c[static_cast<size_t>(p) * n + q];
                if (apq == 0.0) continue;
                const double app = c[static_cast<size_t>(p) * n + p], aqq = c[static_cast<size_t>(q) * n + q];
                const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double cs = std::cos(theta), sn = std::sin(theta);
                for (int i = 0; i < n; ++i) {
                    const double aip = c[static_cast<size_t>(i) * n + p], aiq = c[static_cast<size_t>(i) * n + q];
                    c[static_cast<size_t>(i) * n + p] = cs * aip - sn * aiq;
                    c[static_cast<size_t>(i) * n + q] = sn * aip + cs * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = c[static_cast<size_t>(p) * n + j], aqj = c[static_cast<size_t>(q) * n + j];
                    c[static_cast<size_t>(p) * n + j] = cs * apj - sn * aqj;
                    c[static_cast<size_t>(q) * n + j] = sn * apj + cs * aqj;
                }
            }
    }
    double best = c[0];
    for (int i = 1; i < n; ++i) best = std::min(best, c[static_cast<size_t>(i) * n + i]);
    return best;
}

std::vector<double> to_dense(const plateforge::SparseOperator& op) {
    std::vector<double> a(static_cast<size_t>(op.n) * op.n, 0.0);
    for (int i = 0; i < op.n; ++i)
        for (int k = op.row_ptr[static_cast<size_t>(i)]; k < op.row_ptr[static_cast<size_t>(i) + 1]; ++k)
            a[static_cast<size_t>(i) * op.n + op.col[static_cast<size_t>(k)]] = op.val[static_cast<size_t>(k)];
    return a;
}

double bathtub_lp_minimum(const std::vector<double>& m, const std::vector<double>& values,
                          double area) {
    const int n = static_cast<int>(m.size());
    if (n > 20) throw std::invalid_argument("bathtub_lp_minimum: too many cells");
    double total = 0.0;
    for (double v : m) total += v;
    const double tiny = 1e-12 * total;
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double mass = 0.0, cost = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                mass += m[static_cast<size_t>(i)];
                cost += values[static_cast<size_t>(i)] * m[static_cast<size_t>(i)];
            }
        if (mass > area + tiny) continue;
        if (mass >= area - tiny) {
            best = std::min(best, cost);
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j)) continue;
            const double frac = (area - mass) / m[static_cast<size_t>(j)];
            if (frac <= 1.0 + 1e-12)
                best = std::min(best, cost + std::min(frac, 1.0) * values[static_cast<size_t>(j)] * m[static_cast<size_t>(j)]);
        }
    }
    return best;
}

namespace {

void lattice_search(const std::vector<double>& m, const std::vector<double>& values, double area,
                    int levels, double tol, size_t i, double mass, double cost,
                    const std::vector<double>& max_tail_mass, double& best) {
    if (mass > area + tol) return;
    if (mass + max_tail_mass[i] < area - tol) return;
    if (i == m.size()) {
        if (std::abs(mass - area) <= tol) best = std::min(best, cost);
        return;
    }
    for (int q = 0; q <= levels; ++q) {
        const double eta = static_cast<double>(q) / levels;
        lattice_search(m, values, area, levels, tol, i + 1, mass + eta * m[i],
                       cost + eta * values[i] * m[i], max_tail_mass, best);
    }
}

}  // namespace

double bathtub_lattice_minimum(const std::vector<double>& m, const std::vector<double>& values,
                               double area, int levels, double tol) {
    std::vector<double> max_tail_mass(m.size() + 1, 0.0);
    for (size_t i = m.size(); i > 0; --i) max_tail_mass[i - 1] = max_tail_mass[i] + m[i - 1];
    double best = std::numeric_limits<double>::infinity();
    lattice_search(m, values, area, levels, tol, 0, 0.0, 0.0, max_tail_mass, best);
    return best;
}

}  // namespace oracles
