#include "levx/nnls.hpp"

#include <algorithm>
#include <cmath>

#include "levx/errors.hpp"

namespace levx {

namespace {

// Solves S y = r by Gaussian elimination with partial pivoting; returns false
// on a numerically singular pivot.
bool solve_dense(std::vector<double> s, std::vector<double> r, std::size_t n,
                 std::vector<double>& y, double pivot_tol) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(s[row * n + col]) > std::abs(s[piv * n + col])) piv = row;
        }
        if (std::abs(s[piv * n + col]) < pivot_tol) return false;
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(s[col * n + k], s[piv * n + k]);
            std::swap(r[col], r[piv]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = s[row * n + col] / s[col * n + col];
            for (std::size_t k = col; k < n; ++k) s[row * n + k] -= f * s[col * n + k];
            r[row] -= f * r[col];
        }
    }
    y.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = r[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= s[row * n + k] * y[k];
        y[row] = acc / s[row * n + row];
    }
    return true;
}

}  // namespace

NnlsResult nnls(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                const std::vector<double>& b) {
    if (a.size() != rows * cols || b.size() != rows) {
        throw DomainError("nnls: dimension mismatch");
    }
    if (cols == 0) throw DomainError("nnls: empty design matrix");

    // normal equations G = A^T A, h = A^T b
    std::vector<double> g(cols * cols, 0.0), h(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < cols; ++i) {
            const double ari = a[r * cols + i];
            if (ari == 0.0) continue;
            h[i] += ari * b[r];
            for (std::size_t j = i; j < cols; ++j) g[i * cols + j] += ari * a[r * cols + j];
        }
    }
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < i; ++j) g[i * cols + j] = g[j * cols + i];
    }
    double gscale = 0.0;
    for (std::size_t i = 0; i < cols; ++i) gscale = std::max(gscale, g[i * cols + i]);
    const double pivot_tol = 1e-13 * std::max(gscale, 1e-300);

    NnlsResult result;
    std::vector<double>& x = result.x;
    x.assign(cols, 0.0);
    std::vector<char> passive(cols, 0);

    auto solve_passive = [&](std::vector<double>& z) -> void {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < cols; ++i) {
            if (passive[i]) idx.push_back(i);
        }
        z.assign(cols, 0.0);
        if (idx.empty()) return;
        const std::size_t m = idx.size();
        std::vector<double> sub(m * m), rhs(m), sol;
        for (std::size_t i = 0; i < m; ++i) {
            rhs[i] = h[idx[i]];
            for (std::size_t j = 0; j < m; ++j) sub[i * m + j] = g[idx[i] * cols + idx[j]];
        }
        if (!solve_dense(sub, rhs, m, sol, pivot_tol)) {
            // regularized fallback; marks the problem rank deficient
            result.rank_deficient = true;
            for (std::size_t i = 0; i < m; ++i) sub[i * m + i] += 1e-10 * std::max(gscale, 1.0);
            for (std::size_t i = 0; i < m; ++i) {
                rhs[i] = h[idx[i]];
                for (std::size_t j = 0; j < m; ++j) sub[i * m + j] = g[idx[i] * cols + idx[j]];
                sub[i * m + i] += 1e-10 * std::max(gscale, 1.0);
            }
            if (!solve_dense(sub, rhs, m, sol, 0.0)) {
                throw NumericalError("nnls: singular passive-set system");
            }
        }
        for (std::size_t i = 0; i < m; ++i) z[idx[i]] = sol[i];
    };

    const double w_tol = 1e-12 * std::max(1.0, gscale);
    const std::size_t outer_max = 3 * cols + 20;
    for (std::size_t outer = 0; outer < outer_max; ++outer) {
        // dual w = h - G x
        std::vector<double> w(cols, 0.0);
        for (std::size_t i = 0; i < cols; ++i) {
            double acc = h[i];
            for (std::size_t j = 0; j < cols; ++j) acc -= g[i * cols + j] * x[j];
            w[i] = acc;
        }
        std::size_t best = cols;
        double best_w = w_tol;
        for (std::size_t i = 0; i < cols; ++i) {
            if (!passive[i] && w[i] > best_w) {
                best_w = w[i];
                best = i;
            }
        }
        if (best == cols) break;  // KKT satisfied
        passive[best] = 1;

        for (std::size_t inner = 0; inner < 10 * cols + 10; ++inner) {
            std::vector<double> z;
            solve_passive(z);
            bool feasible = true;
            double alpha = 1.0;
            for (std::size_t i = 0; i < cols; ++i) {
                if (passive[i] && z[i] <= 0.0) {
                    feasible = false;
                    const double denom = x[i] - z[i];
                    if (denom > 0.0) alpha = std::min(alpha, x[i] / denom);
                }
            }
            if (feasible) {
                x = z;
                break;
            }
            for (std::size_t i = 0; i < cols; ++i) {
                if (passive[i]) {
                    x[i] += alpha * (z[i] - x[i]);
                    if (x[i] <= 1e-14 * std::max(1.0, std::abs(z[i]))) {
                        x[i] = 0.0;
                        passive[i] = 0;
                    }
                }
            }
        }
    }

    double btb = 0.0;
    for (const double v : b) btb += v * v;
    double xtgx = 0.0, xth = 0.0;
    for (std::size_t i = 0; i < cols; ++i) {
        xth += x[i] * h[i];
        for (std::size_t j = 0; j < cols; ++j) xtgx += x[i] * g[i * cols + j] * x[j];
    }
    result.residual_norm = std::sqrt(std::max(0.0, btb - 2.0 * xth + xtgx));
    return result;
}

}  // namespace levx
