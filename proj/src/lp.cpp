#include "cvxenv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Working state of the two-phase revised simplex. Row signs are flipped up
// front so rhs >= 0; artificial column j >= n is the unit vector e_{j-n}.
struct Simplex {
    int m = 0;
    int n = 0;
    std::vector<double> a;      // m x n row-major, sign-adjusted
    std::vector<double> b;      // nonnegative rhs
    std::vector<double> costs;  // structural phase-2 costs
    std::vector<double> binv;   // m x m row-major basis inverse
    std::vector<int> basis;     // length m; id >= n marks an artificial
    std::vector<double> xb;     // basic variable values
    LpOptions opt;
    int iterations = 0;

    double A(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    std::vector<double> ftran(int j) const {
        std::vector<double> dir(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double* row = &binv[static_cast<size_t>(i) * m];
            double s = 0.0;
            if (j >= n) {
                s = row[j - n];
            } else {
                for (int k = 0; k < m; ++k) s += row[k] * A(k, j);
            }
            dir[i] = s;
        }
        return dir;
    }

    // Rebuild binv and xb from the basis ids (Gauss-Jordan with partial pivot).
    void refactor() {
        std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
        for (int c = 0; c < m; ++c) {
            int id = basis[c];
            for (int r = 0; r < m; ++r) mat[static_cast<size_t>(r) * m + c] = id >= n ? (r == id - n ? 1.0 : 0.0) : A(r, id);
        }
        std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int r = col + 1; r < m; ++r)
                if (std::abs(mat[static_cast<size_t>(r) * m + col]) > std::abs(mat[static_cast<size_t>(piv) * m + col])) piv = r;
            double pv = mat[static_cast<size_t>(piv) * m + col];
            if (std::abs(pv) < 1e-13) throw std::runtime_error("lp: singular basis during refactorization");
            if (piv != col) {
                for (int k = 0; k < m; ++k) {
                    std::swap(mat[static_cast<size_t>(piv) * m + k], mat[static_cast<size_t>(col) * m + k]);
                    std::swap(inv[static_cast<size_t>(piv) * m + k], inv[static_cast<size_t>(col) * m + k]);
                }
            }
            double invpv = 1.0 / pv;
            for (int k = 0; k < m; ++k) {
                mat[static_cast<size_t>(col) * m + k] *= invpv;
                inv[static_cast<size_t>(col) * m + k] *= invpv;
            }
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                double f = mat[static_cast<size_t>(r) * m + col];
                if (f == 0.0) continue;
                for (int k = 0; k < m; ++k) {
                    mat[static_cast<size_t>(r) * m + k] -= f * mat[static_cast<size_t>(col) * m + k];
                    inv[static_cast<size_t>(r) * m + k] -= f * inv[static_cast<size_t>(col) * m + k];
                }
            }
        }
        binv = std::move(inv);
        recompute_xb();
    }

    void recompute_xb() {
        xb.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double* row = &binv[static_cast<size_t>(i) * m];
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += row[k] * b[k];
            xb[i] = s < 0.0 && s > -opt.feas_tol ? 0.0 : s;
        }
    }

    void pivot(int enter, int leave_row, const std::vector<double>& dir, double t) {
        double pv = dir[leave_row];
        double* lrow = &binv[static_cast<size_t>(leave_row) * m];
        double invpv = 1.0 / pv;
        for (int k = 0; k < m; ++k) lrow[k] *= invpv;
        for (int i = 0; i < m; ++i) {
            if (i == leave_row) continue;
            double f = dir[i];
            if (f == 0.0) continue;
            double* row = &binv[static_cast<size_t>(i) * m];
            for (int k = 0; k < m; ++k) row[k] -= f * lrow[k];
            xb[i] -= t * f;
            if (xb[i] < 0.0 && xb[i] > -opt.feas_tol) xb[i] = 0.0;
        }
        xb[leave_row] = t;
        basis[leave_row] = enter;
    }

    // Runs simplex iterations for one phase. phase1 selects the artificial
    // cost vector. Returns false when the phase-2 objective is unbounded.
    bool optimize(bool phase1) {
        auto cost_of = [&](int id) { return phase1 ? (id >= n ? 1.0 : 0.0) : (id >= n ? 0.0 : costs[id]); };
        bool bland = false;
        int stall = 0;
        double last_obj = kInf;
        while (true) {
            if (++iterations > opt.max_iterations)
                throw std::runtime_error("lp: iteration guard exceeded (possible cycling)");
            if (iterations % 64 == 0) refactor();

            std::vector<double> y(m, 0.0);
            for (int i = 0; i < m; ++i) {
                double ci = cost_of(basis[i]);
                if (ci == 0.0) continue;
                const double* row = &binv[static_cast<size_t>(i) * m];
                for (int k = 0; k < m; ++k) y[k] += ci * row[k];
            }

            int enter = -1;
            double best = -opt.opt_tol;
            for (int j = 0; j < n; ++j) {
                bool basic = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) { basic = true; break; }
                if (basic) continue;
                double yaj = 0.0;
                for (int i = 0; i < m; ++i) yaj += y[i] * A(i, j);
                double r = (phase1 ? 0.0 : costs[j]) - yaj;
                if (r < best) {
                    best = r;
                    enter = j;
                    if (bland) break;  // Bland: first eligible index
                }
                if (bland && enter >= 0) break;
            }
            if (enter < 0) return true;  // optimal for this phase

            std::vector<double> dir = ftran(enter);
            int leave = -1;
            double t = kInf;
            for (int i = 0; i < m; ++i) {
                if (dir[i] <= opt.pivot_tol) continue;
                double ratio = xb[i] / dir[i];
                if (ratio < t - 1e-14 || (ratio < t + 1e-14 && (leave < 0 || basis[i] < basis[leave]))) {
                    t = ratio;
                    leave = i;
                }
            }
            if (leave < 0) {
                if (phase1) throw std::runtime_error("lp: numerical failure (phase-1 ray)");
                return false;  // unbounded
            }
            pivot(enter, leave, dir, t);

            double obj = 0.0;
            for (int i = 0; i < m; ++i) obj += cost_of(basis[i]) * xb[i];
            if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
                stall = 0;
            } else if (++stall >= opt.stall_limit) {
                bland = true;
            }
            last_obj = obj;
        }
    }
};

}  // namespace

LpResult lp_solve(const LpProblem& problem, const LpOptions& options) {
    const int m = static_cast<int>(problem.rows.size());
    const int n = static_cast<int>(problem.costs.size());
    if (m < 1 || n < 1) throw std::invalid_argument("lp: need at least one row and one column");
    if (static_cast<int>(problem.rhs.size()) != m) throw std::invalid_argument("lp: rhs size mismatch");
    for (const auto& row : problem.rows)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("lp: row width mismatch");
    for (double c : problem.costs)
        if (!std::isfinite(c)) throw std::invalid_argument("lp: nonfinite cost");

    Simplex s;
    s.m = m;
    s.n = n;
    s.opt = options;
    s.costs = problem.costs;
    s.a.resize(static_cast<size_t>(m) * n);
    s.b.resize(m);
    for (int i = 0; i < m; ++i) {
        double sign = problem.rhs[i] < 0.0 ? -1.0 : 1.0;
        s.b[i] = sign * problem.rhs[i];
        for (int j = 0; j < n; ++j) s.a[static_cast<size_t>(i) * n + j] = sign * problem.rows[i][j];
    }
    s.basis.resize(m);
    for (int i = 0; i < m; ++i) s.basis[i] = n + i;
    s.binv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) s.binv[static_cast<size_t>(i) * m + i] = 1.0;
    s.xb = s.b;

    s.optimize(true);
    double phase1 = 0.0;
    for (int i = 0; i < m; ++i)
        if (s.basis[i] >= n) phase1 += std::max(0.0, s.xb[i]);

    LpResult result;
    result.infeasibility = phase1;
    if (phase1 > options.feas_tol) {
        result.status = LpStatus::infeasible;
        result.iterations = s.iterations;
        return result;
    }

    // Evict artificials still basic at zero; rows that admit no structural
    // pivot are linearly dependent and get dropped before phase 2.
    std::vector<int> redundant;
    for (int i = 0; i < m; ++i) {
        if (s.basis[i] < n) continue;
        int found = -1;
        std::vector<double> dir;
        for (int j = 0; j < n && found < 0; ++j) {
            bool basic = false;
            for (int k = 0; k < m; ++k)
                if (s.basis[k] == j) { basic = true; break; }
            if (basic) continue;
            dir = s.ftran(j);
            if (std::abs(dir[i]) > options.pivot_tol) found = j;
        }
        if (found >= 0) {
            s.pivot(found, i, dir, dir[i] == 0.0 ? 0.0 : s.xb[i] / dir[i]);
            if (s.xb[i] < 0.0) s.xb[i] = 0.0;
        } else {
            redundant.push_back(i);
        }
    }
    if (!redundant.empty()) {
        LpProblem reduced;
        reduced.costs = problem.costs;
        for (int i = 0; i < m; ++i) {
            if (std::find(redundant.begin(), redundant.end(), i) != redundant.end()) continue;
            reduced.rows.push_back(problem.rows[i]);
            reduced.rhs.push_back(problem.rhs[i]);
        }
        if (reduced.rows.empty()) throw std::runtime_error("lp: all rows redundant");
        return lp_solve(reduced, options);
    }

    bool bounded = s.optimize(false);
    result.iterations = s.iterations;
    if (!bounded) {
        result.status = LpStatus::unbounded;
        return result;
    }

    s.refactor();  // clean basis inverse before extracting the solution
    result.weights.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
        if (s.basis[i] >= n) continue;
        double v = s.xb[i];
        if (v < 0.0) {
            if (v < -options.feas_tol * 10.0) throw std::runtime_error("lp: negative basic value after solve");
            v = 0.0;
        }
        result.weights[s.basis[i]] = v;
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += result.weights[j] * problem.costs[j];
    result.objective = obj;
    result.status = LpStatus::optimal;
    return result;
}

}  // namespace cvxenv
