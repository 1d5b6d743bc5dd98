#pragma once

#include <cstdint>
#include <vector>

namespace cvxenv {

/// Dense linear program in standard equality form:
///     minimize    costs . w
///     subject to  rows[i] . w == rhs[i]   for every row i
///                 w >= 0
///
/// Sized for problems with a handful of rows (barycenter plus normalization)
/// and up to ~10^4 columns.
struct LpProblem {
    std::vector<double> costs;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> weights;   // full-length primal solution (zeros off-basis)
    double objective = 0.0;
    double infeasibility = 0.0;    // phase-1 optimum (residual mass)
    int iterations = 0;
};

struct LpOptions {
    double feas_tol = 1e-9;        // membership / phase-1 acceptance threshold
    double opt_tol = 1e-10;        // reduced-cost threshold
    double pivot_tol = 1e-11;
    int stall_limit = 50;          // non-improving iterations before Bland's rule
    int max_iterations = 20000;    // hard cycling guard; exceeding it throws
};

/// Two-phase revised simplex, Dantzig pricing with a Bland's-rule fallback
/// once the objective stalls. Deterministic: all ties break toward the lowest
/// index. Throws std::runtime_error if the iteration guard is exceeded and
/// std::invalid_argument on malformed input.
LpResult lp_solve(const LpProblem& problem, const LpOptions& options = {});

}  // namespace cvxenv
