#pragma once

#include "cvxenv/envelopes.hpp"

namespace cvxenv {

enum class Direction { increasing, decreasing };
enum class EnvelopeKind { closure, hull };

const char* to_string(Direction d);
const char* to_string(EnvelopeKind k);

// Monotone sequence of grid functions with its declared pointwise limit.
// Monotonicity is enforced within 1e-12 at every node; the sup-norm distance
// between the last term and the limit is reported, not rejected (a +inf node
// in one of the two with a finite value in the other makes it +inf).
struct FunctionSequence {
    std::vector<GridFunction> terms;
    GridFunction limit;
    Direction direction;
    double tail_gap;
};

FunctionSequence make_sequence(std::vector<GridFunction> terms, GridFunction limit,
                               Direction direction);

// Ramp cutoffs for an increasing family of compact grid subsets:
// f_n(x) = 1 - (2/delta) * max(0, dist(x, K_n) - delta/2),
// equal to 1 on the delta/2-vicinity of K_n and negative outside the
// delta-vicinity. The last compact's delta/2-vicinity must cover the grid,
// making the pointwise limit the constant 1.
FunctionSequence vicinity_cutoff_sequence(std::shared_ptr<const ConvexDomain> domain,
                                          const std::vector<CompactSubset>& compacts,
                                          double delta);

// Lipschitz regularization g(x) = min over finite nodes y of f(y) + n*d(x,y):
// n-Lipschitz, below f, increasing in n, equal to f once n reaches f's
// pairwise grid Lipschitz constant.
GridFunction pasch_hausdorff(const GridFunction& f, double n);

struct ProbeRow {
    Point probe;
    std::vector<double> envelope_per_term;  // chosen envelope of each term at the probe
    double envelope_limit = 0.0;
    double final_gap = 0.0;  // oriented so that convergence drives it to zero from above
};

struct ConvergenceReport {
    EnvelopeKind kind = EnvelopeKind::closure;
    Direction direction = Direction::increasing;
    double conv_tol = 0.0;
    double discretization_tol = 0.0;  // slope-grid equivalence slack; zero for the hull route
    double threshold = 0.0;           // conv_tol + discretization_tol
    double tail_gap = 0.0;
    double max_final_gap = 0.0;
    int monotonicity_violations = 0;  // per-probe gap fails to shrink along n
    int negativity_violations = 0;    // per-probe gap below zero beyond route noise
    bool converged = false;
    int slope_count = 0;  // shared slope grid (closure route only)
    double slope_max_step = 0.0;
    double slope_lipschitz = 0.0;
    std::vector<ProbeRow> rows;
};

// Envelope-convergence check at the probe points. gap_n(x) is
// envelope(limit)(x) - envelope(term_n)(x) for increasing sequences and the
// reverse for decreasing ones; the closure route evaluates every term through
// one shared slope grid so term-to-term comparisons are exact.
ConvergenceReport run_convergence_harness(const FunctionSequence& seq, EnvelopeKind kind,
                                          const std::vector<Point>& probes,
                                          double conv_tol = 1e-6);

// Decreasing-sequence variant (closure route).
ConvergenceReport run_decreasing_harness(const FunctionSequence& seq,
                                         const std::vector<Point>& probes,
                                         double conv_tol = 1e-6);

// Escaping-mass scenario: measures mu_k, an increasing compact family whose
// delta/2-vicinities eventually cover the grid, levels eps/delta, and a
// declared anchor x0 for barycenter-distance reporting.
struct ProofTraceScenario {
    std::shared_ptr<const ConvexDomain> domain;
    std::vector<FiniteMeasure> measures;
    double eps = 0.0;
    double delta = 0.0;
    std::vector<CompactSubset> compacts;
    Point x0;
};

void validate_scenario(const ProofTraceScenario& scenario);

struct TraceRow {
    int n = 0;                  // compact index, 1-based
    int k = 0;                  // smallest qualifying measure index, 1-based
    int qualifying_count = 0;   // measures with vicinity mass below 1 - eps
    double vicinity_mass = 0.0;
    double closure_value = 0.0;  // lower convex envelope of the cutoff at x_k
    double hull_value = 0.0;     // measure-route envelope there
    double integral = 0.0;       // cutoff integrated against mu_k
    double bound = 0.0;          // 1 - eps
    double margin = 0.0;         // bound - integral
    double barycenter_distance = 0.0;  // d(x_k, x0)
};

struct TraceReport {
    std::vector<TraceRow> rows;
    bool chain_ok = false;       // closure <= hull <= integral < bound at every row
    double min_margin = 0.0;
    bool cutoff_cases_ok = false;  // cutoffs exactly 1 inside the half-vicinity,
                                   // strictly negative outside the full one
};

// For n = 1..N_terms, finds the smallest k with mu_k(U_delta(K_n)) < 1 - eps
// (error naming n if none exists) and checks the chain
//   closure(f_n)(x_k) <= hull(f_n)(x_k) <= integral(f_n, mu_k) < 1 - eps
// at x_k = barycenter(mu_k).
TraceReport proof_trace_check(const ProofTraceScenario& scenario, int N_terms);

}  // namespace cvxenv
