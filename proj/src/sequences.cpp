#include "cvxenv/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOrderTol = 1e-12;

// a <= b within kOrderTol, under the extended-real rules
bool leq(double a, double b) {
    if (a == kInf) return b == kInf;
    if (b == kInf) return true;
    return a <= b + kOrderTol;
}

// |a - b| with both-infinite pairs counting as zero
double abs_gap(double a, double b) {
    if (a == kInf && b == kInf) return 0.0;
    if (a == kInf || b == kInf) return kInf;
    return std::abs(a - b);
}

// hi - lo with conventions: both infinite -> 0, one infinite -> signed infinity
double oriented_gap(double hi, double lo) {
    if (hi == kInf && lo == kInf) return 0.0;
    if (hi == kInf) return kInf;
    if (lo == kInf) return -kInf;
    return hi - lo;
}

GridFunction cutoff_term(std::shared_ptr<const ConvexDomain> domain, const CompactSubset& K,
                         double delta) {
    std::vector<double> vals(domain->grid_size());
    for (int i = 0; i < domain->grid_size(); ++i) {
        double dist = distance_to_set(domain->grid_point(i), K, *domain);
        double excess = dist - 0.5 * delta;
        vals[i] = excess > 0.0 ? 1.0 - (2.0 * excess) / delta : 1.0;
    }
    return GridFunction(std::move(domain), std::move(vals), ClassTag::continuous_bounded);
}

}  // namespace

const char* to_string(Direction d) {
    return d == Direction::increasing ? "increasing" : "decreasing";
}

const char* to_string(EnvelopeKind k) { return k == EnvelopeKind::closure ? "closure" : "hull"; }

FunctionSequence make_sequence(std::vector<GridFunction> terms, GridFunction limit,
                               Direction direction) {
    if (terms.empty()) throw std::invalid_argument("sequence: needs at least one term");
    const auto& dom = limit.domain_ptr();
    for (const auto& t : terms)
        if (t.domain_ptr().get() != dom.get())
            throw std::invalid_argument("sequence: terms and limit must share one domain");

    auto check_order = [&](const GridFunction& lo, const GridFunction& hi, const char* what) {
        for (int i = 0; i < dom->grid_size(); ++i)
            if (!leq(lo.value(i), hi.value(i))) {
                std::ostringstream msg;
                msg << "sequence: " << what << " violated at node " << i;
                throw std::invalid_argument(msg.str());
            }
    };
    for (size_t n = 0; n + 1 < terms.size(); ++n) {
        if (direction == Direction::increasing)
            check_order(terms[n], terms[n + 1], "increasing order");
        else
            check_order(terms[n + 1], terms[n], "decreasing order");
    }
    if (direction == Direction::increasing)
        check_order(terms.back(), limit, "terms below the limit");
    else
        check_order(limit, terms.back(), "terms above the limit");

    double tail = 0.0;
    for (int i = 0; i < dom->grid_size(); ++i)
        tail = std::max(tail, abs_gap(terms.back().value(i), limit.value(i)));

    return FunctionSequence{std::move(terms), std::move(limit), direction, tail};
}

FunctionSequence vicinity_cutoff_sequence(std::shared_ptr<const ConvexDomain> domain,
                                          const std::vector<CompactSubset>& compacts,
                                          double delta) {
    if (!domain) throw std::invalid_argument("cutoff sequence: null domain");
    if (delta <= 0.0) throw std::invalid_argument("cutoff sequence: delta must be positive");
    if (compacts.empty()) throw std::invalid_argument("cutoff sequence: no compacts");
    for (size_t n = 0; n + 1 < compacts.size(); ++n)
        if (!compacts[n].is_subset_of(compacts[n + 1]))
            throw std::invalid_argument("cutoff sequence: compacts must be increasing");
    for (int i = 0; i < domain->grid_size(); ++i)
        if (distance_to_set(domain->grid_point(i), compacts.back(), *domain) > 0.5 * delta)
            throw std::runtime_error(
                "cutoff sequence: half-vicinity of the last compact does not cover the grid");

    std::vector<GridFunction> terms;
    terms.reserve(compacts.size());
    for (const auto& K : compacts) terms.push_back(cutoff_term(domain, K, delta));
    GridFunction limit(domain, std::vector<double>(domain->grid_size(), 1.0),
                       ClassTag::continuous_bounded);
    return make_sequence(std::move(terms), std::move(limit), Direction::increasing);
}

GridFunction pasch_hausdorff(const GridFunction& f, double n) {
    if (n <= 0.0) throw std::invalid_argument("regularization: slope must be positive");
    if (f.finite_count() == 0)
        throw std::invalid_argument("regularization: function has no finite values");
    const ConvexDomain& dom = f.domain();
    std::vector<double> vals(dom.grid_size());
    for (int i = 0; i < dom.grid_size(); ++i) {
        double best = kInf;
        const Point& x = dom.grid_point(i);
        for (int j = 0; j < dom.grid_size(); ++j) {
            if (!f.finite_at(j)) continue;
            double cand = f.value(j) + n * dom.metric().distance(x, dom.grid_point(j));
            best = std::min(best, cand);
        }
        vals[i] = best;
    }
    return GridFunction(f.domain_ptr(), std::move(vals), ClassTag::continuous_bounded);
}

namespace {

ConvergenceReport run_harness(const FunctionSequence& seq, EnvelopeKind kind,
                              const std::vector<Point>& probes, double conv_tol) {
    const auto& dom = seq.limit.domain_ptr();
    if (probes.empty()) throw std::invalid_argument("harness: needs at least one probe point");
    for (const auto& p : probes)
        if (!dom->contains(p)) throw std::invalid_argument("harness: probe outside the domain");
    if (conv_tol <= 0.0) throw std::invalid_argument("harness: tolerance must be positive");

    ConvergenceReport rep;
    rep.kind = kind;
    rep.direction = seq.direction;
    rep.conv_tol = conv_tol;
    rep.tail_gap = seq.tail_gap;
    rep.rows.resize(probes.size());
    for (size_t p = 0; p < probes.size(); ++p) rep.rows[p].probe = probes[p];

    if (kind == EnvelopeKind::closure) {
        // one slope grid shared by every term and the limit, so monotone data
        // stays monotone through the transform
        std::vector<double> L = estimate_lipschitz_per_axis(seq.limit);
        for (const auto& t : seq.terms) {
            auto Lt = estimate_lipschitz_per_axis(t);
            for (size_t a = 0; a < L.size(); ++a) L[a] = std::max(L[a], Lt[a]);
        }
        SlopeGrid S = slope_grid_from_lipschitz(*dom, L);
        rep.discretization_tol = equivalence_tolerance(S, *dom);
        rep.slope_count = static_cast<int>(S.slopes.size());
        rep.slope_max_step = S.max_step;
        rep.slope_lipschitz = S.lipschitz_estimate;
        for (const auto& t : seq.terms) {
            auto table = fenchel_conjugate(t, S);
            for (size_t p = 0; p < probes.size(); ++p)
                rep.rows[p].envelope_per_term.push_back(biconjugate_at(table, probes[p]));
        }
        auto table = fenchel_conjugate(seq.limit, S);
        for (size_t p = 0; p < probes.size(); ++p)
            rep.rows[p].envelope_limit = biconjugate_at(table, probes[p]);
    } else {
        rep.discretization_tol = 0.0;
        for (const auto& t : seq.terms)
            for (size_t p = 0; p < probes.size(); ++p)
                rep.rows[p].envelope_per_term.push_back(envelope_via_measures(t, probes[p]).value);
        for (size_t p = 0; p < probes.size(); ++p)
            rep.rows[p].envelope_limit = envelope_via_measures(seq.limit, probes[p]).value;
    }

    rep.threshold = rep.conv_tol + rep.discretization_tol;
    const double viol_tol = kind == EnvelopeKind::closure ? 1e-12 : 1e-9;
    bool inc = seq.direction == Direction::increasing;
    rep.converged = true;
    for (auto& row : rep.rows) {
        double prev_gap = kInf;
        double gap = 0.0;
        for (double env : row.envelope_per_term) {
            gap = inc ? oriented_gap(row.envelope_limit, env) : oriented_gap(env, row.envelope_limit);
            if (gap > prev_gap + viol_tol) ++rep.monotonicity_violations;
            if (gap < -viol_tol) ++rep.negativity_violations;
            prev_gap = gap;
        }
        row.final_gap = gap;
        double mag = std::abs(gap);
        rep.max_final_gap = std::max(rep.max_final_gap, mag);
        if (!(mag <= rep.threshold)) rep.converged = false;
    }
    return rep;
}

}  // namespace

ConvergenceReport run_convergence_harness(const FunctionSequence& seq, EnvelopeKind kind,
                                          const std::vector<Point>& probes, double conv_tol) {
    if (seq.direction != Direction::increasing)
        throw std::invalid_argument("harness: expected an increasing sequence");
    return run_harness(seq, kind, probes, conv_tol);
}

ConvergenceReport run_decreasing_harness(const FunctionSequence& seq,
                                         const std::vector<Point>& probes, double conv_tol) {
    if (seq.direction != Direction::decreasing)
        throw std::invalid_argument("harness: expected a decreasing sequence");
    return run_harness(seq, EnvelopeKind::closure, probes, conv_tol);
}

void validate_scenario(const ProofTraceScenario& sc) {
    if (!sc.domain) throw std::invalid_argument("scenario: null domain");
    if (sc.measures.empty()) throw std::invalid_argument("scenario: needs measures");
    for (const auto& mu : sc.measures)
        if (mu.domain.get() != sc.domain.get())
            throw std::invalid_argument("scenario: measures on a different domain");
    if (sc.eps <= 0.0 || sc.eps >= 1.0)
        throw std::invalid_argument("scenario: eps must lie in (0,1)");
    if (sc.delta <= 0.0) throw std::invalid_argument("scenario: delta must be positive");
    if (sc.compacts.empty()) throw std::invalid_argument("scenario: needs compacts");
    for (size_t n = 0; n + 1 < sc.compacts.size(); ++n)
        if (!sc.compacts[n].is_subset_of(sc.compacts[n + 1]))
            throw std::invalid_argument("scenario: compacts must be increasing");
    if (static_cast<int>(sc.x0.size()) != sc.domain->dimension())
        throw std::invalid_argument("scenario: anchor dimension mismatch");
    if (!sc.domain->contains(sc.x0))
        throw std::invalid_argument("scenario: anchor outside the domain");
    for (int i = 0; i < sc.domain->grid_size(); ++i)
        if (distance_to_set(sc.domain->grid_point(i), sc.compacts.back(), *sc.domain) >
            0.5 * sc.delta)
            throw std::runtime_error(
                "scenario: half-vicinity of the last compact does not cover the grid");
}

TraceReport proof_trace_check(const ProofTraceScenario& sc, int N_terms) {
    validate_scenario(sc);
    if (N_terms < 1 || N_terms > static_cast<int>(sc.compacts.size()))
        throw std::invalid_argument("trace: term count out of range");

    TraceReport report;
    report.chain_ok = true;
    report.cutoff_cases_ok = true;
    report.min_margin = kInf;
    const double bound = 1.0 - sc.eps;

    for (int n = 1; n <= N_terms; ++n) {
        const CompactSubset& K = sc.compacts[n - 1];
        GridFunction fn = cutoff_term(sc.domain, K, sc.delta);

        // exact cutoff cases: one inside the half-vicinity, strictly
        // negative outside the full vicinity
        for (int i = 0; i < sc.domain->grid_size(); ++i) {
            double dist = distance_to_set(sc.domain->grid_point(i), K, *sc.domain);
            if (dist <= 0.5 * sc.delta) {
                if (fn.value(i) != 1.0) report.cutoff_cases_ok = false;
            } else if (dist > sc.delta) {
                if (!(fn.value(i) < 0.0)) report.cutoff_cases_ok = false;
            }
        }

        TraceRow row;
        row.n = n;
        row.bound = bound;
        for (size_t k = 0; k < sc.measures.size(); ++k) {
            double mass = 0.0;
            const FiniteMeasure& mu = sc.measures[k];
            for (int i = 0; i < mu.size(); ++i)
                if (in_vicinity(sc.domain->grid_point(mu.support[i]), K, sc.delta, *sc.domain))
                    mass += mu.weights[i];
            if (mass < bound) {
                ++row.qualifying_count;
                if (row.k == 0) {
                    row.k = static_cast<int>(k) + 1;
                    row.vicinity_mass = mass;
                }
            }
        }
        if (row.k == 0) {
            std::ostringstream msg;
            msg << "trace: no measure escapes the vicinity of compact " << n;
            throw std::runtime_error(msg.str());
        }

        const FiniteMeasure& mu = sc.measures[row.k - 1];
        Point xk = barycenter(mu);
        row.closure_value = biconjugate_at(fenchel_conjugate(fn, default_slope_grid(fn)), xk);
        row.hull_value = envelope_via_measures(fn, xk).value;
        row.integral = integrate(mu, fn);
        row.margin = bound - row.integral;
        row.barycenter_distance = sc.domain->metric().distance(xk, sc.x0);

        if (!(row.closure_value <= row.hull_value + 1e-9)) report.chain_ok = false;
        if (!(row.hull_value <= row.integral + 1e-9)) report.chain_ok = false;
        if (!(row.integral < bound)) report.chain_ok = false;
        report.min_margin = std::min(report.min_margin, row.margin);
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace cvxenv
