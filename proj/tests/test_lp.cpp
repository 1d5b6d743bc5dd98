#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cvxenv/lp.hpp"

using namespace cvxenv;

namespace {

double uniform(std::mt19937_64& eng, double lo, double hi) {
    double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

// Independent oracle for the barycentric envelope LP on a 1d node set:
// exhaustive minimization over single nodes and node pairs. Returns +inf
// when x is outside the hull of the nodes.
double brute_envelope_1d(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
    const double inf = std::numeric_limits<double>::infinity();
    double best = inf;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - x) < 1e-12 && fs[i] < best) best = fs[i];
        for (size_t j = i + 1; j < xs.size(); ++j) {
            double lo = std::min(xs[i], xs[j]), hi = std::max(xs[i], xs[j]);
            if (x < lo - 1e-12 || x > hi + 1e-12 || hi - lo < 1e-12) continue;
            double t = (x - xs[i]) / (xs[j] - xs[i]);
            if (t < -1e-12 || t > 1.0 + 1e-12) continue;
            double v = (1.0 - t) * fs[i] + t * fs[j];
            if (v < best) best = v;
        }
    }
    return best;
}

LpProblem envelope_problem_1d(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
    LpProblem p;
    p.costs = fs;
    p.rows.assign(2, std::vector<double>(xs.size(), 1.0));
    p.rows[1] = xs;
    p.rhs = {1.0, x};
    return p;
}

}  // namespace

TEST_CASE("dirac at a vertex when the barycenter constraint sits on it") {
    // nodes 0, 0.5, 1 with costs 5, 1, 7; barycenter pinned at node 0
    LpProblem p = envelope_problem_1d({0.0, 0.5, 1.0}, {5.0, 1.0, 7.0}, 0.0);
    LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.weights[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("midpoint mixes the two cheap endpoints") {
    // W-like costs: the interior node is expensive, endpoints are cheap
    LpProblem p = envelope_problem_1d({0.0, 0.5, 1.0}, {1.0, 10.0, 3.0}, 0.5);
    LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-12));  // (1+3)/2
    CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.weights[2] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("infeasible when the target is outside the hull") {
    LpProblem p = envelope_problem_1d({0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, 2.0);
    LpResult r = lp_solve(p);
    CHECK(r.status == LpStatus::infeasible);
    CHECK(r.infeasibility > 0.5);
}

TEST_CASE("feasibility-only problems report optimal with zero objective") {
    LpProblem p = envelope_problem_1d({0.0, 1.0}, {0.0, 0.0}, 0.25);
    LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(0.0));
    double bary = r.weights[0] * 0.0 + r.weights[1] * 1.0;
    CHECK(bary == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("unbounded problems are detected") {
    // minimize -w over a single redundant-free ray: w1 - w2 == 1, both >= 0
    LpProblem p;
    p.costs = {-1.0, -1.0};
    p.rows = {{1.0, -1.0}};
    p.rhs = {1.0};
    LpResult r = lp_solve(p);
    CHECK(r.status == LpStatus::unbounded);
}

TEST_CASE("redundant rows do not break the solve") {
    // the second row duplicates the first
    LpProblem p;
    p.costs = {2.0, 1.0};
    p.rows = {{1.0, 1.0}, {1.0, 1.0}};
    p.rhs = {1.0, 1.0};
    LpResult r = lp_solve(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("malformed input throws") {
    LpProblem p;
    p.costs = {1.0};
    p.rows = {{1.0, 2.0}};
    p.rhs = {1.0};
    CHECK_THROWS_AS(lp_solve(p), std::invalid_argument);
}

TEST_CASE("random 1d envelope LPs match exhaustive pair enumeration") {
    std::mt19937_64 eng(20260817u);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + static_cast<int>(eng() % 10);
        std::vector<double> xs(n), fs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = uniform(eng, 0.0, 1.0);
            fs[i] = uniform(eng, -2.0, 2.0);
        }
        xs[0] = 0.0;
        xs[1] = 1.0;  // keep a nondegenerate hull
        double x = uniform(eng, 0.0, 1.0);
        LpResult r = lp_solve(envelope_problem_1d(xs, fs, x));
        double expect = brute_envelope_1d(xs, fs, x);
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(expect).epsilon(1e-9));
        // solution is a genuine probability measure with the right barycenter
        double mass = 0.0, bary = 0.0;
        int support = 0;
        for (int i = 0; i < n; ++i) {
            REQUIRE(r.weights[i] >= -1e-11);
            mass += r.weights[i];
            bary += r.weights[i] * xs[i];
            if (r.weights[i] > 1e-15) ++support;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(bary == doctest::Approx(x).epsilon(1e-9));
        CHECK(support <= 2);  // basic solutions: at most d+1 = 2 atoms
    }
}

TEST_CASE("determinism: identical problems give identical weights") {
    std::mt19937_64 eng(7u);
    std::vector<double> xs(12), fs(12);
    for (int i = 0; i < 12; ++i) {
        xs[i] = uniform(eng, 0.0, 1.0);
        fs[i] = uniform(eng, -1.0, 1.0);
    }
    xs[0] = 0.0;
    xs[1] = 1.0;
    LpResult a = lp_solve(envelope_problem_1d(xs, fs, 0.37));
    LpResult b = lp_solve(envelope_problem_1d(xs, fs, 0.37));
    REQUIRE(a.status == LpStatus::optimal);
    CHECK(a.weights == b.weights);
    CHECK(a.objective == b.objective);
}
