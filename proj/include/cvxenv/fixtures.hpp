#pragma once

#include "cvxenv/sequences.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace cvxenv {

// Deterministic uniform generator: fixed engine and a fixed bits-to-double
// mapping, so seeded streams reproduce bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    int uniform_int(int lo, int hi);       // {lo, ..., hi}

private:
    std::mt19937_64 eng_;
};

// --- single functions on [0, 1] -------------------------------------------

// min(|x - 1/4|, |x - 3/4|): W profile whose convex envelope flattens the
// middle bump to zero on [1/4, 3/4]. resolution must be a positive multiple
// of 4 so the kinks and the midpoint stay on the grid.
GridFunction w_shape_1d(int resolution = 64);

// 4x(1-x): concave bump whose convex envelope is the zero chord. resolution
// must be positive and even.
GridFunction concave_bump_1d(int resolution = 64);

// x^2 sampled on the grid: convex data, exact dyadic values for power-of-two
// resolutions.
GridFunction square_1d(int resolution = 64);

// --- random generators (any domain) ----------------------------------------

// continuous piecewise linear: random affine part plus random absolute-value
// kinks anchored at grid points.
GridFunction random_pwl(std::shared_ptr<const ConvexDomain> domain, Rng& rng);

// random piecewise-linear values with roughly inf_fraction of the nodes set
// to +inf (always keeps at least two finite nodes); tag lsc_lower_bounded.
GridFunction random_lsc(std::shared_ptr<const ConvexDomain> domain, Rng& rng,
                        double inf_fraction = 0.3);

// max of a few affine pieces with power-of-two-denominator coefficients:
// exactly convex data, exactly representable on dyadic 1D grids.
GridFunction random_convex_pwl_1d(std::shared_ptr<const ConvexDomain> domain, Rng& rng);

// --- sequence builders ------------------------------------------------------

// limit -/+ 2^{-n} on the finite nodes, n = 1..terms; +inf nodes ride along
// unchanged. increasing shifts down, decreasing shifts up.
FunctionSequence shift_ladder(const GridFunction& limit, int terms, Direction direction);

// pasch_hausdorff(limit, L * 2^{n - terms}) for n = 1..terms, where L is the
// max pairwise grid slope of the limit: increasing, and the last term equals
// the limit exactly.
FunctionSequence regularization_ladder(const GridFunction& limit, int terms);

// count nested index prefixes of the grid, the last being the whole grid.
std::vector<CompactSubset> prefix_compacts(const ConvexDomain& domain, int count);

// vicinity cutoffs over prefix compacts; last term is the constant 1.
FunctionSequence cutoff_ladder(std::shared_ptr<const ConvexDomain> domain, int compacts,
                               double delta);

// --- shipped escaping-mass scenarios ---------------------------------------

struct TraceFixture {
    ProofTraceScenario scenario;
    int n_terms = 0;  // scales to trace (strictly before the covering scale)
};

// Thin 2D rectangle [0,12]x[0,0.2] under the sup metric: twelve unit Diracs
// marching right at half-integer x, compacts {x <= n}. Every traced scale
// escapes with margin exactly 1.8.
TraceFixture scattered_diracs_trace();

// 1D interval: measures split 0.6 at the origin / 0.4 on an atom marching
// right, compacts growing left prefixes. Margin 1.0 per traced scale.
TraceFixture mass_split_trace();

// --- measure families for tightness checks ----------------------------------

struct FamilyFixture {
    std::shared_ptr<const ConvexDomain> domain;
    std::vector<FiniteMeasure> family;
    CompactSubset core;  // natural candidate compact
    double eps = 0.0;    // default check levels
    double delta = 0.0;
};

// member m = 1..members keeps mass 1 - 2^-m at node 0 and sends 2^-m to node
// 8m: tight by design, with geometrically vanishing tails.
FamilyFixture geometric_tail_family(int members = 8, int resolution = 64);

// greedy per-member capture: smallest support prefix (by descending weight)
// reaching mass 1 - eps, united over the family.
CompactSubset capturing_compact(const ConvexDomain& domain,
                                const std::vector<FiniteMeasure>& family, double eps);

// Diracs on the standard basis vectors of R^dimension (explicit-grid domain
// {0, e_1, ..., e_d}): no small compact captures them, but exempting every
// member trivially restores the check.
FamilyFixture escaping_basis_family(int dimension = 20);

// --- named registry for the command-line tool --------------------------------

struct Fixture {
    std::string name;
    std::shared_ptr<const ConvexDomain> domain;
    std::optional<GridFunction> function;
    std::optional<FunctionSequence> sequence;
    std::optional<ProofTraceScenario> scenario;
    int scenario_terms = 0;
    std::vector<FiniteMeasure> family;
    std::optional<CompactSubset> family_core;
    double family_eps = 0.0;
    double family_delta = 0.0;
};

// Builds the named fixture. seed feeds the random fixtures; resolution 0
// means the fixture default, nonzero overrides it where the geometry is
// parameterized (scenario and family fixtures are fixed and reject overrides).
Fixture make_fixture(const std::string& name, std::uint64_t seed = 1, int resolution = 0);

const std::vector<std::string>& fixture_names();

}  // namespace cvxenv
