#pragma once

#include <optional>

#include "cvxenv/measures.hpp"

namespace cvxenv {

// Conjugate transform of a grid function over a finite slope set:
// value_at(j) = max over finite nodes i of <s_j, x_i> - f(x_i).
struct ConjugateTable {
    std::shared_ptr<const ConvexDomain> domain;
    SlopeGrid slopes;
    std::vector<double> values;
    std::vector<int> argmax;  // grid index achieving each max; lowest index on ties

    int size() const { return static_cast<int>(values.size()); }
    double value_at(int j) const { return values.at(j); }
    int argmax_at(int j) const { return argmax.at(j); }
};

// Throws if f has no finite value. One-dimensional lattice domains use an
// upper-hull scan; everything else takes the direct max.
ConjugateTable fenchel_conjugate(const GridFunction& f, const SlopeGrid& S);

// Double transform: g(x) = max_j <s_j, x> - table.value_at(j), as a grid
// function (always continuous_bounded) or at a single point.
GridFunction biconjugate(const ConjugateTable& table);
double biconjugate_at(const ConjugateTable& table, const Point& x);
int biconjugate_argmax_at(const ConjugateTable& table, const Point& x);

struct MeasureEnvelopeResult {
    double value = 0.0;                    // +inf when x has no representing measure
    std::optional<FiniteMeasure> witness;  // minimizer with support <= dimension+1
};

// min over probability measures on the finite-valued nodes with barycenter x
// of the integral of f.
MeasureEnvelopeResult envelope_via_measures(const GridFunction& f, const Point& x);

// The measure route applied at every grid node.
GridFunction convex_hull_fn(const GridFunction& f);

struct AffineMinorantResult {
    AffineFunction minorant;
    double value_at_anchor = 0.0;  // minorant value at the anchor point
    double envelope_value = 0.0;   // reference lower-envelope value there
    double gap = 0.0;              // envelope_value - value_at_anchor, >= 0
    double max_violation = 0.0;    // max over nodes of minorant - f (should be ~0)
};

// Affine function lying below f whose anchor value is within delta/2 of the
// lower convex envelope at the anchor. A caller-supplied slope grid that is
// too coarse to close that gap raises an error suggesting a denser grid.
AffineMinorantResult affine_minorant(const GridFunction& f, const Point& anchor, double delta,
                                     const SlopeGrid* S = nullptr);

}  // namespace cvxenv
