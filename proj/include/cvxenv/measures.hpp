#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cvxenv/grid_function.hpp"

namespace cvxenv {

// Finitely supported probability measure on a domain's grid. Support indices
// are ascending and unique; weights are strictly positive and sum to one.
struct FiniteMeasure {
    std::shared_ptr<const ConvexDomain> domain;
    std::vector<int> support;
    std::vector<double> weights;

    int size() const { return static_cast<int>(support.size()); }
};

// Builds a measure from raw (index, weight) data: merges duplicate indices,
// drops weights below 1e-15, and renormalizes the total mass to one. The raw
// mass must already be within 1e-6 of one.
FiniteMeasure make_measure(std::shared_ptr<const ConvexDomain> domain, std::vector<int> support,
                           std::vector<double> weights);

Point barycenter(const FiniteMeasure& mu);

// Integral of a grid function (or a pointwise integrand) against the measure.
// A +inf value carried by any support point makes the integral +inf; an
// integrand returning NaN is an error.
double integrate(const FiniteMeasure& mu, const GridFunction& f);
double integrate(const FiniteMeasure& mu, const std::function<double(const Point&)>& f);

// Reduces the support to at most dimension+1 points while preserving the
// barycenter and total mass (classical affine-dependence elimination).
FiniteMeasure caratheodory_reduce(const FiniteMeasure& mu);

struct TightnessReport {
    bool tight = false;
    double vicinity_mass = 0.0;   // mass carried within the delta-vicinity of K
    std::vector<int> offending;   // support grid indices outside that vicinity
};

// Checks mu(U_delta(K)) >= 1 - eps.
TightnessReport tightness_check(const FiniteMeasure& mu, const CompactSubset& K, double delta,
                                double eps);

struct FamilyTightnessReport {
    bool tight = false;
    std::vector<int> offending;   // family indices whose vicinity mass is short
    std::vector<double> masses;   // vicinity mass per family member
};

// Family-level criterion: every member except the exempted indices must carry
// mass >= 1 - eps inside the delta-vicinity of K. Exempt members are still
// measured and listed in `masses`, but cannot fail the check.
FamilyTightnessReport tightness_check(const std::vector<FiniteMeasure>& family,
                                      const CompactSubset& K, double delta, double eps,
                                      const std::vector<int>& exempt = {});

struct ScaleReport {
    int scale = 0;
    double eps_n = 0.0;
    double delta_n = 0.0;
    int compact_size = 0;
    double min_mass = 1.0;  // smallest vicinity mass over the family at this scale
};

struct TightCompactResult {
    CompactSubset compact;            // grid points lying in every scale's vicinity
    std::vector<ScaleReport> scales;
    double mass_bound = 0.0;          // 1 - sum of the per-scale eps values
    std::vector<double> family_mass;  // mass each family member places on `compact`
};

// Supplies a compact subset expected to satisfy mu(U_delta_n(K)) >= 1 - eps_n
// for every family member.
using CompactProvider = std::function<CompactSubset(double eps_n, double delta_n, int scale)>;

// Composes per-scale compacts (eps_n = delta_n = eps * 2^-n for n = 1..n_max)
// into a single subset carrying at least 1 - eps of every member's mass.
// Throws if a provider's compact fails its scale's mass requirement.
TightCompactResult compose_tight_compact(std::shared_ptr<const ConvexDomain> domain,
                                         const std::vector<FiniteMeasure>& family,
                                         const CompactProvider& provider, double eps,
                                         int n_max = 30);

}  // namespace cvxenv
