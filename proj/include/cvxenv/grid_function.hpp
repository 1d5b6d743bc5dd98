#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cvxenv/geometry.hpp"

namespace cvxenv {

/// Absolute slack for envelope-side comparisons (sandwich checks, affine
/// minorant domination, midpoint convexity scans).
constexpr double tol_env_default = 1e-8;

enum class ClassTag { continuous_bounded, lsc_lower_bounded, lsc_bounded };

const char* to_string(ClassTag tag);
ClassTag class_tag_from_string(const std::string& s);

/// Extended-real function sampled on a domain grid. +inf is an explicit
/// sentinel (such nodes are excluded from conjugate maximands and LP
/// columns); -inf and NaN are rejected outright.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const ConvexDomain> domain, std::vector<double> values,
                 ClassTag tag, std::optional<double> lower_bound = {});

    const ConvexDomain& domain() const { return *domain_; }
    const std::shared_ptr<const ConvexDomain>& domain_ptr() const { return domain_; }
    const std::vector<double>& values() const { return values_; }
    double value(int i) const { return values_.at(i); }
    ClassTag tag() const { return tag_; }
    double lower_bound() const { return lower_bound_; }
    bool finite_at(int i) const;
    int finite_count() const;

    /// Grid points evaluate exactly. Off grid, the continuous class uses
    /// multilinear interpolation over the cell corners present in the grid
    /// (weights renormalized when the polytope clips the cell); lsc classes
    /// use the min of the present corner values. Falls back to the nearest
    /// grid node where no cell structure is available.
    double eval(const Point& x) const;

private:
    std::shared_ptr<const ConvexDomain> domain_;
    std::vector<double> values_;
    ClassTag tag_;
    double lower_bound_ = 0.0;
};

struct AffineFunction {
    Point slope;
    double intercept = 0.0;

    double eval(const Point& x) const;
};

/// Finite symmetric slope set containing 0, stored as a flat list in a
/// deterministic (lexicographic per-axis) order.
struct SlopeGrid {
    std::vector<Point> slopes;
    std::vector<double> axis_step;    // per-axis increment used to build it
    double max_step = 0.0;
    double lipschitz_estimate = 0.0;  // L_est behind the default sizing

    int size() const { return static_cast<int>(slopes.size()); }
    void validate(int dimension) const;  // nonempty, zero present, symmetric
};

/// Max difference quotient between consecutive finite nodes along each
/// lattice axis line (all finite pairs for explicit-grid domains), floored
/// by the global finite range over the domain diameter.
std::vector<double> estimate_lipschitz_per_axis(const GridFunction& f);
double estimate_lipschitz(const GridFunction& f);

/// Default slope grid: per axis a, slopes run over {-S_max_a .. S_max_a}
/// with S_max_a = 4 * L_a and uniform step close to L_a * h_a, so the
/// per-axis count is about 8/h_a + 1 regardless of L.
SlopeGrid default_slope_grid(const GridFunction& f, long slope_budget = 1000000);
SlopeGrid slope_grid_from_lipschitz(const ConvexDomain& domain, std::vector<double> L_per_axis,
                                    long slope_budget = 1000000);

/// Discretization tolerance tying the conjugation route to the barycentric
/// LP route: 2*L*h + 2*step*diam.
double equivalence_tolerance(const SlopeGrid& S, const ConvexDomain& domain);

}  // namespace cvxenv
