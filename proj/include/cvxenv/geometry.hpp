#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace cvxenv {

using Point = std::vector<double>;

/// lp metric on R^d; p lives in [1, inf] with 1, 2 and inf the supported
/// workhorses (other exponents are computed via pow and work, but only the
/// three named ones are exercised by the shipped fixtures).
struct Metric {
    double p = 2.0;

    double distance(const Point& a, const Point& b) const;

    static Metric l1();
    static Metric l2();
    static Metric linf();
};

/// Per-axis bookkeeping for grids produced by make_grid. Axes with zero
/// extent carry step 0 and a single coordinate.
struct LatticeInfo {
    std::vector<std::vector<double>> axis_coords;  // ascending node coordinates per axis
    std::vector<double> step;                      // uniform spacing per axis (0 when a single node)

    int count(int axis) const { return static_cast<int>(axis_coords[axis].size()); }
};

/// Compact convex polytope described by its vertex list, together with the
/// finite evaluation grid every other module works on. Immutable; all
/// member operations are pure.
class ConvexDomain {
public:
    /// Validates the invariants: nonempty finite vertices, grid nonempty,
    /// every vertex present in the grid, every grid point inside the hull
    /// of the vertices (feasibility LP at tol_geom).
    ConvexDomain(int dimension, std::vector<Point> vertices, Metric metric,
                 std::vector<Point> grid, std::optional<LatticeInfo> lattice = {});

    int dimension() const { return dim_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Point>& grid() const { return grid_; }
    const Metric& metric() const { return metric_; }
    const std::optional<LatticeInfo>& lattice() const { return lattice_; }
    int grid_size() const { return static_cast<int>(grid_.size()); }
    const Point& grid_point(int i) const { return grid_.at(i); }

    /// Max per-axis lattice step; 0 for explicit-grid domains.
    double spacing() const { return spacing_; }
    /// Max pairwise vertex distance in the domain metric.
    double diameter() const { return diameter_; }

    /// Membership in the convex hull of the vertices, decided by a
    /// feasibility LP with absolute tolerance tol_geom = 1e-9.
    bool contains(const Point& x) const;

    /// Index of the grid point matching x to within the snap tolerance
    /// (1e-12 relative, per axis), if any.
    std::optional<int> grid_index_at(const Point& x) const;

    /// Index of the grid point nearest to x in the domain metric.
    int nearest_grid_index(const Point& x) const;

    static constexpr double tol_geom = 1e-9;

private:
    int dim_;
    std::vector<Point> vertices_;
    Metric metric_;
    std::vector<Point> grid_;
    std::optional<LatticeInfo> lattice_;
    double spacing_ = 0.0;
    double diameter_ = 0.0;
    std::vector<long long> lattice_key_;   // sorted encoded lattice indices
    std::vector<int> lattice_val_;         // grid index per key
    std::vector<int> offgrid_extra_;       // grid indices not on the lattice

    std::optional<int> lattice_lookup(const std::vector<int>& k) const;
    void index_lattice();

public:
    // internal helper shared with GridFunction evaluation
    std::optional<int> lattice_node(const std::vector<int>& k) const { return lattice_lookup(k); }
};

/// Regular lattice over the vertex bounding box intersected with the
/// polytope, plus the vertices themselves. resolution = subdivisions per
/// axis; the candidate count (resolution+1)^d must stay within point_budget.
std::shared_ptr<const ConvexDomain> make_grid(int dimension, std::vector<Point> vertices,
                                              Metric metric, int resolution,
                                              long point_budget = 200000);

/// Finite subset of a domain's grid held as sorted unique indices.
struct CompactSubset {
    std::vector<int> indices;

    static CompactSubset of(const ConvexDomain& domain, std::vector<int> indices);
    bool contains_index(int i) const;
    bool is_subset_of(const CompactSubset& other) const;
};

/// Min distance from x to the points of K, in the domain metric.
double distance_to_set(const Point& x, const CompactSubset& K, const ConvexDomain& domain);

/// Closed vicinity test: distance_to_set(x, K) <= delta. delta must be > 0.
bool in_vicinity(const Point& x, const CompactSubset& K, double delta, const ConvexDomain& domain);

/// Grid indices whose points lie in the closed delta-vicinity of K.
CompactSubset vicinity_indices(const ConvexDomain& domain, const CompactSubset& K, double delta);

}  // namespace cvxenv
