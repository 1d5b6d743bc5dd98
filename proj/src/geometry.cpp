#include "cvxenv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvxenv/lp.hpp"

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool coords_match(const Point& a, const Point& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        double tol = 1e-12 * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])));
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

void check_point(const Point& x, int dim, const char* what) {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": nonfinite coordinate");
}

bool hull_contains(int dim, const std::vector<Point>& verts, const Point& x) {
    // cheap bounding-box reject before the feasibility LP
    for (int a = 0; a < dim; ++a) {
        double lo = kInf, hi = -kInf;
        for (const auto& v : verts) {
            lo = std::min(lo, v[a]);
            hi = std::max(hi, v[a]);
        }
        if (x[a] < lo - ConvexDomain::tol_geom || x[a] > hi + ConvexDomain::tol_geom) return false;
    }
    LpProblem p;
    p.costs.assign(verts.size(), 0.0);
    p.rows.assign(static_cast<size_t>(dim) + 1, std::vector<double>(verts.size()));
    p.rhs.assign(static_cast<size_t>(dim) + 1, 0.0);
    for (size_t j = 0; j < verts.size(); ++j) p.rows[0][j] = 1.0;
    p.rhs[0] = 1.0;
    for (int a = 0; a < dim; ++a) {
        for (size_t j = 0; j < verts.size(); ++j) p.rows[static_cast<size_t>(a) + 1][j] = verts[j][a];
        p.rhs[static_cast<size_t>(a) + 1] = x[a];
    }
    LpOptions o;
    o.feas_tol = ConvexDomain::tol_geom;
    return lp_solve(p, o).status == LpStatus::optimal;
}

}  // namespace

double Metric::distance(const Point& a, const Point& b) const {
    if (a.size() != b.size()) throw std::invalid_argument("metric: dimension mismatch");
    if (std::isinf(p)) {
        double m = 0.0;
        for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    }
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(s, 1.0 / p);
}

Metric Metric::l1() { return Metric{1.0}; }
Metric Metric::l2() { return Metric{2.0}; }
Metric Metric::linf() { return Metric{kInf}; }

ConvexDomain::ConvexDomain(int dimension, std::vector<Point> vertices, Metric metric,
                           std::vector<Point> grid, std::optional<LatticeInfo> lattice)
    : dim_(dimension),
      vertices_(std::move(vertices)),
      metric_(metric),
      grid_(std::move(grid)),
      lattice_(std::move(lattice)) {
    if (dim_ < 1) throw std::invalid_argument("domain: dimension must be >= 1");
    if (vertices_.empty()) throw std::invalid_argument("domain: vertex list is empty");
    if (grid_.empty()) throw std::invalid_argument("domain: grid is empty");
    if (!(metric_.p >= 1.0)) throw std::invalid_argument("domain: metric exponent must be >= 1");
    for (const auto& v : vertices_) check_point(v, dim_, "domain vertex");
    for (const auto& g : grid_) check_point(g, dim_, "domain grid point");
    for (const auto& g : grid_)
        if (!hull_contains(dim_, vertices_, g))
            throw std::invalid_argument("domain: grid point outside the hull of the vertices");
    for (const auto& v : vertices_) {
        bool found = false;
        for (const auto& g : grid_)
            if (coords_match(v, g)) { found = true; break; }
        if (!found) throw std::invalid_argument("domain: vertex missing from the grid");
    }
    for (size_t i = 0; i < vertices_.size(); ++i)
        for (size_t j = i + 1; j < vertices_.size(); ++j)
            diameter_ = std::max(diameter_, metric_.distance(vertices_[i], vertices_[j]));
    if (lattice_) {
        if (static_cast<int>(lattice_->axis_coords.size()) != dim_ ||
            static_cast<int>(lattice_->step.size()) != dim_)
            throw std::invalid_argument("domain: lattice info shape mismatch");
        for (int a = 0; a < dim_; ++a) spacing_ = std::max(spacing_, lattice_->step[a]);
        index_lattice();
    } else {
        offgrid_extra_.resize(grid_.size());
        for (size_t i = 0; i < grid_.size(); ++i) offgrid_extra_[i] = static_cast<int>(i);
    }
}

void ConvexDomain::index_lattice() {
    const LatticeInfo& lat = *lattice_;
    std::vector<long long> stride(dim_, 1);
    for (int a = dim_ - 2; a >= 0; --a) stride[a] = stride[a + 1] * lat.count(a + 1);
    std::vector<std::pair<long long, int>> entries;
    for (size_t gi = 0; gi < grid_.size(); ++gi) {
        long long key = 0;
        bool on = true;
        for (int a = 0; a < dim_ && on; ++a) {
            const auto& coords = lat.axis_coords[a];
            int k = 0;
            if (lat.step[a] > 0.0)
                k = static_cast<int>(std::llround((grid_[gi][a] - coords.front()) / lat.step[a]));
            if (k < 0 || k >= static_cast<int>(coords.size())) {
                on = false;
                break;
            }
            double tol = 1e-12 * (1.0 + std::abs(coords[k]));
            if (std::abs(grid_[gi][a] - coords[k]) > tol) {
                on = false;
                break;
            }
            key += stride[a] * k;
        }
        if (on)
            entries.emplace_back(key, static_cast<int>(gi));
        else
            offgrid_extra_.push_back(static_cast<int>(gi));
    }
    std::sort(entries.begin(), entries.end());
    lattice_key_.reserve(entries.size());
    lattice_val_.reserve(entries.size());
    for (const auto& [k, v] : entries) {
        lattice_key_.push_back(k);
        lattice_val_.push_back(v);
    }
}

std::optional<int> ConvexDomain::lattice_lookup(const std::vector<int>& k) const {
    if (!lattice_) return std::nullopt;
    const LatticeInfo& lat = *lattice_;
    long long key = 0;
    long long stride = 1;
    for (int a = dim_ - 1; a >= 0; --a) {
        if (k[a] < 0 || k[a] >= lat.count(a)) return std::nullopt;
        key += stride * k[a];
        stride *= lat.count(a);
    }
    auto it = std::lower_bound(lattice_key_.begin(), lattice_key_.end(), key);
    if (it == lattice_key_.end() || *it != key) return std::nullopt;
    return lattice_val_[static_cast<size_t>(it - lattice_key_.begin())];
}

bool ConvexDomain::contains(const Point& x) const {
    check_point(x, dim_, "contains");
    return hull_contains(dim_, vertices_, x);
}

std::optional<int> ConvexDomain::grid_index_at(const Point& x) const {
    if (static_cast<int>(x.size()) != dim_) return std::nullopt;
    if (lattice_) {
        const LatticeInfo& lat = *lattice_;
        std::vector<int> k(dim_, 0);
        bool ok = true;
        for (int a = 0; a < dim_ && ok; ++a) {
            const auto& coords = lat.axis_coords[a];
            int ka = 0;
            if (lat.step[a] > 0.0) ka = static_cast<int>(std::llround((x[a] - coords.front()) / lat.step[a]));
            if (ka < 0 || ka >= static_cast<int>(coords.size())) {
                ok = false;
                break;
            }
            double tol = 1e-12 * (1.0 + std::abs(coords[ka]));
            if (std::abs(x[a] - coords[ka]) > tol) ok = false;
            k[a] = ka;
        }
        if (ok) {
            auto hit = lattice_lookup(k);
            if (hit) return hit;
        }
    }
    for (int gi : offgrid_extra_)
        if (coords_match(x, grid_[gi])) return gi;
    return std::nullopt;
}

int ConvexDomain::nearest_grid_index(const Point& x) const {
    check_point(x, dim_, "nearest_grid_index");
    int best = 0;
    double bestd = kInf;
    for (size_t i = 0; i < grid_.size(); ++i) {
        double d = metric_.distance(x, grid_[i]);
        if (d < bestd) {
            bestd = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::shared_ptr<const ConvexDomain> make_grid(int dimension, std::vector<Point> vertices,
                                              Metric metric, int resolution, long point_budget) {
    if (dimension < 1) throw std::invalid_argument("make_grid: dimension must be >= 1");
    if (resolution < 1) throw std::invalid_argument("make_grid: resolution must be >= 1");
    if (vertices.empty()) throw std::invalid_argument("make_grid: vertex list is empty");
    for (const auto& v : vertices) check_point(v, dimension, "make_grid vertex");

    LatticeInfo lat;
    lat.axis_coords.resize(dimension);
    lat.step.resize(dimension);
    long candidates = 1;
    for (int a = 0; a < dimension; ++a) {
        double lo = kInf, hi = -kInf;
        for (const auto& v : vertices) {
            lo = std::min(lo, v[a]);
            hi = std::max(hi, v[a]);
        }
        double extent = hi - lo;
        auto& coords = lat.axis_coords[a];
        if (extent <= 0.0) {
            coords = {lo};
            lat.step[a] = 0.0;
        } else {
            coords.resize(static_cast<size_t>(resolution) + 1);
            for (int k = 0; k <= resolution; ++k)
                coords[k] = k == resolution ? hi : lo + (extent * k) / resolution;
            lat.step[a] = extent / resolution;
        }
        if (candidates > point_budget / static_cast<long>(coords.size()) + 1)
            candidates = point_budget + 1;
        else
            candidates *= static_cast<long>(coords.size());
        if (candidates > point_budget)
            throw std::invalid_argument("make_grid: lattice candidate count exceeds the point budget");
    }

    std::vector<Point> grid;
    std::vector<int> k(dimension, 0);
    Point x(dimension);
    while (true) {
        for (int a = 0; a < dimension; ++a) x[a] = lat.axis_coords[a][k[a]];
        if (hull_contains(dimension, vertices, x)) grid.push_back(x);
        int a = dimension - 1;
        while (a >= 0 && ++k[a] >= lat.count(a)) k[a--] = 0;
        if (a < 0) break;
    }
    for (const auto& v : vertices) {
        bool present = false;
        for (const auto& g : grid)
            if (coords_match(v, g)) { present = true; break; }
        if (!present) grid.push_back(v);
    }
    return std::make_shared<ConvexDomain>(dimension, std::move(vertices), metric, std::move(grid),
                                          std::move(lat));
}

CompactSubset CompactSubset::of(const ConvexDomain& domain, std::vector<int> indices) {
    if (indices.empty()) throw std::invalid_argument("compact subset: empty index set");
    for (int i : indices)
        if (i < 0 || i >= domain.grid_size())
            throw std::invalid_argument("compact subset: index out of range");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return CompactSubset{std::move(indices)};
}

bool CompactSubset::contains_index(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

bool CompactSubset::is_subset_of(const CompactSubset& other) const {
    return std::includes(other.indices.begin(), other.indices.end(), indices.begin(), indices.end());
}

double distance_to_set(const Point& x, const CompactSubset& K, const ConvexDomain& domain) {
    if (K.indices.empty()) throw std::invalid_argument("distance_to_set: empty subset");
    check_point(x, domain.dimension(), "distance_to_set");
    double best = kInf;
    for (int i : K.indices) best = std::min(best, domain.metric().distance(x, domain.grid_point(i)));
    return best;
}

bool in_vicinity(const Point& x, const CompactSubset& K, double delta, const ConvexDomain& domain) {
    if (!(delta > 0.0)) throw std::invalid_argument("in_vicinity: delta must be positive");
    return distance_to_set(x, K, domain) <= delta;
}

CompactSubset vicinity_indices(const ConvexDomain& domain, const CompactSubset& K, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("vicinity_indices: delta must be positive");
    std::vector<int> out;
    for (int i = 0; i < domain.grid_size(); ++i)
        if (distance_to_set(domain.grid_point(i), K, domain) <= delta) out.push_back(i);
    return CompactSubset{std::move(out)};
}

}  // namespace cvxenv
