#include "cvxenv/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lattice tuple of a stored grid point, or nullopt for appended vertices.
std::optional<std::vector<int>> tuple_of(const ConvexDomain& dom, const Point& g) {
    const auto& lat = dom.lattice();
    if (!lat) return std::nullopt;
    std::vector<int> k(dom.dimension(), 0);
    for (int a = 0; a < dom.dimension(); ++a) {
        const auto& coords = lat->axis_coords[a];
        int ka = 0;
        if (lat->step[a] > 0.0)
            ka = static_cast<int>(std::llround((g[a] - coords.front()) / lat->step[a]));
        if (ka < 0 || ka >= static_cast<int>(coords.size())) return std::nullopt;
        if (std::abs(g[a] - coords[ka]) > 1e-12 * (1.0 + std::abs(coords[ka]))) return std::nullopt;
        k[a] = ka;
    }
    return k;
}

}  // namespace

const char* to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::continuous_bounded: return "continuous_bounded";
        case ClassTag::lsc_lower_bounded: return "lsc_lower_bounded";
        case ClassTag::lsc_bounded: return "lsc_bounded";
    }
    return "unknown";
}

ClassTag class_tag_from_string(const std::string& s) {
    if (s == "continuous_bounded") return ClassTag::continuous_bounded;
    if (s == "lsc_lower_bounded") return ClassTag::lsc_lower_bounded;
    if (s == "lsc_bounded") return ClassTag::lsc_bounded;
    throw std::invalid_argument("unknown class tag: " + s);
}

GridFunction::GridFunction(std::shared_ptr<const ConvexDomain> domain, std::vector<double> values,
                           ClassTag tag, std::optional<double> lower_bound)
    : domain_(std::move(domain)), values_(std::move(values)), tag_(tag) {
    if (!domain_) throw std::invalid_argument("grid function: null domain");
    if (static_cast<int>(values_.size()) != domain_->grid_size())
        throw std::invalid_argument("grid function: value count does not match the grid");
    double min_finite = kInf;
    for (double v : values_) {
        if (std::isnan(v) || v == -kInf)
            throw std::invalid_argument("grid function: values must be finite or +inf");
        if (v == kInf && tag_ != ClassTag::lsc_lower_bounded)
            throw std::invalid_argument("grid function: +inf values require the lsc_lower_bounded class");
        if (v < min_finite) min_finite = v;
    }
    if (lower_bound) {
        if (!std::isfinite(*lower_bound)) throw std::invalid_argument("grid function: lower bound must be finite");
        if (*lower_bound > min_finite + 1e-15)
            throw std::invalid_argument("grid function: lower bound exceeds a finite value");
        lower_bound_ = *lower_bound;
    } else {
        lower_bound_ = std::isfinite(min_finite) ? min_finite : 0.0;
    }
}

bool GridFunction::finite_at(int i) const { return std::isfinite(values_.at(i)); }

int GridFunction::finite_count() const {
    int c = 0;
    for (double v : values_)
        if (std::isfinite(v)) ++c;
    return c;
}

double GridFunction::eval(const Point& x) const {
    if (static_cast<int>(x.size()) != domain_->dimension())
        throw std::invalid_argument("grid function eval: dimension mismatch");
    if (auto hit = domain_->grid_index_at(x)) return values_[*hit];

    const auto& lat = domain_->lattice();
    if (lat) {
        const int d = domain_->dimension();
        std::vector<int> cell(d, 0);
        std::vector<double> t(d, 0.0);
        std::vector<int> live;  // axes with a genuine second corner
        for (int a = 0; a < d; ++a) {
            const auto& coords = lat->axis_coords[a];
            int n = static_cast<int>(coords.size());
            if (n < 2 || lat->step[a] <= 0.0) continue;
            int k = static_cast<int>(std::floor((x[a] - coords.front()) / lat->step[a]));
            k = std::clamp(k, 0, n - 2);
            cell[a] = k;
            double width = coords[k + 1] - coords[k];
            t[a] = std::clamp((x[a] - coords[k]) / width, 0.0, 1.0);
            live.push_back(a);
        }
        double wsum = 0.0, acc = 0.0, vmin = kInf;
        bool any = false;
        std::vector<int> corner(d);
        for (long bits = 0; bits < (1L << live.size()); ++bits) {
            corner = cell;
            double w = 1.0;
            for (size_t b = 0; b < live.size(); ++b) {
                bool high = (bits >> b) & 1;
                int a = live[b];
                if (high) corner[a] += 1;
                w *= high ? t[a] : 1.0 - t[a];
            }
            auto gi = domain_->lattice_node(corner);
            if (!gi) continue;
            any = true;
            double v = values_[*gi];
            vmin = std::min(vmin, v);
            if (std::isfinite(v)) {
                wsum += w;
                acc += w * v;
            } else if (w > 0.0 && tag_ == ClassTag::continuous_bounded) {
                // unreachable: continuous class has no +inf values
                wsum += 0.0;
            }
        }
        if (any) {
            if (tag_ != ClassTag::continuous_bounded) return vmin;
            if (wsum > 1e-12) return acc / wsum;
        }
    }

    int near = domain_->nearest_grid_index(x);
    if (tag_ == ClassTag::continuous_bounded) return values_[near];
    // lsc fallback: min over all nodes tied for nearest
    double dmin = domain_->metric().distance(x, domain_->grid_point(near));
    double v = kInf;
    for (int i = 0; i < domain_->grid_size(); ++i)
        if (domain_->metric().distance(x, domain_->grid_point(i)) <= dmin + 1e-12)
            v = std::min(v, values_[i]);
    return v;
}

double AffineFunction::eval(const Point& x) const {
    if (x.size() != slope.size()) throw std::invalid_argument("affine eval: dimension mismatch");
    double s = intercept;
    for (size_t i = 0; i < x.size(); ++i) s += slope[i] * x[i];
    return s;
}

void SlopeGrid::validate(int dimension) const {
    if (slopes.empty()) throw std::invalid_argument("slope grid: empty");
    bool has_zero = false;
    for (const auto& s : slopes) {
        if (static_cast<int>(s.size()) != dimension)
            throw std::invalid_argument("slope grid: dimension mismatch");
        bool z = true;
        for (double c : s)
            if (c != 0.0) { z = false; break; }
        if (z) has_zero = true;
    }
    if (!has_zero) throw std::invalid_argument("slope grid: zero slope missing");
    for (const auto& s : slopes) {
        Point neg(s.size());
        for (size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
        bool found = false;
        for (const auto& r : slopes)
            if (r == neg) { found = true; break; }
        if (!found) throw std::invalid_argument("slope grid: not symmetric");
    }
}

std::vector<double> estimate_lipschitz_per_axis(const GridFunction& f) {
    const ConvexDomain& dom = f.domain();
    const int d = dom.dimension();
    std::vector<double> L(d, 0.0);

    double vmin = kInf, vmax = -kInf;
    int finite = 0;
    for (double v : f.values()) {
        if (!std::isfinite(v)) continue;
        ++finite;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const auto& lat = dom.lattice();
    if (lat) {
        // group lattice nodes into axis-aligned lines and take difference
        // quotients between consecutive finite nodes (skipping +inf gaps)
        std::vector<long long> stride(d, 1);
        for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * lat->count(a + 1);
        for (int a = 0; a < d; ++a) {
            if (lat->count(a) < 2 || lat->step[a] <= 0.0) continue;
            std::map<long long, std::vector<std::pair<int, double>>> lines;
            for (int gi = 0; gi < dom.grid_size(); ++gi) {
                auto k = tuple_of(dom, dom.grid_point(gi));
                if (!k) continue;
                long long key = 0;
                for (int b = 0; b < d; ++b)
                    if (b != a) key += stride[b] * (*k)[b];
                lines[key].emplace_back((*k)[a], f.value(gi));
            }
            for (auto& [key, nodes] : lines) {
                std::sort(nodes.begin(), nodes.end());
                int prev_k = -1;
                double prev_v = 0.0;
                for (const auto& [kk, vv] : nodes) {
                    if (!std::isfinite(vv)) continue;
                    if (prev_k >= 0) {
                        double q = std::abs(vv - prev_v) / ((kk - prev_k) * lat->step[a]);
                        L[a] = std::max(L[a], q);
                    }
                    prev_k = kk;
                    prev_v = vv;
                }
            }
        }
    } else {
        // explicit grids: all-pairs estimate, floored by the overall range
        double overall = 0.0;
        if (finite >= 2 && dom.diameter() > 0.0) overall = (vmax - vmin) / dom.diameter();
        for (int i = 0; i < dom.grid_size(); ++i) {
            if (!f.finite_at(i)) continue;
            for (int j = i + 1; j < dom.grid_size(); ++j) {
                if (!f.finite_at(j)) continue;
                double dist = dom.metric().distance(dom.grid_point(i), dom.grid_point(j));
                if (dist > 1e-15)
                    overall = std::max(overall, std::abs(f.value(i) - f.value(j)) / dist);
            }
        }
        for (int a = 0; a < d; ++a) L[a] = overall;
    }
    return L;
}

double estimate_lipschitz(const GridFunction& f) {
    double m = 0.0;
    for (double v : estimate_lipschitz_per_axis(f)) m = std::max(m, v);
    return m;
}

SlopeGrid slope_grid_from_lipschitz(const ConvexDomain& domain, std::vector<double> L_per_axis,
                                    long slope_budget) {
    const int d = domain.dimension();
    if (static_cast<int>(L_per_axis.size()) != d)
        throw std::invalid_argument("slope grid: lipschitz vector dimension mismatch");

    // per-axis spacing: lattice step, or the min positive gap of the grid's
    // distinct axis coordinates for explicit grids
    std::vector<double> h(d, 0.0);
    if (domain.lattice()) {
        h = domain.lattice()->step;
    } else {
        for (int a = 0; a < d; ++a) {
            std::set<double> coords;
            for (const auto& g : domain.grid()) coords.insert(g[a]);
            double gap = kInf, prev = kInf;
            for (double c : coords) {
                if (prev != kInf && c - prev > 0.0) gap = std::min(gap, c - prev);
                prev = c;
            }
            h[a] = std::isfinite(gap) ? gap : 0.0;
        }
    }

    SlopeGrid S;
    S.axis_step.assign(d, 0.0);
    std::vector<std::vector<double>> axis_sets(d);
    long total = 1;
    for (int a = 0; a < d; ++a) {
        double L = L_per_axis[a];
        if (L <= 0.0 || h[a] <= 0.0) {
            axis_sets[a] = {0.0};
        } else {
            double smax = 4.0 * L;
            int half = std::max(1, static_cast<int>(std::ceil(4.0 / h[a])));
            double step = smax / half;
            S.axis_step[a] = step;
            S.max_step = std::max(S.max_step, step);
            auto& set = axis_sets[a];
            set.reserve(2 * static_cast<size_t>(half) + 1);
            for (int k = -half; k <= half; ++k) set.push_back(k * step);
        }
        if (total > slope_budget / static_cast<long>(axis_sets[a].size()) + 1)
            total = slope_budget + 1;
        else
            total *= static_cast<long>(axis_sets[a].size());
        if (total > slope_budget)
            throw std::invalid_argument("slope grid: size exceeds the slope budget");
        S.lipschitz_estimate = std::max(S.lipschitz_estimate, L);
    }

    std::vector<int> k(d, 0);
    Point s(d);
    while (true) {
        for (int a = 0; a < d; ++a) s[a] = axis_sets[a][k[a]];
        S.slopes.push_back(s);
        int a = d - 1;
        while (a >= 0 && ++k[a] >= static_cast<int>(axis_sets[a].size())) k[a--] = 0;
        if (a < 0) break;
    }
    return S;
}

SlopeGrid default_slope_grid(const GridFunction& f, long slope_budget) {
    return slope_grid_from_lipschitz(f.domain(), estimate_lipschitz_per_axis(f), slope_budget);
}

double equivalence_tolerance(const SlopeGrid& S, const ConvexDomain& domain) {
    return 2.0 * S.lipschitz_estimate * domain.spacing() + 2.0 * S.max_step * domain.diameter();
}

}  // namespace cvxenv
