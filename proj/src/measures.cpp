#include "cvxenv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cvxenv {

namespace {

constexpr double kPrune = 1e-15;

// Nonzero vector c with sum(c) = 0 and sum(c_j * x_j) = 0, found by reduced
// row echelon elimination; the first free column carries coefficient one.
std::vector<double> affine_dependence(const std::vector<Point>& pts, int dim) {
    const int rows = dim + 1;
    const int cols = static_cast<int>(pts.size());
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
    for (int j = 0; j < cols; ++j) {
        a[0][j] = 1.0;
        for (int i = 0; i < dim; ++i) a[1 + i][j] = pts[j][i];
    }
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int best = -1;
        double best_abs = 1e-12;
        for (int i = r; i < rows; ++i)
            if (std::abs(a[i][c]) > best_abs) {
                best_abs = std::abs(a[i][c]);
                best = i;
            }
        if (best < 0) continue;
        std::swap(a[r], a[best]);
        double piv = a[r][c];
        for (int jj = 0; jj < cols; ++jj) a[r][jj] /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0.0) continue;
            double factor = a[i][c];
            for (int jj = 0; jj < cols; ++jj) a[i][jj] -= factor * a[r][jj];
        }
        pivot_col.push_back(c);
        ++r;
    }
    int free_col = -1;
    for (int c = 0; c < cols; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
            free_col = c;
            break;
        }
    if (free_col < 0) throw std::runtime_error("measure reduction: no affine dependence found");
    std::vector<double> dep(cols, 0.0);
    dep[free_col] = 1.0;
    for (size_t pr = 0; pr < pivot_col.size(); ++pr) dep[pivot_col[pr]] = -a[pr][free_col];
    return dep;
}

}  // namespace

FiniteMeasure make_measure(std::shared_ptr<const ConvexDomain> domain, std::vector<int> support,
                           std::vector<double> weights) {
    if (!domain) throw std::invalid_argument("measure: null domain");
    if (support.empty() || support.size() != weights.size())
        throw std::invalid_argument("measure: support and weights must be nonempty and matched");
    std::map<int, double> merged;
    double mass = 0.0;
    for (size_t i = 0; i < support.size(); ++i) {
        int idx = support[i];
        double w = weights[i];
        if (idx < 0 || idx >= domain->grid_size())
            throw std::invalid_argument("measure: support index out of range");
        if (std::isnan(w) || w < 0.0 || w == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("measure: weights must be finite and nonnegative");
        merged[idx] += w;
        mass += w;
    }
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("measure: total mass must be one");
    FiniteMeasure mu;
    mu.domain = std::move(domain);
    double kept = 0.0;
    for (const auto& [idx, w] : merged) {
        if (w < kPrune) continue;
        mu.support.push_back(idx);
        mu.weights.push_back(w);
        kept += w;
    }
    if (mu.support.empty()) throw std::invalid_argument("measure: all weights pruned away");
    for (double& w : mu.weights) w /= kept;
    return mu;
}

Point barycenter(const FiniteMeasure& mu) {
    Point b(mu.domain->dimension(), 0.0);
    for (int i = 0; i < mu.size(); ++i) {
        const Point& x = mu.domain->grid_point(mu.support[i]);
        for (size_t a = 0; a < b.size(); ++a) b[a] += mu.weights[i] * x[a];
    }
    return b;
}

double integrate(const FiniteMeasure& mu, const GridFunction& f) {
    if (f.domain_ptr().get() != mu.domain.get())
        throw std::invalid_argument("integrate: measure and function live on different domains");
    double acc = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
        double v = f.value(mu.support[i]);
        if (v == std::numeric_limits<double>::infinity()) return v;
        acc += mu.weights[i] * v;
    }
    return acc;
}

double integrate(const FiniteMeasure& mu, const std::function<double(const Point&)>& f) {
    double acc = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
        double v = f(mu.domain->grid_point(mu.support[i]));
        if (std::isnan(v)) throw std::runtime_error("integrate: integrand returned NaN");
        if (v == std::numeric_limits<double>::infinity()) return v;
        acc += mu.weights[i] * v;
    }
    return acc;
}

FiniteMeasure caratheodory_reduce(const FiniteMeasure& mu) {
    const int d = mu.domain->dimension();
    if (mu.size() <= d + 1) return mu;

    std::vector<int> support = mu.support;
    std::vector<double> weights = mu.weights;
    int guard = mu.size() + 2;
    while (static_cast<int>(support.size()) > d + 1 && guard-- > 0) {
        std::vector<Point> pts;
        pts.reserve(support.size());
        for (int idx : support) pts.push_back(mu.domain->grid_point(idx));
        std::vector<double> dep = affine_dependence(pts, d);

        int drop = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < dep.size(); ++j) {
            if (dep[j] <= 1e-14) continue;
            double ratio = weights[j] / dep[j];
            if (ratio < theta) {
                theta = ratio;
                drop = static_cast<int>(j);
            }
        }
        if (drop < 0) throw std::runtime_error("measure reduction: degenerate dependence");
        std::vector<int> next_support;
        std::vector<double> next_weights;
        for (size_t j = 0; j < dep.size(); ++j) {
            double w = weights[j] - theta * dep[j];
            if (static_cast<int>(j) == drop || w <= kPrune) continue;
            next_support.push_back(support[j]);
            next_weights.push_back(w);
        }
        support = std::move(next_support);
        weights = std::move(next_weights);
        if (support.empty()) throw std::runtime_error("measure reduction: lost all mass");
    }

    FiniteMeasure out;
    out.domain = mu.domain;
    out.support = std::move(support);
    out.weights = std::move(weights);
    double mass = 0.0;
    for (double w : out.weights) mass += w;
    for (double& w : out.weights) w /= mass;
    return out;
}

TightnessReport tightness_check(const FiniteMeasure& mu, const CompactSubset& K, double delta,
                                double eps) {
    if (delta <= 0.0) throw std::invalid_argument("tightness: delta must be positive");
    if (eps <= 0.0) throw std::invalid_argument("tightness: eps must be positive");
    TightnessReport report;
    for (int i = 0; i < mu.size(); ++i) {
        const Point& x = mu.domain->grid_point(mu.support[i]);
        if (in_vicinity(x, K, delta, *mu.domain))
            report.vicinity_mass += mu.weights[i];
        else
            report.offending.push_back(mu.support[i]);
    }
    report.tight = report.vicinity_mass >= 1.0 - eps - 1e-12;
    return report;
}

FamilyTightnessReport tightness_check(const std::vector<FiniteMeasure>& family,
                                      const CompactSubset& K, double delta, double eps,
                                      const std::vector<int>& exempt) {
    FamilyTightnessReport report;
    report.tight = true;
    for (size_t m = 0; m < family.size(); ++m) {
        auto one = tightness_check(family[m], K, delta, eps);
        report.masses.push_back(one.vicinity_mass);
        bool exempted =
            std::find(exempt.begin(), exempt.end(), static_cast<int>(m)) != exempt.end();
        if (!one.tight && !exempted) {
            report.tight = false;
            report.offending.push_back(static_cast<int>(m));
        }
    }
    return report;
}

TightCompactResult compose_tight_compact(std::shared_ptr<const ConvexDomain> domain,
                                         const std::vector<FiniteMeasure>& family,
                                         const CompactProvider& provider, double eps, int n_max) {
    if (!domain) throw std::invalid_argument("tight compact: null domain");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("tight compact: eps must lie in (0,1)");
    if (n_max < 1 || n_max > 60) throw std::invalid_argument("tight compact: scale count out of range");

    TightCompactResult result;
    std::vector<CompactSubset> compacts;
    std::vector<double> radii;
    double eps_sum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        double eps_n = eps * std::ldexp(1.0, -n);
        double delta_n = eps_n;
        CompactSubset K = provider(eps_n, delta_n, n);
        ScaleReport sr;
        sr.scale = n;
        sr.eps_n = eps_n;
        sr.delta_n = delta_n;
        sr.compact_size = static_cast<int>(K.indices.size());
        for (const auto& mu : family) {
            auto t = tightness_check(mu, K, delta_n, eps_n);
            sr.min_mass = std::min(sr.min_mass, t.vicinity_mass);
            if (!t.tight) {
                std::ostringstream msg;
                msg << "tight compact: provider compact misses mass at scale " << n
                    << " (mass " << t.vicinity_mass << " < " << 1.0 - eps_n << ")";
                throw std::runtime_error(msg.str());
            }
        }
        result.scales.push_back(sr);
        compacts.push_back(std::move(K));
        radii.push_back(eps_n);
        eps_sum += eps_n;
    }

    std::vector<int> members;
    for (int i = 0; i < domain->grid_size(); ++i) {
        const Point& x = domain->grid_point(i);
        bool inside = true;
        for (size_t n = 0; n < compacts.size(); ++n)
            if (!in_vicinity(x, compacts[n], radii[n], *domain)) {
                inside = false;
                break;
            }
        if (inside) members.push_back(i);
    }
    if (members.empty()) throw std::runtime_error("tight compact: intersection of vicinities is empty");
    result.compact = CompactSubset::of(*domain, members);
    result.mass_bound = 1.0 - eps_sum;
    for (const auto& mu : family) {
        double mass = 0.0;
        for (int i = 0; i < mu.size(); ++i)
            if (result.compact.contains_index(mu.support[i])) mass += mu.weights[i];
        if (1.0 - mass >= eps)
            throw std::runtime_error(
                "tight compact: a member's mass outside the composed set reaches eps");
        result.family_mass.push_back(mass);
    }
    return result;
}

}  // namespace cvxenv
