#include "cvxenv/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const ConvexDomain> interval_grid(int resolution) {
    return make_grid(1, {{0.0}, {1.0}}, Metric::l2(), resolution);
}

double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) {
    double v = lo + (hi - lo) * uniform();
    return v < hi ? v : std::nextafter(hi, lo);
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("rng: empty integer range");
    int span = hi - lo + 1;
    int k = static_cast<int>(uniform() * span);
    return lo + std::min(k, span - 1);
}

GridFunction w_shape_1d(int resolution) {
    if (resolution <= 0 || resolution % 4 != 0)
        throw std::invalid_argument("w shape: resolution must be a positive multiple of 4");
    auto dom = interval_grid(resolution);
    std::vector<double> vals(dom->grid_size());
    for (int i = 0; i < dom->grid_size(); ++i) {
        double x = dom->grid_point(i)[0];
        vals[i] = std::min(std::abs(x - 0.25), std::abs(x - 0.75));
    }
    return GridFunction(std::move(dom), std::move(vals), ClassTag::continuous_bounded);
}

GridFunction concave_bump_1d(int resolution) {
    if (resolution <= 0 || resolution % 2 != 0)
        throw std::invalid_argument("concave bump: resolution must be positive and even");
    auto dom = interval_grid(resolution);
    std::vector<double> vals(dom->grid_size());
    for (int i = 0; i < dom->grid_size(); ++i) {
        double x = dom->grid_point(i)[0];
        vals[i] = 4.0 * x * (1.0 - x);
    }
    return GridFunction(std::move(dom), std::move(vals), ClassTag::continuous_bounded);
}

GridFunction square_1d(int resolution) {
    if (resolution <= 0) throw std::invalid_argument("square: resolution must be positive");
    auto dom = interval_grid(resolution);
    std::vector<double> vals(dom->grid_size());
    for (int i = 0; i < dom->grid_size(); ++i) {
        double x = dom->grid_point(i)[0];
        vals[i] = x * x;
    }
    return GridFunction(std::move(dom), std::move(vals), ClassTag::continuous_bounded);
}

GridFunction random_pwl(std::shared_ptr<const ConvexDomain> domain, Rng& rng) {
    if (!domain) throw std::invalid_argument("random pwl: null domain");
    int dim = domain->dimension();
    Point lin(dim);
    for (double& c : lin) c = rng.uniform(-2.0, 2.0);
    int kinks = rng.uniform_int(2, 5);
    std::vector<Point> normals(kinks, Point(dim));
    std::vector<double> offsets(kinks), scales(kinks);
    for (int j = 0; j < kinks; ++j) {
        for (double& c : normals[j]) c = rng.uniform(-1.0, 1.0);
        const Point& anchor = domain->grid_point(rng.uniform_int(0, domain->grid_size() - 1));
        offsets[j] = dot(normals[j], anchor);
        scales[j] = rng.uniform(-2.0, 2.0);
    }
    std::vector<double> vals(domain->grid_size());
    for (int i = 0; i < domain->grid_size(); ++i) {
        const Point& x = domain->grid_point(i);
        double v = dot(lin, x);
        for (int j = 0; j < kinks; ++j) v += scales[j] * std::abs(dot(normals[j], x) - offsets[j]);
        vals[i] = v;
    }
    return GridFunction(std::move(domain), std::move(vals), ClassTag::continuous_bounded);
}

GridFunction random_lsc(std::shared_ptr<const ConvexDomain> domain, Rng& rng,
                        double inf_fraction) {
    if (!domain) throw std::invalid_argument("random lsc: null domain");
    if (inf_fraction < 0.0 || inf_fraction > 1.0)
        throw std::invalid_argument("random lsc: fraction must lie in [0,1]");
    GridFunction base = random_pwl(domain, rng);
    std::vector<double> vals = base.values();
    for (double& v : vals)
        if (rng.uniform() < inf_fraction) v = kInf;
    // keep the extreme nodes finite so the hull of finite nodes spans the grid
    vals.front() = base.value(0);
    vals.back() = base.value(static_cast<int>(vals.size()) - 1);
    return GridFunction(std::move(domain), std::move(vals), ClassTag::lsc_lower_bounded);
}

GridFunction random_convex_pwl_1d(std::shared_ptr<const ConvexDomain> domain, Rng& rng) {
    if (!domain || domain->dimension() != 1)
        throw std::invalid_argument("random convex pwl: needs a 1D domain");
    int pieces = rng.uniform_int(3, 6);
    std::vector<double> slope(pieces), intercept(pieces);
    for (int j = 0; j < pieces; ++j) {
        slope[j] = static_cast<double>(rng.uniform_int(-32, 32)) / 4.0;
        intercept[j] = static_cast<double>(rng.uniform_int(-64, 64)) / 16.0;
    }
    std::vector<double> vals(domain->grid_size());
    for (int i = 0; i < domain->grid_size(); ++i) {
        double x = domain->grid_point(i)[0];
        double v = -kInf;
        for (int j = 0; j < pieces; ++j) v = std::max(v, slope[j] * x + intercept[j]);
        vals[i] = v;
    }
    return GridFunction(std::move(domain), std::move(vals), ClassTag::continuous_bounded);
}

FunctionSequence shift_ladder(const GridFunction& limit, int terms, Direction direction) {
    if (terms < 1) throw std::invalid_argument("shift ladder: needs at least one term");
    double sign = direction == Direction::increasing ? -1.0 : 1.0;
    std::vector<GridFunction> seq;
    seq.reserve(terms);
    for (int n = 1; n <= terms; ++n) {
        double c = sign * std::ldexp(1.0, -n);
        std::vector<double> vals = limit.values();
        for (double& v : vals)
            if (v != kInf) v += c;
        seq.emplace_back(limit.domain_ptr(), std::move(vals), limit.tag());
    }
    return make_sequence(std::move(seq), limit, direction);
}

FunctionSequence regularization_ladder(const GridFunction& limit, int terms) {
    if (terms < 1) throw std::invalid_argument("regularization ladder: needs at least one term");
    const ConvexDomain& dom = limit.domain();
    if (limit.finite_count() != dom.grid_size())
        throw std::invalid_argument("regularization ladder: limit must be finite everywhere");
    double L = 0.0;
    for (int i = 0; i < dom.grid_size(); ++i)
        for (int j = i + 1; j < dom.grid_size(); ++j) {
            double d = dom.metric().distance(dom.grid_point(i), dom.grid_point(j));
            if (d > 0.0) L = std::max(L, std::abs(limit.value(i) - limit.value(j)) / d);
        }
    if (L <= 0.0) L = 1.0;  // constant data: any slope reproduces it
    std::vector<GridFunction> seq;
    seq.reserve(terms);
    for (int n = 1; n <= terms; ++n) seq.push_back(pasch_hausdorff(limit, L * std::ldexp(1.0, n - terms)));
    return make_sequence(std::move(seq), limit, Direction::increasing);
}

std::vector<CompactSubset> prefix_compacts(const ConvexDomain& domain, int count) {
    if (count < 1) throw std::invalid_argument("prefix compacts: count must be positive");
    std::vector<CompactSubset> out;
    out.reserve(count);
    long g = domain.grid_size();
    for (int n = 1; n <= count; ++n) {
        long size = n == count ? g : std::max(1L, g * n / count);
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        out.push_back(CompactSubset::of(domain, std::move(idx)));
    }
    return out;
}

FunctionSequence cutoff_ladder(std::shared_ptr<const ConvexDomain> domain, int compacts,
                               double delta) {
    if (!domain) throw std::invalid_argument("cutoff ladder: null domain");
    auto prefixes = prefix_compacts(*domain, compacts);
    return vicinity_cutoff_sequence(std::move(domain), prefixes, delta);
}

TraceFixture scattered_diracs_trace() {
    auto dom = make_grid(2, {{0.0, 0.0}, {12.0, 0.0}, {0.0, 0.2}, {12.0, 0.2}}, Metric::linf(), 24);
    TraceFixture fx;
    fx.scenario.domain = dom;
    for (int k = 1; k <= 12; ++k) {
        int idx = dom->nearest_grid_index({static_cast<double>(k) - 0.5, 0.1});
        fx.scenario.measures.push_back(make_measure(dom, {idx}, {1.0}));
    }
    fx.scenario.eps = 0.2;
    fx.scenario.delta = 1.0;
    for (int n = 1; n <= 12; ++n) {
        std::vector<int> idx;
        for (int i = 0; i < dom->grid_size(); ++i)
            if (dom->grid_point(i)[0] <= static_cast<double>(n)) idx.push_back(i);
        fx.scenario.compacts.push_back(CompactSubset::of(*dom, std::move(idx)));
    }
    fx.scenario.x0 = {0.5, 0.1};
    fx.n_terms = 8;
    return fx;
}

TraceFixture mass_split_trace() {
    auto dom = interval_grid(16);
    TraceFixture fx;
    fx.scenario.domain = dom;
    for (int k = 1; k <= 6; ++k)
        fx.scenario.measures.push_back(make_measure(dom, {0, 2 * k + 4}, {0.6, 0.4}));
    fx.scenario.eps = 0.2;
    fx.scenario.delta = 0.125;
    for (int n = 1; n <= 8; ++n) {
        std::vector<int> idx(2 * n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        fx.scenario.compacts.push_back(CompactSubset::of(*dom, std::move(idx)));
    }
    fx.scenario.x0 = {0.0};
    fx.n_terms = 4;
    return fx;
}

FamilyFixture geometric_tail_family(int members, int resolution) {
    if (members < 1) throw std::invalid_argument("geometric family: needs members");
    if (resolution < 8 * members)
        throw std::invalid_argument("geometric family: resolution too small for the tails");
    FamilyFixture fx;
    fx.domain = interval_grid(resolution);
    for (int m = 1; m <= members; ++m) {
        double tail = std::ldexp(1.0, -m);
        fx.family.push_back(make_measure(fx.domain, {0, 8 * m}, {1.0 - tail, tail}));
    }
    fx.core = CompactSubset::of(*fx.domain, {0});
    fx.eps = 0.1;
    fx.delta = 0.5;  // wide enough that the core alone captures every member
    return fx;
}

CompactSubset capturing_compact(const ConvexDomain& domain,
                                const std::vector<FiniteMeasure>& family, double eps) {
    if (eps <= 0.0 || eps >= 1.0)
        throw std::invalid_argument("capturing compact: eps must lie in (0,1)");
    std::vector<int> keep;
    for (const auto& mu : family) {
        std::vector<int> order(mu.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (mu.weights[a] != mu.weights[b]) return mu.weights[a] > mu.weights[b];
            return mu.support[a] < mu.support[b];
        });
        double mass = 0.0;
        for (int o : order) {
            if (mass >= 1.0 - eps) break;
            keep.push_back(mu.support[o]);
            mass += mu.weights[o];
        }
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    return CompactSubset::of(domain, std::move(keep));
}

FamilyFixture escaping_basis_family(int dimension) {
    if (dimension < 1) throw std::invalid_argument("basis family: dimension must be positive");
    std::vector<Point> pts(dimension + 1, Point(dimension, 0.0));
    for (int k = 1; k <= dimension; ++k) pts[k][k - 1] = 1.0;
    FamilyFixture fx;
    fx.domain = std::make_shared<const ConvexDomain>(dimension, pts, Metric::l2(), pts);
    for (int k = 1; k <= dimension; ++k)
        fx.family.push_back(make_measure(fx.domain, {k}, {1.0}));
    fx.core = CompactSubset::of(*fx.domain, {0});
    fx.eps = 0.1;
    fx.delta = 0.5;
    return fx;
}

namespace {

GridFunction lsc_windowed_w(int resolution) {
    GridFunction base = w_shape_1d(resolution);
    std::vector<double> vals = base.values();
    for (int i = 0; i < base.domain().grid_size(); ++i)
        if (std::abs(base.domain().grid_point(i)[0] - 0.5) < 0.1) vals[i] = kInf;
    return GridFunction(base.domain_ptr(), std::move(vals), ClassTag::lsc_lower_bounded);
}

void reject_resolution(const std::string& name, int resolution) {
    if (resolution != 0)
        throw std::invalid_argument("fixture " + name + " has fixed geometry");
}

}  // namespace

Fixture make_fixture(const std::string& name, std::uint64_t seed, int resolution) {
    if (resolution < 0) throw std::invalid_argument("fixture: resolution must be nonnegative");
    auto res_or = [&](int def) { return resolution == 0 ? def : resolution; };
    Rng rng(seed);
    Fixture fx;
    fx.name = name;

    if (name == "w_shape") {
        fx.function = w_shape_1d(res_or(64));
    } else if (name == "concave_bump") {
        fx.function = concave_bump_1d(res_or(64));
    } else if (name == "square") {
        fx.function = square_1d(res_or(64));
    } else if (name == "random_pwl_1d") {
        fx.function = random_pwl(interval_grid(res_or(64)), rng);
    } else if (name == "random_pwl_2d") {
        auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::l2(),
                             res_or(24));
        fx.function = random_pwl(std::move(dom), rng);
    } else if (name == "random_lsc") {
        fx.function = random_lsc(interval_grid(res_or(64)), rng, 0.3);
    } else if (name == "random_convex") {
        fx.function = random_convex_pwl_1d(interval_grid(res_or(64)), rng);
    } else if (name == "constant_seq") {
        GridFunction f = w_shape_1d(res_or(64));
        fx.sequence = make_sequence(std::vector<GridFunction>(5, f), f, Direction::increasing);
    } else if (name == "shift_ladder") {
        fx.sequence = shift_ladder(w_shape_1d(res_or(64)), 12, Direction::increasing);
    } else if (name == "lsc_ladder") {
        fx.sequence = shift_ladder(lsc_windowed_w(res_or(64)), 12, Direction::increasing);
    } else if (name == "decreasing_ladder") {
        fx.sequence = shift_ladder(w_shape_1d(res_or(64)), 12, Direction::decreasing);
    } else if (name == "cutoff_ladder") {
        fx.sequence = cutoff_ladder(interval_grid(res_or(64)), 8, 0.25);
    } else if (name == "regularization_ladder") {
        fx.sequence = regularization_ladder(square_1d(res_or(64)), 8);
    } else if (name == "trace_scattered") {
        reject_resolution(name, resolution);
        TraceFixture t = scattered_diracs_trace();
        fx.scenario = std::move(t.scenario);
        fx.scenario_terms = t.n_terms;
    } else if (name == "trace_mass_split") {
        reject_resolution(name, resolution);
        TraceFixture t = mass_split_trace();
        fx.scenario = std::move(t.scenario);
        fx.scenario_terms = t.n_terms;
    } else if (name == "family_geometric") {
        reject_resolution(name, resolution);
        FamilyFixture f = geometric_tail_family();
        fx.domain = f.domain;
        fx.family = std::move(f.family);
        fx.family_core = std::move(f.core);
        fx.family_eps = f.eps;
        fx.family_delta = f.delta;
    } else if (name == "family_basis") {
        reject_resolution(name, resolution);
        FamilyFixture f = escaping_basis_family();
        fx.domain = f.domain;
        fx.family = std::move(f.family);
        fx.family_core = std::move(f.core);
        fx.family_eps = f.eps;
        fx.family_delta = f.delta;
    } else {
        throw std::invalid_argument("unknown fixture: " + name);
    }

    if (!fx.domain) {
        if (fx.function)
            fx.domain = fx.function->domain_ptr();
        else if (fx.sequence)
            fx.domain = fx.sequence->limit.domain_ptr();
        else if (fx.scenario)
            fx.domain = fx.scenario->domain;
    }
    return fx;
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "w_shape",        "concave_bump",   "square",
        "random_pwl_1d",  "random_pwl_2d",  "random_lsc",
        "random_convex",  "constant_seq",   "shift_ladder",
        "lsc_ladder",     "decreasing_ladder", "cutoff_ladder",
        "regularization_ladder", "trace_scattered", "trace_mass_split",
        "family_geometric", "family_basis",
    };
    return names;
}

}  // namespace cvxenv
