#include "cvxenv/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cvxenv/lp.hpp"

namespace cvxenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const Point& s, const Point& x) {
    double acc = 0.0;
    for (size_t a = 0; a < s.size(); ++a) acc += s[a] * x[a];
    return acc;
}

struct Node1d {
    double x;
    double v;
    int idx;
};

// Upper hull of (x, -v), left to right, keeping collinear points so that
// tie slopes still see every touching node.
std::vector<int> upper_hull(const std::vector<Node1d>& pts) {
    std::vector<int> st;
    for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
        while (st.size() >= 2) {
            const Node1d& a = pts[st[st.size() - 2]];
            const Node1d& b = pts[st.back()];
            const Node1d& c = pts[k];
            double cross = (b.x - a.x) * (a.v - c.v) - (a.v - b.v) * (c.x - a.x);
            if (cross > 0.0)
                st.pop_back();
            else
                break;
        }
        st.push_back(k);
    }
    return st;
}

// Ascending-slope scan over the upper hull; the leftmost maximizer is
// nondecreasing in the slope, so one forward pointer serves all slopes.
void conjugate_1d(const GridFunction& f, const SlopeGrid& S, std::vector<double>& values,
                  std::vector<int>& argmax) {
    std::vector<Node1d> pts;
    for (int i = 0; i < f.domain().grid_size(); ++i)
        if (f.finite_at(i)) pts.push_back({f.domain().grid_point(i)[0], f.value(i), i});
    std::sort(pts.begin(), pts.end(), [](const Node1d& a, const Node1d& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.v != b.v) return a.v < b.v;
        return a.idx < b.idx;
    });
    std::vector<Node1d> uniq;
    for (const auto& p : pts)
        if (uniq.empty() || uniq.back().x != p.x) uniq.push_back(p);
    std::vector<int> hull = upper_hull(uniq);

    std::vector<int> order(S.slopes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return S.slopes[a][0] < S.slopes[b][0]; });

    size_t p = 0;
    for (int j : order) {
        double s = S.slopes[j][0];
        auto g = [&](size_t pos) {
            const Node1d& nd = uniq[hull[pos]];
            return s * nd.x - nd.v;
        };
        while (p + 1 < hull.size() && g(p + 1) > g(p)) ++p;
        values[j] = g(p);
        argmax[j] = uniq[hull[p]].idx;
    }
}

}  // namespace

ConjugateTable fenchel_conjugate(const GridFunction& f, const SlopeGrid& S) {
    S.validate(f.domain().dimension());
    if (f.finite_count() == 0)
        throw std::invalid_argument("conjugate: function has no finite values");
    ConjugateTable t;
    t.domain = f.domain_ptr();
    t.slopes = S;
    t.values.assign(S.slopes.size(), -kInf);
    t.argmax.assign(S.slopes.size(), -1);
    if (f.domain().dimension() == 1) {
        conjugate_1d(f, S, t.values, t.argmax);
        return t;
    }
    for (size_t j = 0; j < S.slopes.size(); ++j) {
        const Point& s = S.slopes[j];
        double best = -kInf;
        int arg = -1;
        for (int i = 0; i < f.domain().grid_size(); ++i) {
            if (!f.finite_at(i)) continue;
            double g = dot(s, f.domain().grid_point(i)) - f.value(i);
            if (g > best) {
                best = g;
                arg = i;
            }
        }
        t.values[j] = best;
        t.argmax[j] = arg;
    }
    return t;
}

double biconjugate_at(const ConjugateTable& table, const Point& x) {
    double best = -kInf;
    for (int j = 0; j < table.size(); ++j) {
        double g = dot(table.slopes.slopes[j], x) - table.values[j];
        if (g > best) best = g;
    }
    return best;
}

int biconjugate_argmax_at(const ConjugateTable& table, const Point& x) {
    double best = -kInf;
    int arg = -1;
    for (int j = 0; j < table.size(); ++j) {
        double g = dot(table.slopes.slopes[j], x) - table.values[j];
        if (g > best) {
            best = g;
            arg = j;
        }
    }
    return arg;
}

GridFunction biconjugate(const ConjugateTable& table) {
    const ConvexDomain& dom = *table.domain;
    std::vector<double> vals(dom.grid_size());
    for (int i = 0; i < dom.grid_size(); ++i) vals[i] = biconjugate_at(table, dom.grid_point(i));
    return GridFunction(table.domain, std::move(vals), ClassTag::continuous_bounded);
}

MeasureEnvelopeResult envelope_via_measures(const GridFunction& f, const Point& x) {
    const ConvexDomain& dom = f.domain();
    if (static_cast<int>(x.size()) != dom.dimension())
        throw std::invalid_argument("envelope: point dimension mismatch");
    std::vector<int> cols;
    for (int i = 0; i < dom.grid_size(); ++i)
        if (f.finite_at(i)) cols.push_back(i);
    MeasureEnvelopeResult out;
    if (cols.empty()) {
        out.value = kInf;
        return out;
    }
    LpProblem lp;
    lp.rows.assign(1 + dom.dimension(), std::vector<double>(cols.size()));
    lp.rhs.assign(1 + dom.dimension(), 0.0);
    lp.rhs[0] = 1.0;
    for (size_t j = 0; j < cols.size(); ++j) {
        const Point& p = dom.grid_point(cols[j]);
        lp.costs.push_back(f.value(cols[j]));
        lp.rows[0][j] = 1.0;
        for (int a = 0; a < dom.dimension(); ++a) lp.rows[1 + a][j] = p[a];
    }
    for (int a = 0; a < dom.dimension(); ++a) lp.rhs[1 + a] = x[a];

    LpResult res = lp_solve(lp);
    if (res.status == LpStatus::infeasible) {
        out.value = kInf;
        return out;
    }
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("envelope: unexpected solver status");
    out.value = res.objective;
    std::vector<int> support;
    std::vector<double> weights;
    for (size_t j = 0; j < cols.size(); ++j)
        if (res.weights[j] > 0.0) {
            support.push_back(cols[j]);
            weights.push_back(res.weights[j]);
        }
    out.witness = caratheodory_reduce(make_measure(f.domain_ptr(), support, weights));
    return out;
}

GridFunction convex_hull_fn(const GridFunction& f) {
    const ConvexDomain& dom = f.domain();
    std::vector<double> vals(dom.grid_size());
    bool any_inf = false;
    for (int i = 0; i < dom.grid_size(); ++i) {
        vals[i] = envelope_via_measures(f, dom.grid_point(i)).value;
        if (vals[i] == kInf) any_inf = true;
    }
    ClassTag tag = any_inf ? ClassTag::lsc_lower_bounded : ClassTag::continuous_bounded;
    return GridFunction(f.domain_ptr(), std::move(vals), tag);
}

AffineMinorantResult affine_minorant(const GridFunction& f, const Point& anchor, double delta,
                                     const SlopeGrid* S) {
    if (delta <= 0.0) throw std::invalid_argument("affine minorant: delta must be positive");
    auto reference = fenchel_conjugate(f, default_slope_grid(f));
    double envelope_value = biconjugate_at(reference, anchor);

    const ConjugateTable table = S ? fenchel_conjugate(f, *S) : reference;
    int j = biconjugate_argmax_at(table, anchor);
    AffineMinorantResult out;
    out.minorant.slope = table.slopes.slopes[j];
    out.minorant.intercept = -table.values[j];
    out.value_at_anchor = dot(out.minorant.slope, anchor) - table.values[j];
    out.envelope_value = envelope_value;
    out.gap = std::max(0.0, envelope_value - out.value_at_anchor);
    if (envelope_value - out.value_at_anchor > 0.5 * delta + 1e-9)
        throw std::runtime_error(
            "affine minorant: slope grid cannot close half the requested gap; "
            "use a denser slope grid");
    double viol = 0.0;
    for (int i = 0; i < f.domain().grid_size(); ++i) {
        if (!f.finite_at(i)) continue;
        viol = std::max(viol, out.minorant.eval(f.domain().grid_point(i)) - f.value(i));
    }
    out.max_violation = viol;
    return out;
}

}  // namespace cvxenv
