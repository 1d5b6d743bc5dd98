#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cvxenv/fixtures.hpp"

using namespace cvxenv;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("rng: deterministic streams, ranges, seed sensitivity") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng c(42);
    for (int i = 0; i < 200; ++i) {
        int k = c.uniform_int(-3, 7);
        CHECK(k >= -3);
        CHECK(k <= 7);
        double v = c.uniform(2.0, 5.0);
        CHECK(v >= 2.0);
        CHECK(v < 5.0);
    }
    Rng d(1), e(2);
    bool differ = false;
    for (int i = 0; i < 10; ++i) differ = differ || (d.uniform() != e.uniform());
    CHECK(differ);
}

TEST_CASE("w shape: kink and midpoint values, resolution validation") {
    auto f = w_shape_1d(8);
    CHECK(f.domain().grid_size() == 9);
    CHECK(f.value(0) == 0.25);
    CHECK(f.value(2) == 0.0);   // x = 1/4
    CHECK(f.value(4) == 0.25);  // x = 1/2
    CHECK(f.value(6) == 0.0);   // x = 3/4
    CHECK(f.value(8) == 0.25);
    CHECK(f.tag() == ClassTag::continuous_bounded);

    auto big = w_shape_1d();
    CHECK(big.domain().grid_size() == 65);
    CHECK(big.value(16) == 0.0);
    CHECK(big.value(32) == 0.25);

    CHECK_THROWS_AS(w_shape_1d(6), std::invalid_argument);
    CHECK_THROWS_AS(w_shape_1d(0), std::invalid_argument);
}

TEST_CASE("concave bump: zero chord endpoints, unit peak, concave data") {
    auto f = concave_bump_1d(8);
    CHECK(f.value(0) == 0.0);
    CHECK(f.value(8) == 0.0);
    CHECK(f.value(4) == 1.0);
    CHECK(f.value(2) == 0.75);  // 4*(1/4)*(3/4)
    for (int i = 1; i < 8; ++i)
        CHECK(f.value(i) >= 0.5 * (f.value(i - 1) + f.value(i + 1)));
    CHECK_THROWS_AS(concave_bump_1d(3), std::invalid_argument);
}

TEST_CASE("square fixture: exact dyadic squares, convex data") {
    auto f = square_1d(64);
    for (int k = 0; k <= 64; ++k) {
        double x = static_cast<double>(k) / 64.0;
        CHECK(f.value(k) == x * x);
    }
    for (int i = 1; i < 64; ++i)
        CHECK(2.0 * f.value(i) <= f.value(i - 1) + f.value(i + 1));
}

TEST_CASE("random pwl: deterministic per seed, finite everywhere, 1D and 2D") {
    auto dom = make_grid(1, {{0.0}, {1.0}}, Metric::l2(), 64);
    Rng r1(7), r2(7), r3(8);
    auto f1 = random_pwl(dom, r1);
    auto f2 = random_pwl(dom, r2);
    auto f3 = random_pwl(dom, r3);
    bool same = true, differ = false;
    for (int i = 0; i < dom->grid_size(); ++i) {
        same = same && (f1.value(i) == f2.value(i));
        differ = differ || (f1.value(i) != f3.value(i));
        CHECK(std::isfinite(f1.value(i)));
    }
    CHECK(same);
    CHECK(differ);
    CHECK(f1.finite_count() == dom->grid_size());

    auto sq = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::l2(), 8);
    Rng r4(3);
    auto g = random_pwl(sq, r4);
    CHECK(g.finite_count() == sq->grid_size());
    CHECK(g.tag() == ClassTag::continuous_bounded);
}

TEST_CASE("random lsc: +inf nodes present, two finite nodes survive, reproducible") {
    auto dom = make_grid(1, {{0.0}, {1.0}}, Metric::l2(), 64);
    Rng r1(11), r2(11);
    auto f = random_lsc(dom, r1, 0.3);
    auto g = random_lsc(dom, r2, 0.3);
    CHECK(f.tag() == ClassTag::lsc_lower_bounded);
    int infs = 0;
    for (int i = 0; i < dom->grid_size(); ++i) {
        CHECK(f.value(i) == g.value(i));
        if (f.value(i) == inf) ++infs;
    }
    CHECK(infs > 0);
    CHECK(f.finite_count() >= 2);
    CHECK(f.finite_count() + infs == dom->grid_size());

    Rng r5(11);
    auto h = random_lsc(dom, r5, 0.0);
    CHECK(h.finite_count() == dom->grid_size());
}

TEST_CASE("random convex pwl: exactly convex data on an exact dyadic lattice") {
    auto dom = make_grid(1, {{0.0}, {1.0}}, Metric::l2(), 64);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng r(seed);
        auto f = random_convex_pwl_1d(dom, r);
        for (int i = 1; i < 64; ++i)
            CHECK(2.0 * f.value(i) <= f.value(i - 1) + f.value(i + 1));  // exact, no tolerance
        for (int i = 0; i <= 64; ++i) {
            double scaled = std::ldexp(f.value(i), 8);  // values live on a 2^-8 lattice
            CHECK(scaled == std::floor(scaled));
        }
    }
}

TEST_CASE("shift ladders in both directions; +inf nodes ride along") {
    auto f = w_shape_1d(8);
    auto inc = shift_ladder(f, 12, Direction::increasing);
    CHECK(inc.terms.size() == 12);
    CHECK(inc.tail_gap == std::ldexp(1.0, -12));
    CHECK(inc.terms[0].value(0) == 0.25 - 0.5);

    auto dec = shift_ladder(f, 12, Direction::decreasing);
    CHECK(dec.direction == Direction::decreasing);
    CHECK(dec.tail_gap == std::ldexp(1.0, -12));
    CHECK(dec.terms[0].value(0) == 0.75);

    std::vector<double> vals = f.values();
    vals[4] = inf;
    GridFunction g(f.domain_ptr(), vals, ClassTag::lsc_lower_bounded);
    auto lsc = shift_ladder(g, 6, Direction::increasing);
    CHECK(lsc.tail_gap == std::ldexp(1.0, -6));
    for (const auto& t : lsc.terms) CHECK(t.value(4) == inf);
    CHECK(lsc.terms[0].tag() == ClassTag::lsc_lower_bounded);

    CHECK_THROWS_AS(shift_ladder(f, 0, Direction::increasing), std::invalid_argument);
}

TEST_CASE("regularization ladder ends exactly at its limit") {
    auto f = square_1d(64);
    auto seq = regularization_ladder(f, 8);
    CHECK(seq.terms.size() == 8);
    CHECK(seq.direction == Direction::increasing);
    CHECK(seq.tail_gap == 0.0);
    for (int i = 0; i <= 64; ++i) CHECK(seq.terms.back().value(i) == f.value(i));
    bool differs = false;
    for (int i = 0; i <= 64; ++i)
        differs = differs || (seq.terms.front().value(i) != f.value(i));
    CHECK(differs);

    // constant limit: zero slope budget still works, every term is the constant
    GridFunction c(f.domain_ptr(), std::vector<double>(f.domain().grid_size(), 0.5),
                   ClassTag::continuous_bounded);
    auto flat = regularization_ladder(c, 3);
    CHECK(flat.tail_gap == 0.0);
    for (const auto& t : flat.terms)
        for (int i = 0; i < c.domain().grid_size(); ++i) CHECK(t.value(i) == 0.5);
}

TEST_CASE("prefix compacts and the cutoff ladder") {
    auto dom = make_grid(1, {{0.0}, {1.0}}, Metric::l2(), 64);
    auto pre = prefix_compacts(*dom, 8);
    REQUIRE(pre.size() == 8);
    CHECK(pre.front().indices.size() >= 1);
    CHECK(pre.back().indices.size() == 65);
    for (size_t i = 0; i + 1 < pre.size(); ++i) CHECK(pre[i].is_subset_of(pre[i + 1]));

    auto seq = cutoff_ladder(dom, 8, 0.25);
    CHECK(seq.terms.size() == 8);
    CHECK(seq.tail_gap == 0.0);
    for (int i = 0; i <= 64; ++i) CHECK(seq.terms.back().value(i) == 1.0);
    CHECK_THROWS_AS(prefix_compacts(*dom, 0), std::invalid_argument);
}

TEST_CASE("scattered diracs scenario: exact escapes at every traced scale") {
    auto fx = scattered_diracs_trace();
    validate_scenario(fx.scenario);
    CHECK(fx.n_terms == 8);
    CHECK(fx.scenario.measures.size() == 12);
    CHECK(fx.scenario.compacts.size() == 12);
    CHECK(fx.scenario.domain->dimension() == 2);
    CHECK(std::isinf(fx.scenario.domain->metric().p));

    auto rep = proof_trace_check(fx.scenario, fx.n_terms);
    REQUIRE(rep.rows.size() == 8);
    CHECK(rep.chain_ok);
    CHECK(rep.cutoff_cases_ok);
    CHECK(rep.min_margin == 1.8);
    for (int n = 1; n <= 8; ++n) {
        const auto& r = rep.rows[n - 1];
        CHECK(r.n == n);
        CHECK(r.k == n + 2);  // first Dirac beyond the unit vicinity of {x <= n}
        CHECK(r.qualifying_count == 11 - n);
        CHECK(r.vicinity_mass == 0.0);
        CHECK(r.bound == 0.8);
        CHECK(r.integral == -1.0);  // cutoff at sup-distance 1.5 with delta 1
        CHECK(r.margin == 1.8);
        CHECK(r.barycenter_distance == static_cast<double>(n + 1));
        CHECK(r.closure_value <= r.hull_value + 1e-9);
        CHECK(r.hull_value <= r.integral + 1e-9);
    }
}

TEST_CASE("mass split scenario: 60/40 split leaves margin 1") {
    auto fx = mass_split_trace();
    validate_scenario(fx.scenario);
    CHECK(fx.n_terms == 4);
    CHECK(fx.scenario.measures.size() == 6);
    CHECK(fx.scenario.compacts.size() == 8);

    auto rep = proof_trace_check(fx.scenario, fx.n_terms);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.chain_ok);
    CHECK(rep.cutoff_cases_ok);
    for (int n = 1; n <= 4; ++n) {
        const auto& r = rep.rows[n - 1];
        CHECK(r.k == n);
        CHECK(r.qualifying_count == 7 - n);
        CHECK(r.vicinity_mass == 0.6);
        CHECK(r.integral == 0.6 * 1.0 + 0.4 * (-2.0));
        CHECK(r.margin == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(rep.min_margin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("geometric tail family: capture compacts and composed tightness") {
    auto fx = geometric_tail_family();
    CHECK(fx.family.size() == 8);
    CHECK(fx.domain->grid_size() == 65);
    for (int m = 1; m <= 8; ++m) {
        const auto& mu = fx.family[m - 1];
        REQUIRE(mu.size() == 2);
        CHECK(mu.support[0] == 0);
        CHECK(mu.support[1] == 8 * m);
        CHECK(mu.weights[0] == 1.0 - std::ldexp(1.0, -m));
        CHECK(mu.weights[1] == std::ldexp(1.0, -m));
    }

    for (double eps : {0.1, 0.01, 0.001}) {
        auto K = capturing_compact(*fx.domain, fx.family, eps);
        for (double delta : {0.001, 0.1, 1.0}) {
            auto rep = tightness_check(fx.family, K, delta, eps);
            CHECK(rep.tight);
            CHECK(rep.offending.empty());
        }
    }
    // every tail is <= 1/2, so eps above that is captured by the core alone
    auto K1 = capturing_compact(*fx.domain, fx.family, 0.6);
    CHECK(K1.indices == std::vector<int>{0});

    auto result = compose_tight_compact(
        fx.domain, fx.family,
        [&](double eps_n, double, int) { return capturing_compact(*fx.domain, fx.family, eps_n); },
        0.1);
    CHECK(result.scales.size() == 30);
    CHECK(result.mass_bound > 0.9 - 1e-12);
    REQUIRE(result.family_mass.size() == 8);
    for (double m : result.family_mass) CHECK(m >= 0.9);
}

TEST_CASE("basis family: everyone escapes, exemption restores the verdict") {
    auto fx = escaping_basis_family();
    CHECK(fx.domain->dimension() == 20);
    CHECK(fx.domain->grid_size() == 21);
    CHECK(!fx.domain->lattice().has_value());
    CHECK(fx.family.size() == 20);

    const auto& g = fx.domain->grid();
    CHECK(fx.domain->metric().distance(g[0], g[1]) == 1.0);
    CHECK(fx.domain->metric().distance(g[1], g[2]) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    auto rep = tightness_check(fx.family, fx.core, fx.delta, fx.eps);
    CHECK(!rep.tight);
    CHECK(rep.offending.size() == 20);
    for (double m : rep.masses) CHECK(m == 0.0);

    std::vector<int> all(20);
    for (int i = 0; i < 20; ++i) all[i] = i;
    CHECK(tightness_check(fx.family, fx.core, fx.delta, fx.eps, all).tight);

    for (int j = 5; j <= 15; j += 5) {
        std::vector<int> idx(j + 1);
        for (int i = 0; i <= j; ++i) idx[i] = i;
        auto K = CompactSubset::of(*fx.domain, idx);
        CHECK(!tightness_check(fx.family, K, fx.delta, fx.eps).tight);
    }
}

TEST_CASE("fixture registry: every name builds, unknown rejected, seeded repeats agree") {
    for (const auto& name : fixture_names()) {
        auto fx = make_fixture(name, 3, 0);
        CHECK(fx.name == name);
        CHECK(fx.domain != nullptr);
        CHECK((fx.function.has_value() || fx.sequence.has_value() || fx.scenario.has_value() ||
               !fx.family.empty()));
    }
    CHECK_THROWS_AS(make_fixture("nope", 1, 0), std::invalid_argument);

    auto a = make_fixture("random_pwl_1d", 9, 0);
    auto b = make_fixture("random_pwl_1d", 9, 0);
    REQUIRE(a.function.has_value());
    bool same = true;
    for (int i = 0; i < a.domain->grid_size(); ++i)
        same = same && (a.function->value(i) == b.function->value(i));
    CHECK(same);

    auto c = make_fixture("w_shape", 1, 8);
    CHECK(c.domain->grid_size() == 9);

    CHECK_THROWS_AS(make_fixture("trace_scattered", 1, 10), std::invalid_argument);
    auto t = make_fixture("trace_scattered", 1, 0);
    CHECK(t.scenario.has_value());
    CHECK(t.scenario_terms == 8);

    auto fam = make_fixture("family_basis", 1, 0);
    CHECK(fam.family.size() == 20);
    CHECK(fam.family_core.has_value());
    CHECK(fam.family_eps > 0.0);
    CHECK(fam.family_delta > 0.0);

    auto s = make_fixture("constant_seq", 1, 0);
    REQUIRE(s.sequence.has_value());
    CHECK(s.sequence->terms.size() == 5);
    CHECK(s.sequence->tail_gap == 0.0);

    auto lad = make_fixture("lsc_ladder", 1, 0);
    REQUIRE(lad.sequence.has_value());
    bool has_inf = false;
    for (int i = 0; i < lad.domain->grid_size(); ++i)
        has_inf = has_inf || (lad.sequence->limit.value(i) == inf);
    CHECK(has_inf);
}
