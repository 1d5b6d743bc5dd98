#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cvxenv/geometry.hpp"

using namespace cvxenv;

TEST_CASE("metric distances: the three named exponents") {
    Point a{1.0, 1.0}, b{0.0, 0.0};
    CHECK(Metric::l1().distance(a, b) == doctest::Approx(2.0));
    CHECK(Metric::l2().distance(a, b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(Metric::linf().distance(a, b) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Metric::l2().distance(a, Point{1.0}), std::invalid_argument);
}

TEST_CASE("interval grid: resolution 4 on [0,1] gives the five dyadic nodes") {
    auto dom = make_grid(1, {{0.0}, {1.0}}, Metric::l2(), 4);
    REQUIRE(dom->grid_size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(dom->grid_point(i)[0] == doctest::Approx(0.25 * i));
    CHECK(dom->spacing() == doctest::Approx(0.25));
    CHECK(dom->diameter() == doctest::Approx(1.0));
}

TEST_CASE("unit square at resolution 1 is exactly its four corners") {
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::l2(), 1);
    CHECK(dom->grid_size() == 4);
}

TEST_CASE("standard simplex in R^2 at resolution 2 keeps six lattice points") {
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, Metric::l2(), 2);
    CHECK(dom->grid_size() == 6);
    // every vertex must be a grid point
    for (const auto& v : dom->vertices()) CHECK(dom->grid_index_at(v).has_value());
}

TEST_CASE("membership: centroid of the standard simplex in R^3") {
    std::vector<Point> verts{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    ConvexDomain dom(3, verts, Metric::l2(), verts);
    CHECK(dom.contains({1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK_FALSE(dom.contains({0.5, 0.5, 0.5}));
    CHECK_FALSE(dom.contains({-0.01, 0.5, 0.51}));
    CHECK_THROWS_AS(dom.contains({0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("grid invariants reject points outside the hull") {
    std::vector<Point> verts{{0.0}, {1.0}};
    CHECK_THROWS_AS(ConvexDomain(1, verts, Metric::l2(), {{0.0}, {1.0}, {2.0}}),
                    std::invalid_argument);
    // grid missing a vertex is rejected too
    CHECK_THROWS_AS(ConvexDomain(1, verts, Metric::l2(), {{0.0}, {0.5}}), std::invalid_argument);
}

TEST_CASE("point budget guards lattice explosion") {
    CHECK_THROWS_AS(make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}},
                              Metric::l2(), 4000, 100000),
                    std::invalid_argument);
}

TEST_CASE("distance_to_set: two-point set under l1") {
    auto dom = make_grid(2, {{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {2.0, 2.0}}, Metric::l1(), 2);
    auto k00 = dom->grid_index_at({0.0, 0.0});
    auto k20 = dom->grid_index_at({2.0, 0.0});
    REQUIRE(k00.has_value());
    REQUIRE(k20.has_value());
    CompactSubset K = CompactSubset::of(*dom, {*k00, *k20});
    // min(|1|+|1|, |-1|+|1|) = 2
    CHECK(distance_to_set({1.0, 1.0}, K, *dom) == doctest::Approx(2.0));
    CHECK(distance_to_set({0.0, 0.0}, K, *dom) == doctest::Approx(0.0));
    CHECK_THROWS_AS(distance_to_set({1.0, 1.0}, CompactSubset{}, *dom), std::invalid_argument);
}

TEST_CASE("vicinity boundary is closed and delta must be positive") {
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::l2(), 4);
    CompactSubset K = CompactSubset::of(*dom, {*dom->grid_index_at({0.0, 0.0})});
    CHECK(in_vicinity({0.0, 0.25}, K, 0.25, *dom));        // boundary point counts
    CHECK_FALSE(in_vicinity({0.0, 0.2500001}, K, 0.25, *dom));
    CHECK_THROWS_AS(in_vicinity({0.0, 0.0}, K, 0.0, *dom), std::invalid_argument);
    CHECK_THROWS_AS(in_vicinity({0.0, 0.0}, K, -1.0, *dom), std::invalid_argument);
}

TEST_CASE("vicinity is monotone in delta and in the base set") {
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::l2(), 6);
    std::mt19937_64 eng(11u);
    auto pick = [&](int k) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i) idx.push_back(static_cast<int>(eng() % dom->grid_size()));
        return CompactSubset::of(*dom, idx);
    };
    for (int trial = 0; trial < 40; ++trial) {
        CompactSubset K = pick(3);
        CompactSubset K2 = K;
        K2.indices.push_back(static_cast<int>(eng() % dom->grid_size()));
        K2 = CompactSubset::of(*dom, K2.indices);
        double d1 = 0.05 + 0.4 * static_cast<double>(eng() % 100) / 100.0;
        double d2 = d1 + 0.1;
        auto v_small = vicinity_indices(*dom, K, d1);
        auto v_big = vicinity_indices(*dom, K, d2);
        auto v_k2 = vicinity_indices(*dom, K2, d1);
        CHECK(v_small.is_subset_of(v_big));
        CHECK(v_small.is_subset_of(v_k2));
        // distance to a larger set never grows
        Point x{0.3, 0.7};
        CHECK(distance_to_set(x, K2, *dom) <= distance_to_set(x, K, *dom) + 1e-15);
    }
}

TEST_CASE("distance_to_set is 1-Lipschitz in the query point") {
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, Metric::linf(), 5);
    CompactSubset K = CompactSubset::of(*dom, {0, 7, 11});
    std::mt19937_64 eng(23u);
    auto rnd = [&] { return static_cast<double>(eng() % 1000) / 1000.0; };
    for (int t = 0; t < 60; ++t) {
        Point x{rnd(), rnd()}, y{rnd(), rnd()};
        double lhs = std::abs(distance_to_set(x, K, *dom) - distance_to_set(y, K, *dom));
        CHECK(lhs <= dom->metric().distance(x, y) + 1e-12);
    }
}

TEST_CASE("explicit-grid domains work in high dimension") {
    // 20-simplex described by the origin plus the basis vectors; the grid is
    // just the vertex list, no lattice.
    int d = 20;
    std::vector<Point> verts(static_cast<size_t>(d) + 1, Point(d, 0.0));
    for (int i = 0; i < d; ++i) verts[static_cast<size_t>(i) + 1][i] = 1.0;
    ConvexDomain dom(d, verts, Metric::l2(), verts);
    CHECK(dom.grid_size() == d + 1);
    Point center(d, 1.0 / (d + 1));
    CHECK(dom.contains(center));
    CHECK(dom.spacing() == 0.0);
    CompactSubset origin = CompactSubset::of(dom, {0});
    CHECK(distance_to_set(verts[3], origin, dom) == doctest::Approx(1.0));
}

TEST_CASE("degenerate polytope: a single repeated vertex") {
    auto dom = make_grid(2, {{0.5, 0.5}, {0.5, 0.5}}, Metric::l2(), 3);
    CHECK(dom->grid_size() == 1);
    CHECK(dom->contains({0.5, 0.5}));
    CHECK_FALSE(dom->contains({0.5, 0.6}));
}

TEST_CASE("off-lattice vertices are appended to the grid") {
    // triangle with an apex that does not land on the resolution-3 lattice
    auto dom = make_grid(2, {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}, Metric::l2(), 3);
    for (const auto& v : dom->vertices()) {
        auto idx = dom->grid_index_at(v);
        REQUIRE(idx.has_value());
        CHECK(dom->grid_point(*idx) == v);
    }
    for (const auto& g : dom->grid()) CHECK(dom->contains(g));
}
