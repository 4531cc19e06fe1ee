#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "chaostk/persistence.hpp"
#include "oracles.hpp"

using namespace chaostk;
using Catch::Approx;

namespace {

ScalarField2D make_field(std::vector<double> values, std::size_t width, std::size_t height) {
    ScalarField2D f;
    f.values = std::move(values);
    f.width = width;
    f.height = height;
    return f;
}

/// Shortest-path distance matrix of an unweighted graph given by edges.
DistanceMatrix graph_metric(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    DistanceMatrix d(n, std::vector<double>(n, 1e9));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (const auto& [a, b] : edges) d[a][b] = d[b][a] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

} // namespace

TEST_CASE("sublevel_0d on the 1x5 worked example") {
    const PersistenceDiagram diagram = sublevel_0d(make_field({2, 1, 3, 0, 4}, 5, 1));
    const auto got = oracle::as_multiset(diagram);
    const auto want = oracle::as_multiset({{0, 1, 3, false}, {0, 0, 4, true}});
    CHECK(got == want);
}

TEST_CASE("sublevel_0d on constant and monotone grids") {
    const PersistenceDiagram flat = sublevel_0d(make_field(std::vector<double>(12, 7.0), 4, 3));
    REQUIRE(flat.size() == 1);
    CHECK(flat[0] == PersistencePoint{0, 7.0, 7.0, true});

    const PersistenceDiagram ramp = sublevel_0d(make_field({0, 1, 2, 3, 4, 5}, 3, 2));
    REQUIRE(ramp.size() == 1);
    CHECK(ramp[0] == PersistencePoint{0, 0.0, 5.0, true});
}

TEST_CASE("sublevel_0d elder rule") {
    // Two minima at 1 and 0 merge at 3; the younger class (born 1) dies.
    const PersistenceDiagram diagram = sublevel_0d(make_field({1, 3, 0}, 3, 1));
    const auto got = oracle::as_multiset(diagram);
    const auto want = oracle::as_multiset({{0, 1, 3, false}, {0, 0, 3, true}});
    CHECK(got == want);
}

TEST_CASE("sublevel_0d rejects empty grids") {
    CHECK_THROWS_AS(sublevel_0d(ScalarField2D{}), std::invalid_argument);
}

TEST_CASE("sublevel_0d matches the brute-force oracle on random grids") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> value(0, 9);
    for (int rep = 0; rep < 20; ++rep) {
        ScalarField2D field;
        field.width = field.height = 6;
        for (int i = 0; i < 36; ++i) field.values.push_back(static_cast<double>(value(rng)));
        CHECK(oracle::as_multiset(sublevel_0d(field)) ==
              oracle::as_multiset(oracle::sublevel_0d_brute_force(field)));
    }
}

TEST_CASE("vr_persistence on a six-cycle") {
    const DistanceMatrix d =
        graph_metric(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    const PersistenceDiagram diagram = vr_persistence(d);
    PersistenceDiagram h1;
    for (const auto& pt : diagram)
        if (pt.dim == 1) h1.push_back(pt);
    REQUIRE(h1.size() == 1);
    CHECK(h1[0] == PersistencePoint{1, 1.0, 2.0, false});
}

TEST_CASE("vr_persistence on the two-loop worked example") {
    // A 4-cycle and a 7-cycle sharing the edge 0-1: the small loop fills at
    // 2, the large one at 3.
    const DistanceMatrix d = graph_metric(
        9, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 0}});
    PersistenceDiagram h1;
    for (const auto& pt : vr_persistence(d))
        if (pt.dim == 1) h1.push_back(pt);
    const auto got = oracle::as_multiset(h1);
    const auto want = oracle::as_multiset({{1, 1.0, 2.0, false}, {1, 1.0, 3.0, false}});
    CHECK(got == want);
}

TEST_CASE("vr_persistence H0 and tiny inputs") {
    const PersistenceDiagram single = vr_persistence({{0.0}});
    REQUIRE(single.size() == 1);
    CHECK(single[0].essential);

    const PersistenceDiagram pair = vr_persistence({{0.0, 5.0}, {5.0, 0.0}});
    const auto got = oracle::as_multiset(pair);
    const auto want = oracle::as_multiset({{0, 0.0, 5.0, false}, {0, 0.0, 6.0, true}});
    CHECK(got == want);
}

TEST_CASE("vr_persistence validates the matrix") {
    CHECK_THROWS_AS(vr_persistence({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(vr_persistence({{0.0, 1.0}, {2.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(vr_persistence({{0.0, -1.0}, {-1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(vr_persistence({{1.0, 1.0}, {1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("vr_persistence matches the brute-force oracle on random graphs") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_int_distribution<std::size_t> size(3, 7);
        const std::size_t n = size(rng);
        std::vector<std::pair<int, int>> edges;
        // Random spanning tree keeps the graph connected; extra edges add loops.
        for (std::size_t v = 1; v < n; ++v)
            edges.emplace_back(static_cast<int>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)),
                               static_cast<int>(v));
        std::bernoulli_distribution extra(0.4);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (extra(rng)) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        const DistanceMatrix d = graph_metric(n, edges);
        CHECK(oracle::as_multiset(vr_persistence(d)) ==
              oracle::as_multiset(oracle::vr_brute_force(d)));
    }
}

TEST_CASE("persistence_score hand values") {
    const PersistenceDiagram unit = {{0, 1.0, 1.0, true}};
    CHECK(persistence_score({unit}).score == Approx(std::numbers::sqrt2));

    const PersistenceDiagram mid = {{0, 0.6, 0.8, false}};
    CHECK(persistence_score({unit, mid}).score == Approx((std::numbers::sqrt2 + 1.0) / 2.0));

    // Two points in one diagram average within the diagram first.
    const PersistenceDiagram two = {{0, 1.0, 1.0, false}, {0, 0.3, 0.4, false}};
    CHECK(persistence_score({two}).score == Approx((std::numbers::sqrt2 + 0.5) / 2.0));
}

TEST_CASE("persistence_score birth floor and exclusions") {
    const PersistenceDiagram low = {{0, 0.005, 0.9, false}};
    const PersistenceDiagram ok = {{0, 1.0, 1.0, false}};
    const PersistenceScoreResult r = persistence_score({low, ok});
    CHECK(r.diagrams_used == 1);
    CHECK(r.diagrams_excluded == 1);
    CHECK(r.score == Approx(std::numbers::sqrt2));

    CHECK_THROWS_AS(persistence_score({low}), std::runtime_error);
    CHECK_THROWS_AS(persistence_score({}), std::invalid_argument);
}

TEST_CASE("persistent_entropy canonical values") {
    PersistenceDiagram equal;
    for (int i = 0; i < 4; ++i) equal.push_back({1, 0.0, 2.0, false});
    CHECK(persistent_entropy(equal, 1) == Approx(2.0)); // log2(4)

    const PersistenceDiagram two = {{1, 0.0, 1.0, false}, {1, 0.0, 3.0, false}};
    const double expect = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
    CHECK(persistent_entropy(two, 1) == Approx(expect).epsilon(1e-12));
    CHECK(expect == Approx(0.8113).margin(5e-5));

    // Essential points and other dimensions are ignored.
    PersistenceDiagram noisy = two;
    noisy.push_back({1, 0.0, 99.0, true});
    noisy.push_back({0, 0.0, 7.0, false});
    CHECK(persistent_entropy(noisy, 1) == Approx(expect).epsilon(1e-12));

    CHECK(persistent_entropy({{1, 0.0, 1.0, false}}, 1) == 0.0);
}

TEST_CASE("normalized_persistent_entropy conventions") {
    const PersistenceDiagram two = {{1, 1.0, 2.0, false}, {1, 1.0, 3.0, false}};
    bool degenerate = true;
    const double e = normalized_persistent_entropy(two, &degenerate);
    CHECK_FALSE(degenerate);
    const double raw = -(1.0 / 3.0 * std::log2(1.0 / 3.0) + 2.0 / 3.0 * std::log2(2.0 / 3.0));
    CHECK(e == Approx(raw / std::log2(3.0)).epsilon(1e-12));

    // Single finite point: degenerate, 0.
    CHECK(normalized_persistent_entropy({{1, 1.0, 4.0, false}}, &degenerate) == 0.0);
    CHECK(degenerate);

    // Total lifetime <= 1: degenerate, 0.
    const PersistenceDiagram small = {{1, 0.0, 0.3, false}, {1, 0.0, 0.4, false}};
    CHECK(normalized_persistent_entropy(small, &degenerate) == 0.0);
    CHECK(degenerate);
}

TEST_CASE("diagram CSV round-trip is bit-exact") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PersistenceDiagram diagram;
    for (int i = 0; i < 25; ++i) {
        const double b = u(rng);
        diagram.push_back({i % 2, b, b + u(rng), i % 5 == 0});
    }
    std::stringstream ss;
    write_diagram_csv(ss, diagram);
    const PersistenceDiagram back = read_diagram_csv(ss);
    CHECK(back == diagram);

    std::stringstream bad("nope\n");
    CHECK_THROWS_AS(read_diagram_csv(bad), std::runtime_error);
}
