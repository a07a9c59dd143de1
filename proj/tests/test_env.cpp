#include <sstream>

#include "doctest.h"
#include "rstre/environment.hpp"
#include "rstre/errors.hpp"
#include "rstre/log_weight_graph.hpp"

using namespace rstre;

TEST_CASE("edge ids: examples and symmetry") {
    CHECK(canonical_edge_id(0, 1, 4) == 0);
    CHECK(canonical_edge_id(2, 3, 4) == 5);
    CHECK(canonical_edge_id(3, 1, 5) == canonical_edge_id(1, 3, 5));
    CHECK_THROWS_AS(canonical_edge_id(2, 2, 4), invalid_parameter);
    CHECK_THROWS_AS(canonical_edge_id(0, 4, 4), invalid_parameter);
}

TEST_CASE("edge ids: exhaustive round-trip up to n = 64") {
    for (std::uint32_t n = 2; n <= 64; ++n) {
        EdgeId expect = 0;
        for (Vertex u = 0; u + 1 < n; ++u)
            for (Vertex v = u + 1; v < n; ++v) {
                const EdgeId id = canonical_edge_id(u, v, n);
                CHECK(id == expect);
                const auto [du, dv] = decode_edge_id(id, n);
                CHECK(du == u);
                CHECK(dv == v);
                ++expect;
            }
    }
}

TEST_CASE("edge ids: decode at large n") {
    const std::uint32_t n = 100000;
    for (EdgeId id : {EdgeId{0}, EdgeId{99998}, EdgeId{99999}, edge_count(n) - 1}) {
        const auto [u, v] = decode_edge_id(id, n);
        CHECK(canonical_edge_id(u, v, n) == id);
    }
}

TEST_CASE("gen_environment: counts, range, determinism") {
    CHECK_THROWS_AS(gen_environment(1, 5), invalid_parameter);

    const auto e2 = gen_environment(2, 42);
    CHECK(e2.edges() == 1);
    CHECK(e2.omega(0) >= 0.0);
    CHECK(e2.omega(0) <= 1.0);

    const auto a = gen_environment(5, 7);
    const auto b = gen_environment(5, 7);
    CHECK(a.edges() == 10);
    for (EdgeId e = 0; e < 10; ++e) CHECK(a.omega(e) == b.omega(e));

    const auto c = gen_environment(5, 8);
    int diff = 0;
    for (EdgeId e = 0; e < 10; ++e) diff += (a.omega(e) != c.omega(e));
    CHECK(diff == 10);
}

TEST_CASE("gen_environment: law of large numbers at n = 100") {
    const auto env = gen_environment(100, 123);
    double mean = 0.0;
    for (EdgeId e = 0; e < env.edges(); ++e) mean += env.omega(e);
    mean /= static_cast<double>(env.edges());
    CHECK(mean > 0.45);
    CHECK(mean < 0.55);
}

TEST_CASE("environment serialization round-trips bit-exactly") {
    const auto env = gen_environment(9, 9876543210123ULL);
    std::stringstream ss;
    save_environment(env, ss);
    const auto back = load_environment(ss);
    CHECK(back.n() == env.n());
    CHECK(back.seed() == env.seed());
    for (EdgeId e = 0; e < env.edges(); ++e) CHECK(back.omega(e) == env.omega(e));

    // and the reloaded copy serializes to the same bytes
    std::stringstream ss2;
    save_environment(back, ss2);
    std::stringstream ss3;
    save_environment(env, ss3);
    CHECK(ss2.str() == ss3.str());
}

TEST_CASE("log_weight_view: beta handling") {
    const auto env = gen_environment(4, 11);
    CHECK_THROWS_AS(log_weight_view(env, -0.5), invalid_parameter);

    const auto g0 = log_weight_view(env, 0.0);
    g0.for_neighbors(0, [&](Vertex, double l) { CHECK(l == 0.0); });

    const auto g = log_weight_view(env, 2.0);
    for (Vertex u = 0; u < 4; ++u)
        g.for_neighbors(u, [&](Vertex v, double l) {
            CHECK(l == -2.0 * env.omega(u, v));
            CHECK(l <= 0.0);
        });

    // log-domain only: huge beta constructs and stays finite
    const auto big = log_weight_view(env, 1e6);
    big.for_neighbors(0, [&](Vertex, double l) { CHECK(std::isfinite(l)); });
}

TEST_CASE("explicit log-weight graphs: adjacency and connectivity") {
    std::vector<EdgeW> tri = {{0, 1, 0.0}, {1, 2, 0.0}, {0, 2, std::log(2.0)}};
    const auto g = LogWeightGraph::from_edges(3, tri);
    CHECK(g.connected());
    CHECK(g.degree(1) == 2);
    CHECK(g.log_w(0, 2) == doctest::Approx(std::log(2.0)));

    std::vector<EdgeW> split = {{0, 1, 0.0}, {2, 3, 0.0}};
    CHECK_FALSE(LogWeightGraph::from_edges(4, split).connected());

    CHECK_THROWS_AS(LogWeightGraph::from_edges(3, {{0, 0, 0.0}}), invalid_parameter);
}
