#include <cmath>
#include <set>

#include "doctest.h"
#include "rstre/environment.hpp"
#include "rstre/errors.hpp"
#include "rstre/oracle.hpp"
#include "rstre/rng.hpp"
#include "rstre/samplers.hpp"
#include "rstre/xfloat.hpp"

using namespace rstre;

namespace {

LogWeightGraph triangle_112() {
    // conductances (1, 1, 2)
    return LogWeightGraph::from_edges(3, {{0, 1, 0.0}, {1, 2, 0.0}, {0, 2, std::log(2.0)}});
}

LogWeightGraph unit_complete(std::uint32_t n) {
    std::vector<EdgeW> edges;
    for (Vertex u = 0; u + 1 < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 0.0});
    return LogWeightGraph::from_edges(n, std::move(edges));
}

LogWeightGraph random_weighted(Rng& rng, std::uint32_t n, std::uint32_t extra, double beta) {
    std::set<std::pair<Vertex, Vertex>> seen;
    for (Vertex v = 1; v < n; ++v)
        seen.insert({static_cast<Vertex>(rng.next_below(v)), v});
    const std::uint64_t room = edge_count(n) - (n - 1);
    for (std::uint32_t k = 0; k < std::min<std::uint64_t>(extra, room);) {
        auto u = static_cast<Vertex>(rng.next_below(n));
        auto v = static_cast<Vertex>(rng.next_below(n));
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (seen.insert({u, v}).second) ++k;
    }
    std::vector<EdgeW> edges;
    for (auto [u, v] : seen) edges.push_back({u, v, -beta * rng.next_unit()});
    return LogWeightGraph::from_edges(n, std::move(edges));
}

}  // namespace

TEST_CASE("xfloat: arithmetic identities") {
    const auto a = XFloat::from_double(3.5);
    const auto b = XFloat::from_double(-0.125);
    CHECK((a * b).to_double() == doctest::Approx(-0.4375));
    CHECK((a / b).to_double() == doctest::Approx(-28.0));
    CHECK((a + b).to_double() == doctest::Approx(3.375));
    CHECK((a - b).to_double() == doctest::Approx(3.625));
    CHECK(XFloat::from_double(0.0).is_zero());
    CHECK((a - a).is_zero());

    // magnitudes far beyond double range
    const auto tiny = XFloat::exp_of_log(-1e6);
    const auto tiny2 = tiny * tiny;
    CHECK(tiny2.log_abs() == doctest::Approx(-2e6).epsilon(1e-12));
    CHECK((tiny2 / tiny).log_abs() == doctest::Approx(-1e6).epsilon(1e-12));
    CHECK((tiny + tiny).log_abs() == doctest::Approx(-1e6 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("xfloat: exp_of_log accuracy across scales") {
    for (double l : {0.0, -1.0, 3.25, -700.0, 1000.0, -123456.789}) {
        const auto x = XFloat::exp_of_log(l);
        CHECK(x.log_abs() == doctest::Approx(l).epsilon(1e-14));
    }
    CHECK(XFloat::exp_of_log(-std::numeric_limits<double>::infinity()).is_zero());
}

TEST_CASE("xfloat: exponent budget raises") {
    XFloat huge = XFloat::exp_of_log(1e18);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 64; ++i) huge = huge * huge;
        }(),
        numeric_range_error);
}

TEST_CASE("log Z: Cayley count on K_4 at beta = 0") {
    const auto z = log_partition_function(unit_complete(4));
    CHECK(z.connected);
    CHECK(z.log_z == doctest::Approx(std::log(16.0)).epsilon(1e-12));
}

TEST_CASE("log Z: triangle (1,1,2) equals log 5") {
    const auto z = log_partition_function(triangle_112());
    CHECK(z.log_z == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("log Z: matches enumeration on weighted K_5 at beta = 3") {
    const auto env = gen_environment(5, 31337);
    const auto g = LogWeightGraph::from_environment(env, 3.0);
    const auto dist = enumerate_spanning_trees(g);
    CHECK(dist.trees.size() == 125);
    const auto z = log_partition_function(g);
    CHECK(z.log_z == doctest::Approx(dist.log_z).epsilon(1e-9));
}

TEST_CASE("log Z: disconnected input is tagged, not thrown") {
    const auto g = LogWeightGraph::from_edges(4, {{0, 1, 0.0}, {2, 3, 0.0}});
    const auto z = log_partition_function(g);
    CHECK_FALSE(z.connected);
    CHECK(z.log_z == -std::numeric_limits<double>::infinity());
}

TEST_CASE("effective resistance: unit K_3 and series law") {
    const auto r3 = effective_resistance(unit_complete(3), 0, 1);
    CHECK(r3.r_eff.to_double() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_FALSE(r3.condition_flag);

    // two-edge path with resistances r1, r2: endpoints see r1 + r2
    const double r1 = 1.7, r2 = 0.4;
    const auto path = LogWeightGraph::from_edges(
        3, {{0, 1, -std::log(r1)}, {1, 2, -std::log(r2)}});
    CHECK(effective_resistance(path, 0, 2).r_eff.to_double() ==
          doctest::Approx(r1 + r2).epsilon(1e-12));

    CHECK_THROWS_AS(effective_resistance(unit_complete(3), 1, 1), invalid_parameter);
}

TEST_CASE("effective resistance: unit K_n symmetry 2/n") {
    for (std::uint32_t n : {3u, 4u, 5u, 6u}) {
        const auto rep = effective_resistance(unit_complete(n), 0, n - 1);
        CHECK(rep.r_eff.to_double() == doctest::Approx(2.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("edge inclusion: unit K_3, unit K_4, triangle (1,1,2)") {
    CHECK(edge_inclusion_prob(unit_complete(3), 0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(edge_inclusion_prob(unit_complete(4), 1, 3) == doctest::Approx(0.5));
    const auto tri = triangle_112();
    CHECK(edge_inclusion_prob(tri, 0, 1) == doctest::Approx(3.0 / 5.0).epsilon(1e-12));
    CHECK(edge_inclusion_prob(tri, 0, 2) == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("tree hamiltonian: sums omega and ignores beta") {
    const auto env = gen_environment(3, 99);
    SpanningTree t(3, 0, {0, 0, 1});
    const double expect = env.omega(0, 1) + env.omega(1, 2);
    CHECK(tree_hamiltonian(env, t) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("gibbs log prob: uniform at beta 0; normalizes over K_5") {
    const auto env4 = gen_environment(4, 5);
    const auto g4 = LogWeightGraph::from_environment(env4, 0.0);
    Rng rng(17);
    const auto t = wilson_sample(g4, 0, rng);
    CHECK(gibbs_log_prob(g4, t) == doctest::Approx(std::log(1.0 / 16.0)).epsilon(1e-12));

    const auto env5 = gen_environment(5, 6);
    const auto g5 = LogWeightGraph::from_environment(env5, 2.0);
    const auto dist = enumerate_spanning_trees(g5);
    double total = 0.0;
    for (std::size_t i = 0; i < dist.trees.size(); ++i)
        total += std::exp(gibbs_log_prob(g5, dist.tree(5, g5.edges(), i)));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gibbs log prob: heavier triangle trees carry 2/5") {
    const auto tri = triangle_112();
    // tree {(0,2),(1,2)} uses the weight-2 edge once: weight 2, Z = 5
    SpanningTree t(3, 2, {2, 2, 2});
    CHECK(gibbs_log_prob(tri, t) == doctest::Approx(std::log(2.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("oracle invariants: Foster sum rule on random graphs") {
    Rng rng(0xF0);
    const double betas[4] = {0.0, 1.0, 10.0, 1000.0};
    for (int it = 0; it < 100; ++it) {
        const auto n = static_cast<std::uint32_t>(4 + rng.next_below(9));
        const auto g = random_weighted(rng, n, static_cast<std::uint32_t>(rng.next_below(6)),
                                       betas[it % 4]);
        double total = 0.0;
        for (const auto& e : g.edges()) total += edge_inclusion_prob(g, e.u, e.v);
        CHECK(total == doctest::Approx(n - 1.0).epsilon(1e-8));
    }
}

TEST_CASE("oracle invariants: Rayleigh monotonicity under single-edge boosts") {
    Rng rng(0xFA11);
    for (int it = 0; it < 100; ++it) {
        const auto n = static_cast<std::uint32_t>(4 + rng.next_below(7));
        auto g = random_weighted(rng, n, static_cast<std::uint32_t>(rng.next_below(5)), 2.0);
        const auto a = static_cast<Vertex>(rng.next_below(n));
        auto b = static_cast<Vertex>(rng.next_below(n));
        if (a == b) b = (b + 1) % n;
        const double before = effective_resistance(g, a, b).r_eff.to_double();
        auto edges = g.edges();
        edges[rng.next_below(edges.size())].log_w += 0.9;
        const double after =
            effective_resistance(LogWeightGraph::from_edges(n, edges), a, b).r_eff.to_double();
        CHECK(after <= before * (1.0 + 1e-12));
    }
}

TEST_CASE("oracle invariants: constant shift scales Z and cancels in Gibbs") {
    Rng rng(0x5ca1e);
    for (int it = 0; it < 20; ++it) {
        const auto n = static_cast<std::uint32_t>(4 + rng.next_below(4));
        auto g = random_weighted(rng, n, 3, 1.0);
        const double c = 0.37 * (it + 1);
        auto shifted_edges = g.edges();
        for (auto& e : shifted_edges) e.log_w += c;
        const auto g2 = LogWeightGraph::from_edges(n, shifted_edges);
        const auto z1 = log_partition_function(g);
        const auto z2 = log_partition_function(g2);
        CHECK(z2.log_z - z1.log_z == doctest::Approx(c * (n - 1.0)).epsilon(1e-9));

        Rng rw(7);
        const auto t = wilson_sample(g, 0, rw);
        CHECK(gibbs_log_prob(g, t) == doctest::Approx(gibbs_log_prob(g2, t)).epsilon(1e-9));
    }
}

TEST_CASE("oracle size cap at n = 256") {
    std::vector<EdgeW> path;
    for (Vertex v = 0; v + 1 < 300; ++v) path.push_back({v, static_cast<Vertex>(v + 1), 0.0});
    CHECK_THROWS_AS(log_partition_function(LogWeightGraph::from_edges(300, path)),
                    size_cap_error);
    // K_2 sits well inside the cap: a single tree, log Z = 0
    CHECK(log_partition_function(unit_complete(2)).log_z == doctest::Approx(0.0));
}
