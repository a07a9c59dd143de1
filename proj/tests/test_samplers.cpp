#include <cmath>
#include <sstream>
#include <map>
#include <set>

#include "doctest.h"
#include "rstre/environment.hpp"
#include "rstre/errors.hpp"
#include "rstre/oracle.hpp"
#include "rstre/samplers.hpp"

using namespace rstre;

namespace {

LogWeightGraph unit_complete(std::uint32_t n) {
    std::vector<EdgeW> edges;
    for (Vertex u = 0; u + 1 < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 0.0});
    return LogWeightGraph::from_edges(n, std::move(edges));
}

std::uint32_t tree_mask(const SpanningTree& t) {
    std::uint32_t mask = 0;
    for (EdgeId id : t.edge_ids()) mask |= 1u << id;
    return mask;
}

double wilson_tv_vs_enumeration(const LogWeightGraph& g, int draws, std::uint64_t seed,
                                Transition mode = Transition::kGumbel) {
    const auto dist = enumerate_spanning_trees(g);
    std::map<std::uint32_t, std::size_t> index;
    for (std::size_t i = 0; i < dist.trees.size(); ++i) index[dist.trees[i].edge_mask] = i;
    std::vector<std::uint64_t> counts(dist.trees.size(), 0);
    Rng rng(seed);
    WilsonOptions opts;
    opts.transition = mode;
    opts.validate = true;
    for (int d = 0; d < draws; ++d) ++counts[index.at(tree_mask(wilson_sample(g, 0, rng, opts)))];
    double tv = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        tv += std::abs(static_cast<double>(counts[i]) / draws - dist.trees[i].prob);
    return 0.5 * tv;
}

}  // namespace

TEST_CASE("loop_erase: examples") {
    CHECK(loop_erase({0, 1, 0, 2}) == std::vector<Vertex>{0, 2});
    CHECK(loop_erase({0, 1, 2, 1, 3}) == std::vector<Vertex>{0, 1, 3});
    CHECK(loop_erase({5}) == std::vector<Vertex>{5});
    CHECK_THROWS_AS(loop_erase({}), invalid_parameter);
}

TEST_CASE("loop_erase: endpoints preserved, output self-avoiding, idempotent") {
    Rng rng(404);
    for (int it = 0; it < 500; ++it) {
        std::vector<Vertex> path;
        const auto len = 1 + rng.next_below(60);
        for (std::uint64_t i = 0; i < len; ++i)
            path.push_back(static_cast<Vertex>(rng.next_below(10)));
        const auto out = loop_erase(path);
        CHECK(out.front() == path.front());
        CHECK(out.back() == path.back());
        std::set<Vertex> distinct(out.begin(), out.end());
        CHECK(distinct.size() == out.size());
        CHECK(loop_erase(out) == out);
    }
}

TEST_CASE("wilson: path graph yields its unique tree") {
    const auto g = LogWeightGraph::from_edges(3, {{0, 1, -0.3}, {1, 2, -1.2}});
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto t = wilson_sample(g, 0, rng, {.validate = true});
        CHECK(tree_mask(t) == 0b101u);  // ids (0,1)=0, (1,2)=2
    }
}

TEST_CASE("wilson: uniform over the 16 trees of K_4 at beta = 0") {
    CHECK(wilson_tv_vs_enumeration(unit_complete(4), 100000, 2024) <= 0.02);
}

TEST_CASE("wilson: matches the Gibbs law on weighted K_5 at beta = 3") {
    const auto env = gen_environment(5, 777);
    const auto g = LogWeightGraph::from_environment(env, 3.0);
    CHECK(wilson_tv_vs_enumeration(g, 100000, 99) <= 0.02);
}

TEST_CASE("wilson: alias transitions agree with the same law") {
    const auto env = gen_environment(5, 778);
    const auto g = LogWeightGraph::from_environment(env, 2.0);
    CHECK(wilson_tv_vs_enumeration(g, 100000, 98, Transition::kAlias) <= 0.02);
}

TEST_CASE("wilson: gumbel step is invariant under constant weight shifts") {
    // same noise stream + shifted log-weights => identical samples
    const auto env = gen_environment(6, 52);
    std::vector<EdgeW> base, shifted;
    for (Vertex u = 0; u + 1 < 6; ++u)
        for (Vertex v = u + 1; v < 6; ++v) {
            const double l = -1.7 * env.omega(u, v);
            base.push_back({u, v, l});
            shifted.push_back({u, v, l + 5.25});
        }
    const auto g1 = LogWeightGraph::from_edges(6, base);
    const auto g2 = LogWeightGraph::from_edges(6, shifted);
    for (int it = 0; it < 50; ++it) {
        Rng r1(9000 + it), r2(9000 + it);
        CHECK(wilson_sample(g1, 0, r1).parents() == wilson_sample(g2, 0, r2).parents());
    }
}

TEST_CASE("wilson: budget exceeded raises with diagnostics") {
    const auto g = unit_complete(16);
    Rng rng(3);
    WilsonOptions opts;
    opts.step_budget = 2;
    CHECK_THROWS_AS(wilson_sample(g, 0, rng, opts), budget_exceeded);
}

TEST_CASE("sequential: triangle (1,1,2) probabilities by chained coins") {
    const auto tri =
        LogWeightGraph::from_edges(3, {{0, 1, 0.0}, {1, 2, 0.0}, {0, 2, std::log(2.0)}});
    // trees: {e0,e1} weight 1, {e0,e2} weight 2, {e1,e2} weight 2, Z = 5
    const SpanningTree t01(3, 0, {0, 0, 1});   // edges (0,1),(1,2)
    const SpanningTree t02(3, 0, {0, 0, 0});   // edges (0,1),(0,2)
    const SpanningTree t12(3, 2, {2, 2, 2});   // edges (0,2),(1,2)
    CHECK(std::exp(sequential_tree_log_prob(tri, t01)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::exp(sequential_tree_log_prob(tri, t02)) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(std::exp(sequential_tree_log_prob(tri, t12)) == doctest::Approx(0.4).epsilon(1e-12));

    // and the sampler's empirical frequencies agree
    Rng rng(1);
    int c01 = 0, c02 = 0, c12 = 0;
    for (int d = 0; d < 50000; ++d) {
        const auto mask = tree_mask(sequential_exact_sample(tri, rng, {.validate = true}));
        c01 += (mask == 0b101u);  // edges (0,1),(1,2)
        c02 += (mask == 0b011u);  // edges (0,1),(0,2)
        c12 += (mask == 0b110u);
    }
    CHECK(c01 + c02 + c12 == 50000);
    CHECK(std::abs(c01 / 50000.0 - 0.2) < 0.01);
    CHECK(std::abs(c02 / 50000.0 - 0.4) < 0.01);
}

TEST_CASE("sequential: a tree input returns that tree always") {
    const auto g = LogWeightGraph::from_edges(5, {{0, 1, -0.1}, {1, 2, -2.0}, {1, 3, -0.7},
                                                  {3, 4, -1.1}});
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const auto t = sequential_exact_sample(g, rng, {.validate = true});
        CHECK(t.edge_ids().size() == 4);
        CHECK(std::exp(sequential_tree_log_prob(g, t)) == doctest::Approx(1.0));
    }
}

TEST_CASE("sequential: high-beta triangle concentrates on the two lightest edges") {
    // omega = (0.2, 0.5, 0.9), beta = 100: P(mst tree) = 1 - eps, eps < 1e-17
    const double beta = 100.0;
    const auto tri = LogWeightGraph::from_edges(
        3, {{0, 1, -beta * 0.2}, {1, 2, -beta * 0.5}, {0, 2, -beta * 0.9}});
    const SpanningTree mst(3, 0, {0, 0, 1});  // edges (0,1),(1,2)
    const double eps = -std::expm1(sequential_tree_log_prob(tri, mst));
    CHECK(eps >= 0.0);
    CHECK(eps < 1e-17);
    Rng rng(12);
    for (int i = 0; i < 200; ++i)
        CHECK(tree_mask(sequential_exact_sample(tri, rng)) == 0b101u);
}

TEST_CASE("sequential: chain probabilities match enumeration across beta scales") {
    for (double beta : {0.0, 1.0, 5.0, 40.0, 300.0, 1e6}) {
        const auto env = gen_environment(5, 4242);
        const auto g = LogWeightGraph::from_environment(env, beta);
        const auto dist = enumerate_spanning_trees(g);
        for (std::size_t i = 0; i < dist.trees.size(); ++i) {
            const auto t = dist.tree(5, g.edges(), i);
            const double lp = sequential_tree_log_prob(g, t);
            const double enum_lp = dist.trees[i].log_weight - dist.log_z;
            // relative error of the probability = absolute error of its log
            CHECK(std::abs(lp - enum_lp) <= 1e-9);
        }
    }
}

TEST_CASE("sequential: wilson and sequential agree on K_6 at beta = 2 (TV)") {
    const auto env = gen_environment(6, 616);
    const auto g = LogWeightGraph::from_environment(env, 2.0);
    const auto dist = enumerate_spanning_trees(g);
    std::map<std::uint32_t, std::size_t> index;
    for (std::size_t i = 0; i < dist.trees.size(); ++i) index[dist.trees[i].edge_mask] = i;
    std::vector<std::uint64_t> counts(dist.trees.size(), 0);
    Rng rng(3131);
    const int draws = 100000;
    for (int d = 0; d < draws; ++d)
        ++counts[index.at(tree_mask(sequential_exact_sample(g, rng)))];
    double tv = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        tv += std::abs(static_cast<double>(counts[i]) / draws - dist.trees[i].prob);
    CHECK(0.5 * tv <= 0.02);
}

TEST_CASE("sequential: size cap honored and configurable") {
    const auto env = gen_environment(140, 7);
    const auto g = LogWeightGraph::complete_view(env, 1.0);
    Rng rng(2);
    CHECK_THROWS_AS(sequential_exact_sample(g, rng), size_cap_error);
    SequentialOptions opts;
    opts.size_cap = 140;
    const auto t = sequential_exact_sample(g, rng, opts);
    CHECK(t.valid());
}

TEST_CASE("mst: triangle picks the two lightest edges; ordering invariance") {
    const auto env = gen_environment(3, 5150);
    const auto t = mst_kruskal(env);
    // rank the three omegas; the heaviest edge must be absent
    EdgeId heaviest = 0;
    for (EdgeId e = 1; e < 3; ++e)
        if (env.omega(e) > env.omega(heaviest)) heaviest = e;
    const auto ids = t.edge_ids();
    CHECK(ids.size() == 2);
    CHECK(std::find(ids.begin(), ids.end(), heaviest) == ids.end());
}

TEST_CASE("mst: equals brute-force argmin of the hamiltonian on K_6") {
    for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
        const auto env = gen_environment(6, seed);
        const auto g = LogWeightGraph::from_environment(env, 1.0);
        const auto dist = enumerate_spanning_trees(g);
        double best_h = 1e300;
        std::size_t best = 0;
        for (std::size_t i = 0; i < dist.trees.size(); ++i) {
            const double h = tree_hamiltonian(env, dist.tree(6, g.edges(), i));
            if (h < best_h) { best_h = h; best = i; }
        }
        CHECK(mst_kruskal(env).edge_ids() == dist.tree(6, g.edges(), best).edge_ids());
    }
}

TEST_CASE("mst: ordering invariance under monotone transforms is structural") {
    // mst depends on omega only through its ordering: feeding the squared
    // values through an explicit stored environment gives the same tree
    const auto env = gen_environment(12, 321);
    std::vector<double> squared(env.edges());
    for (EdgeId e = 0; e < env.edges(); ++e) squared[e] = env.omega(e) * env.omega(e);
    const auto env2 = Environment::stored(12, 321, std::move(squared));
    CHECK(mst_kruskal(env).edge_ids() == mst_kruskal(env2).edge_ids());
}

TEST_CASE("enumerate: K_4 cayley count with uniform probabilities") {
    const auto dist = enumerate_spanning_trees(unit_complete(4));
    CHECK(dist.trees.size() == 16);
    for (const auto& t : dist.trees) CHECK(t.prob == doctest::Approx(1.0 / 16.0));
    double total = 0.0;
    for (const auto& t : dist.trees) total += t.prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerate: triangle (1,1,2) gives (1/5, 2/5, 2/5)") {
    const auto tri =
        LogWeightGraph::from_edges(3, {{0, 1, 0.0}, {1, 2, 0.0}, {0, 2, std::log(2.0)}});
    const auto dist = enumerate_spanning_trees(tri);
    std::vector<double> probs;
    for (const auto& t : dist.trees) probs.push_back(t.prob);
    std::sort(probs.begin(), probs.end());
    CHECK(probs[0] == doctest::Approx(0.2));
    CHECK(probs[1] == doctest::Approx(0.4));
    CHECK(probs[2] == doctest::Approx(0.4));
}

TEST_CASE("enumerate: count equals exp(log Z at beta=0); size cap raises") {
    const auto env = gen_environment(6, 8);
    const auto g = LogWeightGraph::from_environment(env, 0.0);
    const auto dist = enumerate_spanning_trees(g);
    const auto z = log_partition_function(g);
    CHECK(static_cast<double>(dist.trees.size()) ==
          doctest::Approx(std::exp(z.log_z)).epsilon(1e-9));
    CHECK(dist.trees.size() == 1296);

    const auto env9 = gen_environment(9, 8);
    CHECK_THROWS_AS(enumerate_spanning_trees(LogWeightGraph::from_environment(env9, 0.0)),
                    size_cap_error);
}

TEST_CASE("tree io round-trip and overlap") {
    const auto env = gen_environment(12, 2124);
    Rng rng(5);
    const auto t = wilson_sample(LogWeightGraph::complete_view(env, 0.5), 0, rng);
    std::stringstream ss;
    save_tree(t, ss);
    const auto back = load_tree(ss);
    CHECK(back.parents() == t.parents());
    CHECK(edge_overlap(t, back) == 11);

    const SpanningTree star(4, 0, {0, 0, 0, 0});
    const SpanningTree path(4, 0, {0, 0, 1, 2});
    CHECK(edge_overlap(star, path) == 1);  // shared edge (0,1)
}
