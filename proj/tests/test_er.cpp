#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "rstre/clusters.hpp"
#include "rstre/environment.hpp"
#include "rstre/errors.hpp"
#include "rstre/p_schedule.hpp"
#include "rstre/samplers.hpp"

using namespace rstre;

namespace {

Subgraph path_graph(std::uint32_t len) {  // len edges, len+1 vertices
    Subgraph g;
    for (Vertex v = 0; v <= len; ++v) g.vertices.push_back(v);
    for (Vertex v = 0; v < len; ++v) g.edges.emplace_back(v, v + 1);
    return g;
}

Subgraph cycle_graph(std::uint32_t len) {
    Subgraph g;
    for (Vertex v = 0; v < len; ++v) g.vertices.push_back(v);
    for (Vertex v = 0; v < len; ++v) g.edges.emplace_back(v, (v + 1) % len);
    return g;
}

}  // namespace

TEST_CASE("clusters_at: extremes p = 0 and p = 1") {
    const auto env = gen_environment(12, 900);
    const auto d0 = clusters_at(env, 0.0);
    CHECK(d0.component_count() == 12);
    for (auto s : d0.sizes) CHECK(s == 1);

    const auto d1 = clusters_at(env, 1.0);
    CHECK(d1.sizes[0] == 12);
    CHECK(d1.component_count() == 1);
}

TEST_CASE("clusters_at: refinement under p <= q") {
    Rng rng(31);
    const auto env = gen_environment(200, 901);
    for (int it = 0; it < 100; ++it) {
        const double p = rng.next_unit() * 0.02;
        const double q = p + rng.next_unit() * 0.02;
        const auto dp = clusters_at(env, p);
        const auto dq = clusters_at(env, q);
        // each p-component maps into exactly one q-component
        std::vector<std::int64_t> image(dp.component_count(), -1);
        for (Vertex v = 0; v < 200; ++v) {
            auto& img = image[dp.component[v]];
            if (img < 0) img = dq.component[v];
            CHECK(img == dq.component[v]);
        }
    }
}

TEST_CASE("clusters: deterministic ordering by size then min vertex") {
    const auto env = gen_environment(60, 902);
    const auto dec = clusters_at(env, 1.2 / 60);
    for (std::uint32_t r = 1; r < dec.component_count(); ++r)
        CHECK(dec.sizes[r - 1] >= dec.sizes[r]);
    // rerun gives identical assignment
    const auto dec2 = clusters_at(env, 1.2 / 60);
    CHECK(dec.component == dec2.component);
}

TEST_CASE("sparse sampler matches the binomial law and the monotone coupling") {
    const std::uint32_t n = 3000;
    const double p_cap = 2.0 / n;
    double total = 0.0;
    for (int s = 0; s < 40; ++s) {
        const auto open = sample_open_edges_sparse(n, 7000 + s, p_cap);
        total += static_cast<double>(open.edges.size());
        for (const auto& e : open.edges) {
            CHECK(e.u < e.v);
            CHECK(e.omega > 0.0);
            CHECK(e.omega <= p_cap);
        }
        // within one sample, thresholding is monotone by construction
        const auto d1 = clusters_from(open, 1.0 / n);
        const auto d2 = clusters_from(open, p_cap);
        std::vector<std::int64_t> image(d1.component_count(), -1);
        for (Vertex v = 0; v < n; ++v) {
            auto& img = image[d1.component[v]];
            if (img < 0) img = d2.component[v];
            CHECK(img == d2.component[v]);
        }
    }
    const double mean = total / 40.0;
    const double expect = p_cap * static_cast<double>(edge_count(n));
    CHECK(std::abs(mean - expect) < 0.05 * expect);
}

TEST_CASE("component_stats: path and cycle") {
    const auto env = gen_environment(10, 1);  // any env; we bypass it below
    (void)env;
    ClusterDecomposition dec;
    dec.n = 6;
    dec.p = 1.0;
    dec.component.assign(6, 0);
    dec.sizes = {6};
    dec.edge_counts = {6};
    dec.comp_edges.resize(1);
    for (Vertex v = 0; v < 6; ++v)
        dec.comp_edges[0].push_back({v, static_cast<Vertex>((v + 1) % 6), 0.5});
    const auto cyc = component_stats(dec, 0);
    CHECK(cyc.size == 6);
    CHECK(cyc.excess == 0);
    CHECK(cyc.diameter == 3);
    CHECK(cyc.diameter_exact);
    CHECK(cyc.longest_path == 5);
    CHECK(cyc.longest_path_exact);

    ClusterDecomposition pd;
    pd.n = 5;
    pd.p = 1.0;
    pd.component.assign(5, 0);
    pd.sizes = {5};
    pd.edge_counts = {4};
    pd.comp_edges.resize(1);
    for (Vertex v = 0; v + 1 < 5; ++v) pd.comp_edges[0].push_back({v, static_cast<Vertex>(v + 1), 0.1});
    const auto pst = component_stats(pd, 0);
    CHECK(pst.size == 5);
    CHECK(pst.excess == -1);
    CHECK(pst.diameter == 4);
    CHECK(pst.longest_path == 4);
}

TEST_CASE("longest_path: structured examples") {
    CHECK(longest_path(path_graph(7)).length == 7);
    CHECK(longest_path(path_graph(7)).exact);
    CHECK(longest_path(cycle_graph(6)).length == 5);
    CHECK(longest_path(cycle_graph(6)).exact);

    Subgraph star;
    star.vertices = {0, 1, 2, 3, 4};
    for (Vertex leaf = 1; leaf <= 4; ++leaf) star.edges.emplace_back(0, leaf);
    CHECK(longest_path(star).length == 2);
    CHECK(longest_path(star).exact);

    // theta graph with arms 2,3,4: nine vertices, longest path 7
    Subgraph theta;
    for (Vertex v = 0; v < 9; ++v) theta.vertices.push_back(v);
    theta.edges = {{0, 2}, {2, 1},                  // arm of length 2
                   {0, 3}, {3, 4}, {4, 1},          // arm of length 3
                   {0, 5}, {5, 6}, {6, 7}, {7, 1}}; // arm of length 4
    const auto lp = longest_path(theta);
    CHECK(lp.exact);
    CHECK(lp.length == 7);
}

TEST_CASE("longest_path: agrees with brute force on random sparse components") {
    Rng rng(606);
    for (int it = 0; it < 300; ++it) {
        const auto n = static_cast<std::uint32_t>(3 + rng.next_below(14));
        // random connected graph with small excess
        Subgraph g;
        for (Vertex v = 0; v < n; ++v) g.vertices.push_back(v);
        std::set<std::pair<Vertex, Vertex>> seen;
        for (Vertex v = 1; v < n; ++v)
            seen.insert({static_cast<Vertex>(rng.next_below(v)), v});
        const auto extra = rng.next_below(4);
        for (std::uint64_t k = 0; k < extra;) {
            auto u = static_cast<Vertex>(rng.next_below(n));
            auto v = static_cast<Vertex>(rng.next_below(n));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            if (seen.insert({u, v}).second) ++k;
        }
        for (auto e : seen) g.edges.push_back(e);

        // brute force over all simple paths
        std::vector<std::vector<Vertex>> adj(n);
        for (auto [u, v] : g.edges) { adj[u].push_back(v); adj[v].push_back(u); }
        std::uint32_t brute = 0;
        std::vector<std::uint8_t> used(n, 0);
        auto dfs = [&](auto&& self, Vertex u, std::uint32_t len) -> void {
            brute = std::max(brute, len);
            used[u] = 1;
            for (Vertex v : adj[u])
                if (!used[v]) self(self, v, len + 1);
            used[u] = 0;
        };
        for (Vertex s = 0; s < n; ++s) dfs(dfs, s, 0);

        const auto lp = longest_path(g);
        CHECK(lp.exact);
        CHECK(lp.length == brute);
    }
}

TEST_CASE("two_core: trees vanish, cycles stay, pendants drop") {
    CHECK(two_core(path_graph(5)).vertices.empty());
    const auto cyc = two_core(cycle_graph(5));
    CHECK(cyc.vertices.size() == 5);
    CHECK(cyc.edges.size() == 5);

    // cycle with a pendant path
    Subgraph g = cycle_graph(4);
    g.vertices.push_back(4);
    g.vertices.push_back(5);
    g.edges.emplace_back(0, 4);
    g.edges.emplace_back(4, 5);
    const auto core = two_core(g);
    CHECK(core.vertices == std::vector<Vertex>{0, 1, 2, 3});
    CHECK(core.edges.size() == 4);
}

TEST_CASE("kernel_graph: theta and bare cycle") {
    Subgraph theta;
    for (Vertex v = 0; v < 9; ++v) theta.vertices.push_back(v);
    theta.edges = {{0, 2}, {2, 1}, {0, 3}, {3, 4}, {4, 1}, {0, 5}, {5, 6}, {6, 7}, {7, 1}};
    const auto k = kernel_graph(theta);
    CHECK(k.vertices.size() == 2);
    CHECK(k.edges.size() == 3);
    std::vector<std::uint32_t> lens;
    for (const auto& e : k.edges) {
        lens.push_back(e.length);
        CHECK(((e.a == 0 && e.b == 1) || (e.a == 1 && e.b == 0)));
    }
    std::sort(lens.begin(), lens.end());
    CHECK(lens == std::vector<std::uint32_t>{2, 3, 4});

    const auto degenerate = kernel_graph(cycle_graph(9));
    CHECK(degenerate.vertices.size() == 1);
    CHECK(degenerate.edges.size() == 1);
    CHECK(degenerate.edges[0].length == 9);
    CHECK(degenerate.edges[0].a == degenerate.edges[0].b);
}

TEST_CASE("kernel invariants: no degree-2 kernel vertices on random near-critical cores") {
    const std::uint32_t n = 4000;
    int seen_nontrivial = 0;
    for (int s = 0; s < 15; ++s) {
        const auto open = sample_open_edges_sparse(n, 500 + s, 1.35 / n);
        const auto dec = clusters_from(open, 1.35 / n);
        const auto core = two_core(component_subgraph(dec, 0));
        if (core.vertices.empty()) continue;
        std::map<Vertex, int> deg;
        for (auto [u, v] : core.edges) { ++deg[u]; ++deg[v]; }
        for (auto [v, d] : deg) CHECK(d >= 2);
        const auto k = kernel_graph(core);
        if (k.edges.size() > 1) {
            ++seen_nontrivial;
            std::map<Vertex, int> kdeg;
            for (const auto& e : k.edges) {
                kdeg[e.a] += e.a == e.b ? 2 : 1;
                if (e.a != e.b) ++kdeg[e.b];
            }
            for (auto [v, d] : kdeg) CHECK(d >= 3);
            // edge lengths reproduce the core edge count
            std::uint64_t total = 0;
            for (const auto& e : k.edges) total += e.length;
            CHECK(total == core.edges.size());
        }
    }
    CHECK(seen_nontrivial >= 1);
}

TEST_CASE("minimal_subtree: path, identity, singleton") {
    // path tree 0-1-2-3-4
    const SpanningTree t(5, 0, {0, 0, 1, 2, 3});
    const auto mid = minimal_subtree(t, {1, 3});
    CHECK(mid.vertices == std::vector<Vertex>{1, 2, 3});
    CHECK(mid.edges.size() == 2);

    std::vector<Vertex> all = {0, 1, 2, 3, 4};
    CHECK(minimal_subtree(t, all).edges.size() == 4);

    const auto single = minimal_subtree(t, {2});
    CHECK(single.vertices == std::vector<Vertex>{2});
    CHECK(single.edges.empty());

    CHECK_THROWS_AS(minimal_subtree(t, {}), invalid_parameter);
}

TEST_CASE("minimal_subtree: monotone in A and every leaf is in A") {
    Rng rng(77);
    for (int it = 0; it < 100; ++it) {
        const auto env = gen_environment(24, 3000 + it);
        Rng rw(it);
        const auto t = wilson_sample(LogWeightGraph::complete_view(env, 0.0), 0, rw);
        std::vector<Vertex> a, b;
        for (Vertex v = 0; v < 24; ++v)
            if (rng.next_unit() < 0.5) {
                b.push_back(v);
                if (rng.next_unit() < 0.5) a.push_back(v);
            }
        if (a.empty() || b.empty()) continue;
        const auto ta = minimal_subtree(t, a);
        const auto tb = minimal_subtree(t, b);
        std::set<std::pair<Vertex, Vertex>> eb(tb.edges.begin(), tb.edges.end());
        for (auto e : ta.edges) CHECK(eb.count(e) == 1);
        // leaves of the result lie in A
        std::map<Vertex, int> deg;
        for (auto [u, v] : ta.edges) { ++deg[u]; ++deg[v]; }
        std::set<Vertex> in_a(a.begin(), a.end());
        for (auto [v, d] : deg)
            if (d == 1) CHECK(in_a.count(v) == 1);
    }
}

TEST_CASE("gap_violations: trivial zero cases and parameter checks") {
    const auto env = gen_environment(40, 4001);
    Rng rng(9);
    const auto t = wilson_sample(LogWeightGraph::complete_view(env, 1.0), 0, rng);
    CHECK(gap_violations(t, env, 0.3, 1.0) == 0);   // omega <= 1 always
    CHECK(gap_violations(t, env, 0.0, 0.5) == 0);   // all clusters are singletons
    CHECK_THROWS_AS(gap_violations(t, env, 0.5, 0.5), invalid_parameter);
}

TEST_CASE("p_schedule: spec values") {
    // g0 = 1: g_2 = 5/4
    const auto s1 = p_schedule(100, 0.5, 1.0);
    CHECK(s1.g[2] == doctest::Approx(1.25));

    // log n = 10, eps = 0.01, g0 = 1 -> m = 21
    const auto s2 = p_schedule(22026, 0.01, 1.0);
    CHECK(s2.m == 21);

    // eps >= 1/(g0 log n) -> m = 0
    const auto s3 = p_schedule(22026, 0.2, 1.0);
    CHECK(s3.m == 0);

    for (std::uint32_t i = 1; i < s2.p.size(); ++i) CHECK(s2.p[i] > s2.p[i - 1]);
    CHECK_THROWS_AS(p_schedule(100, 0.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(p_schedule(100, 0.5, 0.5), invalid_parameter);
}

TEST_CASE("well_behaved_flags: degenerate and nested cases") {
    const std::uint32_t n = 400;
    const auto env = gen_environment(n, 5001);
    const auto sched = p_schedule(n, std::cbrt(1.0 / n), 4.0);
    const auto flags = well_behaved_flags(env, sched, 0);
    // C(0) is a plain set-inclusion check; recompute it directly
    const auto d0 = clusters_at(env, sched.p_at(0));
    const auto d1 = clusters_at(env, sched.p_at(1));
    bool c_direct = true;
    for (Vertex v = 0; v < n; ++v)
        if (d0.component[v] == 0 && d1.component[v] != 0) c_direct = false;
    CHECK(flags.c == c_direct);
    CHECK_THROWS_AS(well_behaved_flags(env, sched, sched.m + 1), invalid_parameter);
}

TEST_CASE("er laws: subcritical and second-largest bounds at n = 1e5 (Monte Carlo)") {
    const std::uint32_t n = 100000;
    const double eps = std::pow(n, -0.25);
    const double k = 5.0;
    const double thr_sub = 2.0 * (k + std::log(eps * eps * eps * n)) / (eps * eps);
    const double thr_c2 = 10.0 * (k + std::log(eps * eps * eps * n)) / (eps * eps);
    int sub_ok = 0, c2_ok = 0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        const auto below = clusters_from(sample_open_edges_sparse(n, 600 + s, (1 - eps) / n),
                                         (1 - eps) / n);
        sub_ok += (below.sizes[0] <= thr_sub);
        const auto above = clusters_from(sample_open_edges_sparse(n, 700 + s, (1 + eps) / n),
                                         (1 + eps) / n);
        c2_ok += (above.component_count() < 2 || above.sizes[1] <= thr_c2);
    }
    // failure bounds 3e^{-5} ~ 2% per seed; demand all but two
    CHECK(sub_ok >= seeds - 2);
    CHECK(c2_ok >= seeds - 2);
}

TEST_CASE("kernel scaling: slightly supercritical kernel size and label mean (Monte Carlo)") {
    const std::uint32_t n = 100000;
    const double eps = 2.0 * std::pow(n, -0.25);
    const double p = (1.0 + eps) / n;
    double size_sum = 0.0, label_sum = 0.0, label_count = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto dec = clusters_from(sample_open_edges_sparse(n, 800 + s, p), p);
        const auto core = two_core(component_subgraph(dec, 0));
        REQUIRE_FALSE(core.vertices.empty());
        const auto k = kernel_graph(core);
        size_sum += static_cast<double>(k.vertices.size());
        for (const auto& e : k.edges) {
            label_sum += e.length;
            label_count += 1.0;
        }
    }
    const double mean_size = size_sum / seeds;
    const double mean_label = label_sum / label_count;
    const double eps3n = eps * eps * eps * n;
    CHECK(mean_size >= eps3n / 4.0);
    CHECK(mean_size <= 4.0 * eps3n);
    CHECK(mean_label >= 0.5 / eps);
    CHECK(mean_label <= 2.0 / eps);
}
