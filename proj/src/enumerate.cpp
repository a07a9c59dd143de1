#include <algorithm>
#include <cmath>

#include "rstre/errors.hpp"
#include "rstre/oracle.hpp"
#include "rstre/samplers.hpp"

namespace rstre {

namespace {

constexpr std::uint32_t kMaxEdges = 28;          // K_8
constexpr std::uint64_t kMaxTrees = 1u << 21;

// Recursive forest extension over the edge list with a feasibility prune.
void extend(const std::vector<EdgeW>& edges, std::uint32_t n, std::size_t next_edge,
            std::uint32_t picked, std::uint32_t mask, double log_w,
            std::vector<Vertex>& parent_scratch, std::vector<TreeWeight>& out) {
    if (picked == n - 1) {
        out.push_back({mask, log_w, 0.0});
        if (out.size() > kMaxTrees)
            throw size_cap_error("enumerate_spanning_trees: more than 2^21 trees");
        return;
    }
    if (edges.size() - next_edge < (n - 1) - picked) return;  // cannot finish

    auto find = [&](Vertex x) {
        while (parent_scratch[x] != x) x = parent_scratch[x] = parent_scratch[parent_scratch[x]];
        return x;
    };

    // include edges[next_edge] if it joins two components
    const auto& e = edges[next_edge];
    const Vertex ru = find(e.u), rv = find(e.v);
    if (ru != rv) {
        auto saved = parent_scratch;  // path compression makes undo non-local
        parent_scratch[ru] = rv;
        extend(edges, n, next_edge + 1, picked + 1, mask | (1u << next_edge), log_w + e.log_w,
               parent_scratch, out);
        parent_scratch = std::move(saved);
    }
    // exclude it
    extend(edges, n, next_edge + 1, picked, mask, log_w, parent_scratch, out);
}

}  // namespace

SpanningTree TreeDistribution::tree(std::uint32_t n, const std::vector<EdgeW>& edges,
                                    std::size_t idx) const {
    const auto& tw = trees.at(idx);
    std::vector<std::pair<Vertex, Vertex>> list;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (tw.edge_mask & (1u << i)) list.emplace_back(edges[i].u, edges[i].v);
    return SpanningTree::from_edges(n, list);
}

TreeDistribution enumerate_spanning_trees(const LogWeightGraph& g) {
    const auto edges = g.materialize_edges();
    if (edges.size() > kMaxEdges)
        throw size_cap_error("enumerate_spanning_trees: more than 28 edges");
    const std::uint32_t n = g.n();
    if (n < 2) throw invalid_parameter("enumerate_spanning_trees: n must be >= 2");

    TreeDistribution dist;
    std::vector<Vertex> parents(n);
    for (Vertex v = 0; v < n; ++v) parents[v] = v;
    extend(edges, n, 0, 0, 0, 0.0, parents, dist.trees);
    if (dist.trees.empty())
        throw invalid_parameter("enumerate_spanning_trees: graph is disconnected");

    // cross-check the count against the matrix-tree determinant at unit weights
    {
        std::vector<EdgeW> unit = edges;
        for (auto& e : unit) e.log_w = 0.0;
        auto z = log_partition_function(LogWeightGraph::from_edges(n, unit));
        const double expected = std::exp(z.log_z);
        const double got = static_cast<double>(dist.trees.size());
        if (!z.connected || std::abs(expected - got) > 0.5 + 1e-6 * expected)
            throw internal_invariant_violation(
                "enumerate_spanning_trees: count disagrees with matrix-tree determinant");
    }

    double lmax = -std::numeric_limits<double>::infinity();
    for (const auto& t : dist.trees) lmax = std::max(lmax, t.log_weight);
    double sum = 0.0;
    for (const auto& t : dist.trees) sum += std::exp(t.log_weight - lmax);
    dist.log_z = lmax + std::log(sum);
    for (auto& t : dist.trees) t.prob = std::exp(t.log_weight - dist.log_z);
    return dist;
}

}  // namespace rstre
