#include "rstre/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rstre/errors.hpp"
#include "rstre/rng.hpp"

namespace rstre {

OpenEdgeSet collect_open_edges(const Environment& env, double p_cap) {
    if (p_cap < 0.0 || p_cap > 1.0) throw invalid_parameter("collect_open_edges: p_cap in [0,1]");
    OpenEdgeSet out;
    out.n = env.n();
    out.p_cap = p_cap;
    const std::uint64_t m = env.edges();
    for (EdgeId e = 0; e < m; ++e) {
        const double w = env.omega(e);
        if (w <= p_cap) {
            auto [u, v] = decode_edge_id(e, env.n());
            out.edges.push_back({u, v, w});
        }
    }
    return out;
}

OpenEdgeSet sample_open_edges_sparse(std::uint32_t n, std::uint64_t seed, double p_cap) {
    if (n < 2) throw invalid_parameter("sample_open_edges_sparse: n must be >= 2");
    if (p_cap <= 0.0 || p_cap > 1.0)
        throw invalid_parameter("sample_open_edges_sparse: p_cap in (0,1]");
    OpenEdgeSet out;
    out.n = n;
    out.p_cap = p_cap;
    const std::uint64_t m = edge_count(n);
    Rng rng(mix64(seed ^ 0x53504152534BULL));  // "SPARSK" stream tag
    const double log1mp = std::log1p(-p_cap);
    double pos = -1.0;
    for (;;) {
        // skip ~ Geom(p_cap) closed edges
        if (p_cap >= 1.0) {
            pos += 1.0;
        } else {
            pos += 1.0 + std::floor(std::log(rng.next_unit_pos()) / log1mp);
        }
        if (pos >= static_cast<double>(m)) break;
        const auto id = static_cast<EdgeId>(pos);
        auto [u, v] = decode_edge_id(id, n);
        out.edges.push_back({u, v, p_cap * rng.next_unit_pos()});
    }
    return out;
}

namespace {

struct Dsu {
    std::vector<Vertex> parent;
    std::vector<std::uint32_t> size;
    explicit Dsu(std::uint32_t n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    Vertex find(Vertex x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(Vertex a, Vertex b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

}  // namespace

ClusterDecomposition clusters_from(const OpenEdgeSet& open, double p) {
    if (p > open.p_cap + 1e-18)
        throw invalid_parameter("clusters_from: p exceeds the collected p_cap");
    const std::uint32_t n = open.n;
    Dsu dsu(n);
    for (const auto& e : open.edges)
        if (e.omega <= p) dsu.unite(e.u, e.v);

    // rank roots by (size desc, min vertex asc); min vertex of a root's class
    // is found by scanning vertices in ascending order
    std::vector<std::uint32_t> rank_of_root(n, UINT32_MAX);
    std::vector<std::pair<std::uint32_t, Vertex>> roots;  // (size, min vertex) keyed by root
    std::vector<Vertex> root_ids;
    for (Vertex v = 0; v < n; ++v) {
        const Vertex r = dsu.find(v);
        if (rank_of_root[r] == UINT32_MAX) {
            rank_of_root[r] = static_cast<std::uint32_t>(roots.size());
            roots.emplace_back(dsu.size[r], v);
            root_ids.push_back(r);
        }
    }
    std::vector<std::uint32_t> order(roots.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (roots[a].first != roots[b].first) return roots[a].first > roots[b].first;
        return roots[a].second < roots[b].second;
    });

    ClusterDecomposition dec;
    dec.n = n;
    dec.p = p;
    dec.sizes.resize(roots.size());
    std::vector<std::uint32_t> rank_by_slot(roots.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        rank_by_slot[order[r]] = r;
        dec.sizes[r] = roots[order[r]].first;
    }
    dec.component.resize(n);
    for (Vertex v = 0; v < n; ++v)
        dec.component[v] = rank_by_slot[rank_of_root[dsu.find(v)]];
    dec.edge_counts.assign(roots.size(), 0);
    dec.comp_edges.resize(roots.size());
    for (const auto& e : open.edges)
        if (e.omega <= p) {
            const std::uint32_t r = dec.component[e.u];
            ++dec.edge_counts[r];
            dec.comp_edges[r].push_back(e);
        }
    return dec;
}

ClusterDecomposition clusters_at(const Environment& env, double p) {
    if (p < 0.0 || p > 1.0) throw invalid_parameter("clusters_at: p in [0,1]");
    return clusters_from(collect_open_edges(env, p), p);
}

std::vector<Vertex> ClusterDecomposition::vertices_of(std::uint32_t rank) const {
    std::vector<Vertex> vs;
    vs.reserve(sizes.at(rank));
    for (Vertex v = 0; v < n; ++v)
        if (component[v] == rank) vs.push_back(v);
    return vs;
}

Subgraph component_subgraph(const ClusterDecomposition& dec, std::uint32_t rank) {
    if (rank >= dec.component_count())
        throw invalid_parameter("component_subgraph: rank out of range");
    Subgraph g;
    g.vertices = dec.vertices_of(rank);
    g.edges.reserve(dec.comp_edges[rank].size());
    for (const auto& e : dec.comp_edges[rank]) g.edges.emplace_back(e.u, e.v);
    return g;
}

}  // namespace rstre
