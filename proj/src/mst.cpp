#include <algorithm>
#include <cmath>
#include <numeric>

#include "rstre/errors.hpp"
#include "rstre/samplers.hpp"

namespace rstre {

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
    bool unite(Vertex a, Vertex b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }
};

struct WeightedEdge {
    double omega;
    EdgeId id;
};

}  // namespace

SpanningTree mst_kruskal(const Environment& env) {
    const std::uint32_t n = env.n();
    if (n < 2) throw invalid_parameter("mst_kruskal: n must be >= 2");
    const std::uint64_t m = env.edges();

    // The MST uses only edges below t once the <=t subgraph is connected
    // (cut property), so scan-and-filter; double t on the rare miss.
    double threshold = (n <= 64) ? 1.0 : std::min(1.0, 4.0 * std::log(n) / n);
    for (;;) {
        std::vector<WeightedEdge> kept;
        kept.reserve(static_cast<std::size_t>(threshold * static_cast<double>(m) * 1.3) + 64);
        for (EdgeId e = 0; e < m; ++e) {
            const double w = env.omega(e);
            if (w <= threshold) kept.push_back({w, e});
        }
        std::sort(kept.begin(), kept.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
            return a.omega != b.omega ? a.omega < b.omega : a.id < b.id;
        });
        Dsu dsu(n);
        std::vector<std::pair<Vertex, Vertex>> tree_edges;
        tree_edges.reserve(n - 1);
        for (const auto& we : kept) {
            auto [u, v] = decode_edge_id(we.id, n);
            if (dsu.unite(u, v)) {
                tree_edges.emplace_back(u, v);
                if (tree_edges.size() == n - 1) break;
            }
        }
        if (tree_edges.size() == n - 1) return SpanningTree::from_edges(n, tree_edges);
        if (threshold >= 1.0)
            throw internal_invariant_violation("mst_kruskal: complete graph not spanned");
        threshold = std::min(1.0, threshold * 2.0);
    }
}

}  // namespace rstre
