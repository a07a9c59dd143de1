#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rstre/environment.hpp"
#include "rstre/spanning_tree.hpp"

namespace rstre {

struct OpenEdge {
    Vertex u;
    Vertex v;
    double omega;
};

// All edges with omega <= p_cap, in canonical id order.
struct OpenEdgeSet {
    std::uint32_t n = 0;
    double p_cap = 0.0;
    std::vector<OpenEdge> edges;
};

// Exact scan of the environment (every edge id is evaluated).
OpenEdgeSet collect_open_edges(const Environment& env, double p_cap);

// Sparse generator for huge n: geometric skipping over the canonical edge
// order (seed-keyed splitmix64 stream), each open edge drawing its omega
// uniformly from (0, p_cap]. Same law as the coupled environment restricted
// to [0, p_cap] and monotone in p within one seed, but a distinct documented
// stream - it is not bitwise-coupled to gen_environment.
OpenEdgeSet sample_open_edges_sparse(std::uint32_t n, std::uint64_t seed, double p_cap);

// p-open connected components, ranked by (size desc, min vertex asc). The
// component id of a vertex is its component's rank.
class ClusterDecomposition {
public:
    std::uint32_t n = 0;
    double p = 0.0;
    std::vector<std::uint32_t> component;          // vertex -> rank
    std::vector<std::uint32_t> sizes;              // rank -> vertex count
    std::vector<std::uint64_t> edge_counts;        // rank -> open edge count
    std::vector<std::vector<OpenEdge>> comp_edges; // rank -> open edges inside

    std::uint32_t component_count() const { return static_cast<std::uint32_t>(sizes.size()); }

    // Vertices of a component, ascending.
    std::vector<Vertex> vertices_of(std::uint32_t rank) const;
};

ClusterDecomposition clusters_at(const Environment& env, double p);
ClusterDecomposition clusters_from(const OpenEdgeSet& open, double p);

// A connected subgraph handed around between the structural ops.
struct Subgraph {
    std::vector<Vertex> vertices;                    // ascending
    std::vector<std::pair<Vertex, Vertex>> edges;
};

Subgraph component_subgraph(const ClusterDecomposition& dec, std::uint32_t rank);

struct LongestPathResult {
    std::uint32_t length = 0;
    bool exact = false;
};

struct LongestPathCaps {
    std::uint32_t kernel_edge_cap = 24;      // exact kernel route up to this many kernel edges
    std::uint32_t brute_size_cap = 40;       // exhaustive DFS fallback for tiny dense blobs
    std::uint64_t search_budget = 2'000'000; // expansions before falling back to a lower bound
};

// Longest acyclic path. Exact for trees (O(n)), for small-kernel components
// (excess <= ~10), and for tiny components by bounded DFS; otherwise a
// double-sweep BFS lower bound flagged approximate.
LongestPathResult longest_path(const Subgraph& g, const LongestPathCaps& caps = {});

struct ComponentStats {
    std::uint32_t size = 0;
    std::int64_t excess = 0;        // |E| - |V|; -1 for trees
    std::uint32_t diameter = 0;
    bool diameter_exact = false;
    std::uint32_t longest_path = 0;
    bool longest_path_exact = false;
};

ComponentStats component_stats(const ClusterDecomposition& dec, std::uint32_t rank,
                               const LongestPathCaps& caps = {});

// Maximal subgraph of min degree >= 2; empty for trees.
Subgraph two_core(const Subgraph& g);

struct KernelEdge {
    Vertex a;
    Vertex b;
    std::uint32_t length;           // number of core edges on the suppressed path
    std::vector<Vertex> interior;   // suppressed degree-2 vertices, from a to b
};

// Degree-2 suppression of a 2-core. Min degree >= 3 afterwards, except the
// bare-cycle degeneracy: a single vertex with one self-loop labeled by the
// cycle length.
struct KernelGraph {
    std::vector<Vertex> vertices;
    std::vector<KernelEdge> edges;
};

KernelGraph kernel_graph(const Subgraph& core);

// The union of tree paths between all pairs of A (Steiner subtree of A).
struct Subtree {
    std::vector<Vertex> vertices;
    std::vector<std::pair<Vertex, Vertex>> edges;

    std::uint32_t diameter() const;  // exact, double sweep
};

Subtree minimal_subtree(const SpanningTree& t, const std::vector<Vertex>& a);

// Number of p-clusters whose minimal subtree contains an edge with omega > q.
std::uint64_t gap_violations(const SpanningTree& t, const Environment& env, double p, double q);

}  // namespace rstre
