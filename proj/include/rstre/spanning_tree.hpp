#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rstre/edge_id.hpp"

namespace rstre {

// A rooted spanning tree of an n-vertex graph: parent map with parent[root] ==
// root. Tree edges are the pairs (v, parent[v]) for v != root.
class SpanningTree {
public:
    SpanningTree() = default;
    SpanningTree(std::uint32_t n, Vertex root, std::vector<Vertex> parent)
        : n_(n), root_(root), parent_(std::move(parent)) {}

    // Orients an undirected edge list by BFS from `root`. Throws
    // invalid_parameter unless the edges form a spanning tree.
    static SpanningTree from_edges(std::uint32_t n,
                                   const std::vector<std::pair<Vertex, Vertex>>& edges,
                                   Vertex root = 0);

    std::uint32_t n() const { return n_; }
    Vertex root() const { return root_; }
    Vertex parent(Vertex v) const { return parent_[v]; }
    const std::vector<Vertex>& parents() const { return parent_; }

    std::vector<std::pair<Vertex, Vertex>> edge_list() const;

    // Canonical EdgeIds of the n-1 tree edges, sorted ascending.
    std::vector<EdgeId> edge_ids() const;

    // n-1 edges, all endpoints valid, every vertex reaches the root.
    bool valid() const;
    void require_valid() const;  // throws internal_invariant_violation

    // Exact on trees: BFS from anywhere to the farthest vertex a, then the
    // eccentricity of a.
    std::uint32_t diameter() const;

    std::vector<std::uint32_t> bfs_depths(Vertex source) const;
    std::vector<Vertex> path(Vertex u, Vertex v) const;

    // Child adjacency (undirected), built on demand by callers that walk the tree.
    std::vector<std::vector<Vertex>> adjacency() const;

private:
    std::uint32_t n_ = 0;
    Vertex root_ = 0;
    std::vector<Vertex> parent_;
};

// Text format v1: header `rstre-tree v1 n=<n> root=<r>`, then n-1 lines
// `child parent`.
void save_tree(const SpanningTree& t, std::ostream& out);
void save_tree(const SpanningTree& t, const std::string& path);
SpanningTree load_tree(std::istream& in);
SpanningTree load_tree(const std::string& path);

// |edges(t1) ∩ edges(t2)| by canonical EdgeId intersection. Throws unless the
// vertex counts match.
std::uint64_t edge_overlap(const SpanningTree& t1, const SpanningTree& t2);

}  // namespace rstre
