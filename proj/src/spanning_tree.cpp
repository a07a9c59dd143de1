#include "rstre/spanning_tree.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rstre/errors.hpp"

namespace rstre {

SpanningTree SpanningTree::from_edges(std::uint32_t n,
                                      const std::vector<std::pair<Vertex, Vertex>>& edges,
                                      Vertex root) {
    if (edges.size() + 1 != n)
        throw invalid_parameter("SpanningTree::from_edges: need exactly n-1 edges");
    std::vector<std::vector<Vertex>> adj(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n || u == v)
            throw invalid_parameter("SpanningTree::from_edges: bad edge");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<Vertex> parent(n, n);  // n = unvisited marker
    std::vector<Vertex> queue;
    queue.reserve(n);
    queue.push_back(root);
    parent[root] = root;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Vertex u = queue[i];
        for (Vertex v : adj[u])
            if (parent[v] == n) {
                parent[v] = u;
                queue.push_back(v);
            }
    }
    if (queue.size() != n)
        throw invalid_parameter("SpanningTree::from_edges: edges do not span (or contain a cycle)");
    return SpanningTree(n, root, std::move(parent));
}

std::vector<std::pair<Vertex, Vertex>> SpanningTree::edge_list() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(n_ ? n_ - 1 : 0);
    for (Vertex v = 0; v < n_; ++v)
        if (v != root_) out.emplace_back(v, parent_[v]);
    return out;
}

std::vector<EdgeId> SpanningTree::edge_ids() const {
    std::vector<EdgeId> ids;
    ids.reserve(n_ ? n_ - 1 : 0);
    for (Vertex v = 0; v < n_; ++v)
        if (v != root_) ids.push_back(canonical_edge_id(v, parent_[v], n_));
    std::sort(ids.begin(), ids.end());
    return ids;
}

bool SpanningTree::valid() const {
    if (n_ == 0 || parent_.size() != n_ || root_ >= n_ || parent_[root_] != root_) return false;
    for (Vertex v = 0; v < n_; ++v)
        if (parent_[v] >= n_ || (v != root_ && parent_[v] == v)) return false;
    // every vertex reaches the root without revisiting
    std::vector<std::uint8_t> state(n_, 0);  // 0 unknown, 1 in progress, 2 ok
    state[root_] = 2;
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < n_; ++v) {
        Vertex x = v;
        stack.clear();
        while (state[x] == 0) {
            state[x] = 1;
            stack.push_back(x);
            x = parent_[x];
            if (state[x] == 1) return false;  // cycle off the root
        }
        if (state[x] != 2) return false;
        for (Vertex y : stack) state[y] = 2;
    }
    return true;
}

void SpanningTree::require_valid() const {
    if (!valid()) throw internal_invariant_violation("SpanningTree invariant violated");
}

std::vector<std::vector<Vertex>> SpanningTree::adjacency() const {
    std::vector<std::vector<Vertex>> adj(n_);
    for (Vertex v = 0; v < n_; ++v)
        if (v != root_) {
            adj[v].push_back(parent_[v]);
            adj[parent_[v]].push_back(v);
        }
    return adj;
}

std::vector<std::uint32_t> SpanningTree::bfs_depths(Vertex source) const {
    auto adj = adjacency();
    std::vector<std::uint32_t> dist(n_, UINT32_MAX);
    std::vector<Vertex> queue;
    queue.reserve(n_);
    queue.push_back(source);
    dist[source] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        Vertex u = queue[i];
        for (Vertex v : adj[u])
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

std::uint32_t SpanningTree::diameter() const {
    if (n_ <= 1) return 0;
    auto d0 = bfs_depths(root_);
    Vertex far = static_cast<Vertex>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    auto d1 = bfs_depths(far);
    return *std::max_element(d1.begin(), d1.end());
}

std::vector<Vertex> SpanningTree::path(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) throw invalid_parameter("path: vertex out of range");
    // walk both ends up to equal depth, then in lockstep to the common ancestor
    auto depth_of = [&](Vertex x) {
        std::uint32_t d = 0;
        while (x != root_) { x = parent_[x]; ++d; }
        return d;
    };
    std::uint32_t du = depth_of(u), dv = depth_of(v);
    std::vector<Vertex> head, tail;
    Vertex a = u, b = v;
    while (du > dv) { head.push_back(a); a = parent_[a]; --du; }
    while (dv > du) { tail.push_back(b); b = parent_[b]; --dv; }
    while (a != b) {
        head.push_back(a); a = parent_[a];
        tail.push_back(b); b = parent_[b];
    }
    head.push_back(a);
    head.insert(head.end(), tail.rbegin(), tail.rend());
    return head;
}

void save_tree(const SpanningTree& t, std::ostream& out) {
    out << "rstre-tree v1 n=" << t.n() << " root=" << t.root() << "\n";
    for (Vertex v = 0; v < t.n(); ++v)
        if (v != t.root()) out << v << " " << t.parent(v) << "\n";
}

void save_tree(const SpanningTree& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("save_tree: cannot open " + path);
    save_tree(t, out);
}

SpanningTree load_tree(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw invalid_parameter("load_tree: empty input");
    std::uint32_t n = 0;
    Vertex root = 0;
    if (std::sscanf(header.c_str(), "rstre-tree v1 n=%" SCNu32 " root=%" SCNu32, &n, &root) != 2)
        throw invalid_parameter("load_tree: bad header: " + header);
    std::vector<Vertex> parent(n, n);
    if (root >= n) throw invalid_parameter("load_tree: root out of range");
    parent[root] = root;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        Vertex c = 0, p = 0;
        if (!(in >> c >> p)) throw invalid_parameter("load_tree: truncated");
        if (c >= n || p >= n || c == root) throw invalid_parameter("load_tree: bad row");
        parent[c] = p;
    }
    SpanningTree t(n, root, std::move(parent));
    t.require_valid();
    return t;
}

SpanningTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("load_tree: cannot open " + path);
    return load_tree(in);
}

std::uint64_t edge_overlap(const SpanningTree& t1, const SpanningTree& t2) {
    if (t1.n() != t2.n()) throw invalid_parameter("edge_overlap: vertex counts differ");
    auto a = t1.edge_ids();
    auto b = t2.edge_ids();
    std::uint64_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

}  // namespace rstre
