#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "rstre/clusters.hpp"
#include "rstre/errors.hpp"

// two_core / kernel_graph / longest_path / component_stats / minimal_subtree /
// gap_violations. Everything here works on local 0..k-1 relabelings.

namespace rstre {

namespace {

struct Local {
    std::uint32_t k = 0;
    std::vector<Vertex> ids;                       // local -> global
    std::vector<std::vector<std::uint32_t>> adj;   // local adjacency

    static Local build(const Subgraph& g) {
        Local L;
        L.ids = g.vertices;
        L.k = static_cast<std::uint32_t>(L.ids.size());
        L.adj.resize(L.k);
        auto local_of = [&](Vertex v) {
            auto it = std::lower_bound(L.ids.begin(), L.ids.end(), v);
            if (it == L.ids.end() || *it != v)
                throw invalid_parameter("subgraph edge endpoint not in vertex set");
            return static_cast<std::uint32_t>(it - L.ids.begin());
        };
        for (auto [u, v] : g.edges) {
            const std::uint32_t a = local_of(u), b = local_of(v);
            L.adj[a].push_back(b);
            L.adj[b].push_back(a);
        }
        return L;
    }
};

std::vector<std::uint32_t> bfs_local(const Local& L, std::uint32_t src) {
    std::vector<std::uint32_t> dist(L.k, UINT32_MAX);
    std::vector<std::uint32_t> q;
    q.reserve(L.k);
    q.push_back(src);
    dist[src] = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const std::uint32_t u = q[i];
        for (std::uint32_t v : L.adj[u])
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

std::uint32_t double_sweep(const Local& L) {
    if (L.k <= 1) return 0;
    auto d0 = bfs_local(L, 0);
    std::uint32_t far = 0;
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (d0[v] != UINT32_MAX && d0[v] > d0[far]) far = v;
    auto d1 = bfs_local(L, far);
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (d1[v] != UINT32_MAX && d1[v] > best) best = d1[v];
    return best;
}

// core flags by iterative degree-1 stripping
std::vector<std::uint8_t> core_flags(const Local& L) {
    std::vector<std::uint32_t> deg(L.k);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < L.k; ++v) {
        deg[v] = static_cast<std::uint32_t>(L.adj[v].size());
        if (deg[v] <= 1) stack.push_back(v);
    }
    std::vector<std::uint8_t> in_core(L.k, 1);
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        if (!in_core[v]) continue;
        in_core[v] = 0;
        for (std::uint32_t u : L.adj[v])
            if (in_core[u] && --deg[u] == 1) stack.push_back(u);
    }
    return in_core;
}

}  // namespace

Subgraph two_core(const Subgraph& g) {
    const Local L = Local::build(g);
    const auto in_core = core_flags(L);
    Subgraph out;
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (in_core[v]) out.vertices.push_back(L.ids[v]);
    auto is_core_global = [&](Vertex v) {
        auto it = std::lower_bound(out.vertices.begin(), out.vertices.end(), v);
        return it != out.vertices.end() && *it == v;
    };
    for (auto e : g.edges)
        if (is_core_global(e.first) && is_core_global(e.second)) out.edges.push_back(e);
    return out;
}

KernelGraph kernel_graph(const Subgraph& core) {
    KernelGraph K;
    if (core.vertices.empty()) return K;
    const Local L = Local::build(core);
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (L.adj[v].size() < 2)
            throw invalid_parameter("kernel_graph: input has a vertex of degree < 2");

    std::vector<std::uint32_t> branch;  // local kernel vertices (core degree >= 3)
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (L.adj[v].size() >= 3) branch.push_back(v);

    if (branch.empty()) {
        // bare cycle: a single vertex with one self-loop labeled by the length
        K.vertices.push_back(core.vertices.front());
        KernelEdge e;
        e.a = e.b = core.vertices.front();
        e.length = static_cast<std::uint32_t>(core.edges.size());
        // interior: the rest of the cycle in walk order
        std::uint32_t prev = 0, cur = L.adj[0][0];
        while (cur != 0) {
            e.interior.push_back(L.ids[cur]);
            std::uint32_t nxt = (L.adj[cur][0] == prev) ? L.adj[cur][1] : L.adj[cur][0];
            prev = cur;
            cur = nxt;
        }
        K.edges.push_back(std::move(e));
        return K;
    }

    for (std::uint32_t b : branch) K.vertices.push_back(L.ids[b]);
    std::vector<std::uint8_t> is_branch(L.k, 0);
    for (std::uint32_t b : branch) is_branch[b] = 1;

    // walk each chain once: start at a branch vertex, leave along each
    // incident edge slot; dedupe by only keeping walks whose (start, first)
    // is the canonical orientation
    std::vector<std::uint8_t> interior_done(L.k, 0);
    for (std::uint32_t b : branch) {
        for (std::uint32_t first : L.adj[b]) {
            if (is_branch[first]) {
                // direct branch-branch edge (length-1 chain); emit once per
                // multi-edge with b <= first, handling parallels by slot count
                if (b > first) continue;
                if (b == first) continue;  // self-loops cannot occur in a simple core
                continue;  // handled below to count parallel slots exactly once
            }
            if (interior_done[first]) continue;
            // walk through degree-2 interior until the next branch vertex
            KernelEdge e;
            e.a = L.ids[b];
            std::uint32_t prev = b, cur = first;
            while (!is_branch[cur]) {
                interior_done[cur] = 1;
                e.interior.push_back(L.ids[cur]);
                const std::uint32_t nxt = (L.adj[cur][0] == prev) ? L.adj[cur][1] : L.adj[cur][0];
                prev = cur;
                cur = nxt;
            }
            e.b = L.ids[cur];
            e.length = static_cast<std::uint32_t>(e.interior.size() + 1);
            K.edges.push_back(std::move(e));
        }
    }
    // direct branch-branch edges: each adjacency slot pair is one parallel edge
    for (std::uint32_t b : branch)
        for (std::uint32_t nb : L.adj[b])
            if (is_branch[nb] && b < nb) {
                KernelEdge e;
                e.a = L.ids[b];
                e.b = L.ids[nb];
                e.length = 1;
                K.edges.push_back(std::move(e));
            }
    return K;
}

namespace {

// ---------- exact longest path via kernel decomposition ----------

struct ChainInfo {
    std::uint32_t x, y;                  // local branch endpoints (x == y for self-loops)
    std::vector<std::uint32_t> interior; // local ids from x to y
    std::uint32_t len;                   // edge count
    std::int64_t stub_from_x = -1;       // max over interior i of (i + depth_i); -1 if none
    std::int64_t stub_from_y = -1;
    std::int64_t joint = -1;             // both ends dipping into this chain, disjointly
    std::int64_t direct = -1;            // interior-to-interior straight subchain
};

struct LongestPathEngine {
    const Local& L;
    const std::vector<std::uint8_t>& in_core;
    std::vector<std::int64_t> depth;       // pendant depth per core vertex (local)
    std::int64_t best = 0;
    std::uint64_t budget;
    bool budget_ok = true;

    LongestPathEngine(const Local& l, const std::vector<std::uint8_t>& cf, std::uint64_t b)
        : L(l), in_core(cf), depth(l.k, 0), budget(b) {}

    // pendant trees: multi-source BFS from core vertices into non-core ones
    void compute_pendants() {
        std::vector<std::uint32_t> dist(L.k, UINT32_MAX);
        std::vector<std::uint32_t> attach(L.k, UINT32_MAX);
        std::vector<std::uint32_t> q;
        for (std::uint32_t v = 0; v < L.k; ++v)
            if (in_core[v]) {
                dist[v] = 0;
                attach[v] = v;
                q.push_back(v);
            }
        for (std::size_t i = 0; i < q.size(); ++i) {
            const std::uint32_t u = q[i];
            for (std::uint32_t v : L.adj[u])
                if (dist[v] == UINT32_MAX) {
                    dist[v] = dist[u] + 1;
                    attach[v] = attach[u];
                    q.push_back(v);
                    depth[attach[v]] = std::max(depth[attach[v]],
                                                static_cast<std::int64_t>(dist[v]));
                }
        }
        // per pendant tree diameter: double sweep inside {attach == c}
        // run one BFS from the deepest vertex of each tree
        std::vector<std::uint32_t> deepest(L.k, UINT32_MAX);
        for (std::uint32_t v = 0; v < L.k; ++v) {
            if (in_core[v] || attach[v] == UINT32_MAX) continue;
            const std::uint32_t c = attach[v];
            if (deepest[c] == UINT32_MAX || dist[v] > dist[deepest[c]]) deepest[c] = v;
        }
        for (std::uint32_t c = 0; c < L.k; ++c) {
            if (deepest[c] == UINT32_MAX) continue;
            // BFS restricted to the pendant tree of c (attach == c, non-core, plus c)
            std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{deepest[c], 0}};
            std::vector<std::uint8_t> seen(L.k, 0);
            seen[deepest[c]] = 1;
            std::int64_t ecc = 0;
            while (!stack.empty()) {
                auto [u, d] = stack.back();
                stack.pop_back();
                ecc = std::max<std::int64_t>(ecc, d);
                for (std::uint32_t v : L.adj[u]) {
                    const bool inside = (v == c) || (!in_core[v] && attach[v] == c);
                    if (inside && !seen[v]) {
                        seen[v] = 1;
                        stack.push_back({v, d + 1});
                    }
                }
            }
            best = std::max(best, ecc);
        }
    }

    void chain_scans(ChainInfo& ch) const {
        const auto& I = ch.interior;
        const auto len = static_cast<std::int64_t>(ch.len);
        std::int64_t run_x = -1;  // max over seen i of (i + depth_i), i = 1..
        std::int64_t best_joint = -1;
        std::int64_t run_direct = std::numeric_limits<std::int64_t>::min();  // max (depth_i - i)
        std::int64_t best_direct = -1;
        for (std::size_t idx = 0; idx < I.size(); ++idx) {
            const auto i = static_cast<std::int64_t>(idx) + 1;  // distance from x
            const std::int64_t d = depth[I[idx]];
            if (run_x >= 0) {
                best_joint = std::max(best_joint, run_x + (len - i) + d);
                best_direct = std::max(best_direct, run_direct + i + d);
            }
            run_direct = std::max(run_direct, d - i);
            if (run_x < 0 || i + d > run_x) run_x = i + d;
            ch.stub_from_y = std::max(ch.stub_from_y, (len - i) + d);
        }
        ch.stub_from_x = run_x;
        ch.joint = best_joint;
        ch.direct = best_direct;
    }

    bool run_kernel_route(const std::vector<std::uint32_t>& branch,
                          std::vector<ChainInfo>& chains) {
        for (auto& ch : chains) chain_scans(ch);
        for (const auto& ch : chains) best = std::max(best, ch.direct);

        const auto nb = static_cast<std::uint32_t>(branch.size());
        std::vector<std::uint32_t> branch_index(L.k, UINT32_MAX);
        for (std::uint32_t i = 0; i < nb; ++i) branch_index[branch[i]] = i;
        std::vector<std::vector<std::uint32_t>> incident(nb);  // chain indices per branch
        for (std::uint32_t c = 0; c < chains.size(); ++c) {
            incident[branch_index[chains[c].x]].push_back(c);
            if (chains[c].y != chains[c].x) incident[branch_index[chains[c].y]].push_back(c);
        }

        // end-stub options at branch vertex z with a set of used chains:
        // pendant descent, or any unused incident chain side
        struct Option {
            std::int64_t value;
            std::uint32_t chain;  // UINT32_MAX for the pendant option
        };
        auto options_at = [&](std::uint32_t z, std::uint32_t used_mask) {
            std::vector<Option> opts;
            opts.push_back({depth[branch[z]], UINT32_MAX});
            for (std::uint32_t c : incident[z]) {
                if (used_mask & (1u << c)) continue;
                const auto& ch = chains[c];
                if (ch.x == branch[z] && ch.stub_from_x >= 0)
                    opts.push_back({ch.stub_from_x, c});
                if (ch.y == branch[z] && ch.x != ch.y && ch.stub_from_y >= 0)
                    opts.push_back({ch.stub_from_y, c});
                if (ch.x == ch.y && ch.stub_from_y >= 0)  // self-loop second side
                    opts.push_back({ch.stub_from_y, c});
            }
            return opts;
        };

        auto combine = [&](std::int64_t path_len, std::uint32_t z0, std::uint32_t z1,
                           std::uint32_t used_mask) {
            const auto a = options_at(z0, used_mask);
            const auto b = options_at(z1, used_mask);
            const bool same_vertex = (z0 == z1);
            for (const auto& oa : a)
                for (const auto& ob : b) {
                    if (oa.chain != UINT32_MAX && oa.chain == ob.chain) {
                        // both stubs in one chain: disjoint dips from its two sides
                        if (chains[oa.chain].joint >= 0)
                            best = std::max(best, path_len + chains[oa.chain].joint);
                        continue;
                    }
                    if (same_vertex && oa.chain == UINT32_MAX && ob.chain == UINT32_MAX)
                        continue;  // two descents in one pendant tree: covered by its diameter
                    best = std::max(best, path_len + oa.value + ob.value);
                }
        };

        // DFS over vertex-simple kernel paths (self-loops excluded from traversal)
        std::uint64_t steps = 0;
        struct Frame {
            std::uint32_t vertex;
            std::uint32_t vmask;
            std::uint32_t emask;
            std::int64_t len;
        };
        for (std::uint32_t s = 0; s < nb; ++s) {
            std::vector<Frame> stack{{s, 1u << s, 0u, 0}};
            while (!stack.empty()) {
                const Frame f = stack.back();
                stack.pop_back();
                if (++steps > budget) { budget_ok = false; return false; }
                combine(f.len, s, f.vertex, f.emask);
                for (std::uint32_t c : incident[f.vertex]) {
                    if (f.emask & (1u << c)) continue;
                    const auto& ch = chains[c];
                    if (ch.x == ch.y) continue;  // self-loop: stub use only
                    const std::uint32_t other =
                        (ch.x == branch[f.vertex]) ? branch_index[ch.y] : branch_index[ch.x];
                    if (f.vmask & (1u << other)) continue;
                    stack.push_back({other, f.vmask | (1u << other), f.emask | (1u << c),
                                     f.len + static_cast<std::int64_t>(ch.len)});
                }
            }
        }
        return true;
    }

    // bare cycle with pendants: both arcs between every vertex pair are simple
    bool run_cycle(const std::vector<std::uint32_t>& cycle_order) {
        const auto len = static_cast<std::int64_t>(cycle_order.size());
        if (static_cast<std::uint64_t>(len) * static_cast<std::uint64_t>(len) > 4 * budget) {
            budget_ok = false;
            return false;
        }
        for (std::int64_t i = 0; i < len; ++i)
            for (std::int64_t j = i + 1; j < len; ++j) {
                const std::int64_t arc = j - i;
                const std::int64_t d = std::max(arc, len - arc);
                best = std::max(best, depth[cycle_order[i]] + depth[cycle_order[j]] + d);
            }
        return true;
    }
};

// exhaustive simple-path DFS with a work budget; exact when it completes
bool brute_longest(const Local& L, std::uint64_t budget, std::int64_t& best) {
    std::vector<std::uint8_t> on_path(L.k, 0);
    std::uint64_t steps = 0;
    bool ok = true;
    auto dfs = [&](auto&& self, std::uint32_t u, std::int64_t len) -> void {
        if (!ok) return;
        if (++steps > budget) { ok = false; return; }
        best = std::max(best, len);
        on_path[u] = 1;
        for (std::uint32_t v : L.adj[u])
            if (!on_path[v]) self(self, v, len + 1);
        on_path[u] = 0;
    };
    for (std::uint32_t s = 0; s < L.k && ok; ++s) dfs(dfs, s, 0);
    return ok;
}

}  // namespace

LongestPathResult longest_path(const Subgraph& g, const LongestPathCaps& caps) {
    const Local L = Local::build(g);
    if (L.k == 0) throw invalid_parameter("longest_path: empty component");
    if (L.k == 1) return {0, true};

    const auto excess =
        static_cast<std::int64_t>(g.edges.size()) - static_cast<std::int64_t>(L.k);
    if (excess == -1) return {double_sweep(L), true};  // tree: exact

    const auto in_core = core_flags(L);
    std::vector<std::uint32_t> branch;
    std::uint32_t core_size = 0;
    for (std::uint32_t v = 0; v < L.k; ++v)
        if (in_core[v]) {
            ++core_size;
            std::uint32_t cd = 0;
            for (std::uint32_t u : L.adj[v]) cd += in_core[u];
            if (cd >= 3) branch.push_back(v);
        }

    LongestPathEngine eng(L, in_core, caps.search_budget);
    eng.compute_pendants();

    if (branch.empty()) {
        // single cycle (+ pendants)
        std::vector<std::uint32_t> order;
        std::uint32_t start = 0;
        while (!in_core[start]) ++start;
        std::uint32_t prev = start, cur = start;
        do {
            order.push_back(cur);
            std::uint32_t nxt = UINT32_MAX;
            for (std::uint32_t u : L.adj[cur])
                if (in_core[u] && u != prev) { nxt = u; break; }
            if (nxt == UINT32_MAX) nxt = prev;  // 2-cycle degeneracy cannot occur (simple graph)
            prev = cur;
            cur = nxt;
        } while (cur != start);
        if (eng.run_cycle(order))
            return {static_cast<std::uint32_t>(eng.best), true};
    } else {
        // chains between branch vertices, walked on the core; endpoints are
        // local vertex ids of branch vertices
        std::vector<ChainInfo> chains;
        {
            std::vector<std::uint8_t> is_branch(L.k, 0);
            for (std::uint32_t b : branch) is_branch[b] = 1;
            std::vector<std::uint8_t> interior_done(L.k, 0);
            for (std::uint32_t b : branch) {
                for (std::uint32_t first : L.adj[b]) {
                    if (!in_core[first]) continue;
                    if (is_branch[first]) {
                        if (b < first) chains.push_back({b, first, {}, 1});
                        continue;
                    }
                    if (interior_done[first]) continue;
                    ChainInfo ch;
                    ch.x = b;
                    std::uint32_t prev = b, cur = first;
                    while (!is_branch[cur]) {
                        interior_done[cur] = 1;
                        ch.interior.push_back(cur);
                        std::uint32_t nxt = UINT32_MAX;
                        for (std::uint32_t u : L.adj[cur])
                            if (in_core[u] && u != prev) { nxt = u; break; }
                        prev = cur;
                        cur = nxt;
                    }
                    ch.y = cur;
                    ch.len = static_cast<std::uint32_t>(ch.interior.size() + 1);
                    chains.push_back(std::move(ch));
                }
            }
        }
        if (chains.size() <= caps.kernel_edge_cap && branch.size() <= 30) {
            if (eng.run_kernel_route(branch, chains))
                return {static_cast<std::uint32_t>(eng.best), true};
        }
    }

    if (L.k <= caps.brute_size_cap) {
        std::int64_t best = 0;
        if (brute_longest(L, caps.search_budget, best))
            return {static_cast<std::uint32_t>(best), true};
    }

    // honest lower bound
    return {std::max(double_sweep(L), static_cast<std::uint32_t>(eng.best)), false};
}

ComponentStats component_stats(const ClusterDecomposition& dec, std::uint32_t rank,
                               const LongestPathCaps& caps) {
    if (rank >= dec.component_count())
        throw invalid_parameter("component_stats: rank out of range");
    const Subgraph g = component_subgraph(dec, rank);
    const Local L = Local::build(g);
    ComponentStats st;
    st.size = L.k;
    st.excess = static_cast<std::int64_t>(g.edges.size()) - static_cast<std::int64_t>(L.k);

    if (st.excess == -1) {
        st.diameter = double_sweep(L);
        st.diameter_exact = true;
    } else {
        // all-pairs BFS when affordable, else a double-sweep lower bound
        const std::uint64_t work =
            static_cast<std::uint64_t>(L.k) * (L.k + 2 * g.edges.size());
        if (work <= 1'500'000'000ULL) {
            std::uint32_t best = 0;
            for (std::uint32_t s = 0; s < L.k; ++s) {
                auto d = bfs_local(L, s);
                for (std::uint32_t v = 0; v < L.k; ++v)
                    if (d[v] != UINT32_MAX && d[v] > best) best = d[v];
            }
            st.diameter = best;
            st.diameter_exact = true;
        } else {
            st.diameter = double_sweep(L);
            st.diameter_exact = false;
        }
    }

    const auto lp = longest_path(g, caps);
    st.longest_path = lp.length;
    st.longest_path_exact = lp.exact;
    return st;
}

std::uint32_t Subtree::diameter() const {
    Subgraph g{vertices, edges};
    const Local L = Local::build(g);
    return double_sweep(L);
}

Subtree minimal_subtree(const SpanningTree& t, const std::vector<Vertex>& a) {
    if (a.empty()) throw invalid_parameter("minimal_subtree: A must be nonempty");
    const std::uint32_t n = t.n();
    std::vector<std::uint8_t> in_a(n, 0);
    for (Vertex v : a) {
        if (v >= n) throw invalid_parameter("minimal_subtree: vertex out of range");
        in_a[v] = 1;
    }
    auto adj = t.adjacency();
    std::vector<std::uint32_t> deg(n);
    std::vector<std::uint8_t> alive(n, 1);
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(adj[v].size());
        if (deg[v] <= 1 && !in_a[v]) stack.push_back(v);
    }
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        if (!alive[v] || in_a[v] || deg[v] > 1) continue;
        alive[v] = 0;
        for (Vertex u : adj[v])
            if (alive[u] && --deg[u] == 1 && !in_a[u]) stack.push_back(u);
    }
    Subtree out;
    for (Vertex v = 0; v < n; ++v)
        if (alive[v]) out.vertices.push_back(v);
    for (Vertex v = 0; v < n; ++v)
        if (alive[v] && v != t.root() && alive[t.parent(v)])
            out.edges.emplace_back(v, t.parent(v));
    return out;
}

std::uint64_t gap_violations(const SpanningTree& t, const Environment& env, double p, double q) {
    if (!(p < q)) throw invalid_parameter("gap_violations: need p < q");
    if (t.n() != env.n()) throw invalid_parameter("gap_violations: size mismatch");
    const auto dec = clusters_at(env, p);
    std::uint64_t violations = 0;
    for (std::uint32_t rank = 0; rank < dec.component_count(); ++rank) {
        if (dec.sizes[rank] < 2) continue;
        const auto sub = minimal_subtree(t, dec.vertices_of(rank));
        for (auto [u, v] : sub.edges)
            if (env.omega(u, v) > q) {
                ++violations;
                break;
            }
    }
    return violations;
}

}  // namespace rstre
