#pragma once

#include <cstdint>
#include <vector>

#include "rstre/environment.hpp"
#include "rstre/log_weight_graph.hpp"
#include "rstre/rng.hpp"
#include "rstre/spanning_tree.hpp"

namespace rstre {

// Chronological cycle erasure: scan the walk, and whenever a vertex repeats,
// drop the loop it closes. First and last vertices are preserved.
std::vector<Vertex> loop_erase(const std::vector<Vertex>& path);

enum class Transition {
    kGumbel,  // argmax of l_uv + Gumbel noise; overflow-free at any beta
    kAlias,   // per-vertex cached alias tables over exp(l - max); fast on K_n
};

struct WilsonOptions {
    std::uint64_t step_budget = 0;  // 0 => default 1e4 * n * ln(n) jump steps
    Transition transition = Transition::kGumbel;
    bool validate = false;  // check SpanningTree invariants on every sample
};

// Weighted Wilson: loop-erased random walks of the (non-lazy) jump chain,
// attached in vertex order. Output is distributed as the weighted UST.
// Throws budget_exceeded (with steps + attached diagnostics) if the walk
// budget runs out, which happens when high beta traps the walk.
SpanningTree wilson_sample(const LogWeightGraph& g, Vertex root, Rng& rng,
                           const WilsonOptions& opts = {});

// Kruskal on omega with EdgeId tie-break; exact MST for any n. Uses a
// threshold-filtered scan (retry with a larger threshold until the kept
// subgraph is connected), so the full edge set is never stored.
SpanningTree mst_kruskal(const Environment& env);

struct SequentialOptions {
    std::uint32_t size_cap = 128;
    bool validate = false;
};

// Exact Gibbs sampler by deletion/contraction: visits edges in descending
// l_e, computes the Kirchhoff inclusion probability in the current contracted
// multigraph with the XFloat oracle, and flips a coin. Exact at any beta.
SpanningTree sequential_exact_sample(const LogWeightGraph& g, Rng& rng,
                                     const SequentialOptions& opts = {});

// log of the probability that sequential_exact_sample returns exactly `t`,
// obtained by chaining its per-edge coin probabilities. Independent of the
// rng; equals the Gibbs log-probability.
double sequential_tree_log_prob(const LogWeightGraph& g, const SpanningTree& t,
                                const SequentialOptions& opts = {});

struct TreeWeight {
    std::uint32_t edge_mask;  // bit i set <=> edge i of the graph's edge list is in the tree
    double log_weight;        // sum of l_e over tree edges
    double prob;              // normalized by log-sum-exp
};

struct TreeDistribution {
    std::vector<TreeWeight> trees;
    double log_z = 0.0;

    SpanningTree tree(std::uint32_t n, const std::vector<EdgeW>& edges, std::size_t idx) const;
};

// All spanning trees of a small explicit graph. Accepts up to 28 edges and at
// most 2^21 trees (cross-checked against the matrix-tree count); throws
// size_cap_error beyond that.
TreeDistribution enumerate_spanning_trees(const LogWeightGraph& g);

}  // namespace rstre
