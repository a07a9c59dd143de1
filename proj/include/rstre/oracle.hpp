#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rstre/environment.hpp"
#include "rstre/log_weight_graph.hpp"
#include "rstre/spanning_tree.hpp"
#include "rstre/xfloat.hpp"

namespace rstre {

inline constexpr std::uint32_t kOracleSizeCap = 256;

struct ResistanceReport {
    XFloat r_eff;
    bool condition_flag = false;  // raised when elimination pivots degrade
};

struct LogPartition {
    double log_z = 0.0;     // natural log of the spanning-tree sum
    bool connected = true;  // false => log_z reported as -infinity
};

// Matrix-tree determinant of the reduced Laplacian, eliminated in XFloat with
// partial pivoting. Disconnected graphs yield a tagged -inf, never a throw.
LogPartition log_partition_function(const LogWeightGraph& g);

// R(a<->b) via an XFloat Laplacian solve. pre: a != b, g connected.
ResistanceReport effective_resistance(const LogWeightGraph& g, Vertex a, Vertex b);

// Kirchhoff: P(e in T) = w(e) * R_eff(u,v), leaving the log/XFloat domain only
// for the final product. Result clamped into [0,1].
double edge_inclusion_prob(const LogWeightGraph& g, Vertex u, Vertex v);

// H(T, omega) = sum of omega over the tree edges.
double tree_hamiltonian(const Environment& env, const SpanningTree& t);

// log P(T) = sum_{e in T} l_e - log Z. Throws invalid_parameter when an edge
// of t is absent from g; for a disconnected g propagates the -inf tag as a
// throw (a tree for a disconnected graph cannot exist).
double gibbs_log_prob(const LogWeightGraph& g, const SpanningTree& t);

// --- multigraph backend shared with the sequential sampler ---

struct MultiEdge {
    Vertex u;
    Vertex v;
    double log_w;
};

// Weighted Laplacian ops over an explicit multiedge list on vertices
// 0..n_active-1 (parallel edges accumulate; self-loops must not be passed).
class LaplacianSystem {
public:
    LaplacianSystem(std::uint32_t n_active, const std::vector<MultiEdge>& edges);

    // log det of the Laplacian minor with `ground` removed; nullopt when the
    // matrix is singular (graph disconnected).
    std::optional<double> log_det_reduced(Vertex ground) const;

    // Effective resistance between a and b (a != b). Requires connectivity;
    // returns nullopt when singular.
    std::optional<XFloat> resistance(Vertex a, Vertex b, bool* degraded = nullptr) const;

private:
    std::uint32_t n_;
    std::vector<XFloat> lap_;  // row-major n x n
};

}  // namespace rstre
