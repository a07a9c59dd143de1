#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rstre/environment.hpp"
#include "rstre/errors.hpp"

namespace rstre {

struct EdgeW {
    Vertex u;
    Vertex v;
    double log_w;  // l_e = log of the conductance; never exponentiated here
};

// Weighted graph view in the log domain. Two backings share one interface:
//   * complete view over an Environment: l_{uv} = -beta * omega_{uv}, O(1),
//     nothing materialized (works at n = 10^5);
//   * explicit edge list for small arbitrary graphs (oracle, exact sampler,
//     walk statistics), with CSR adjacency.
class LogWeightGraph {
public:
    LogWeightGraph() = default;

    static LogWeightGraph complete_view(const Environment& env, double beta) {
        if (beta < 0) throw invalid_parameter("log_weight_view: beta must be >= 0");
        LogWeightGraph g;
        g.n_ = env.n();
        g.beta_ = beta;
        g.env_ = &env;
        return g;
    }

    static LogWeightGraph from_edges(std::uint32_t n, std::vector<EdgeW> edges, double beta = 0.0) {
        LogWeightGraph g;
        g.n_ = n;
        g.beta_ = beta;
        g.edges_ = std::move(edges);
        for (const auto& e : g.edges_) {
            if (e.u == e.v || e.u >= n || e.v >= n)
                throw invalid_parameter("LogWeightGraph: bad edge endpoints");
        }
        g.build_adjacency();
        return g;
    }

    // Materialized K_n with l_e = -beta * omega_e; for the capped dense modules.
    static LogWeightGraph from_environment(const Environment& env, double beta) {
        if (beta < 0) throw invalid_parameter("log_weight_view: beta must be >= 0");
        std::vector<EdgeW> edges;
        edges.reserve(env.edges());
        const std::uint32_t n = env.n();
        for (Vertex u = 0; u + 1 < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                edges.push_back({u, v, -beta * env.omega(u, v)});
        return from_edges(n, std::move(edges), beta);
    }

    std::uint32_t n() const { return n_; }
    double beta() const { return beta_; }
    bool is_complete_view() const { return env_ != nullptr; }
    const Environment* environment() const { return env_; }

    // Explicit edge list. For a complete view use materialize_edges().
    const std::vector<EdgeW>& edges() const {
        if (env_) throw internal_invariant_violation("edges(): complete view not materialized");
        return edges_;
    }

    std::vector<EdgeW> materialize_edges() const {
        if (!env_) return edges_;
        return from_environment(*env_, beta_).edges_;
    }

    double log_w(Vertex u, Vertex v) const {
        if (env_) return -beta_ * env_->omega(u, v);
        for (std::uint32_t i = adj_off_[u]; i < adj_off_[u + 1]; ++i)
            if (adj_v_[i] == v) return adj_w_[i];
        throw invalid_parameter("log_w: no such edge");
    }

    std::uint32_t degree(Vertex u) const {
        return env_ ? n_ - 1 : adj_off_[u + 1] - adj_off_[u];
    }

    // f(v, log_w) over the neighbors of u, in ascending v (complete view) or
    // edge-list order (explicit).
    template <class F>
    void for_neighbors(Vertex u, F&& f) const {
        if (env_) {
            for (Vertex v = 0; v < n_; ++v)
                if (v != u) f(v, -beta_ * env_->omega(u, v));
        } else {
            for (std::uint32_t i = adj_off_[u]; i < adj_off_[u + 1]; ++i) f(adj_v_[i], adj_w_[i]);
        }
    }

    bool connected() const {
        if (env_) return true;
        if (n_ == 0) return false;
        std::vector<Vertex> parent(n_);
        std::iota(parent.begin(), parent.end(), 0u);
        auto find = [&](Vertex x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::uint32_t comps = n_;
        for (const auto& e : edges_) {
            Vertex a = find(e.u), b = find(e.v);
            if (a != b) { parent[a] = b; --comps; }
        }
        return comps == 1;
    }

private:
    void build_adjacency() {
        adj_off_.assign(n_ + 1, 0);
        for (const auto& e : edges_) { ++adj_off_[e.u + 1]; ++adj_off_[e.v + 1]; }
        for (std::uint32_t i = 0; i < n_; ++i) adj_off_[i + 1] += adj_off_[i];
        adj_v_.resize(adj_off_[n_]);
        adj_w_.resize(adj_off_[n_]);
        std::vector<std::uint32_t> pos(adj_off_.begin(), adj_off_.end() - 1);
        for (const auto& e : edges_) {
            adj_v_[pos[e.u]] = e.v; adj_w_[pos[e.u]++] = e.log_w;
            adj_v_[pos[e.v]] = e.u; adj_w_[pos[e.v]++] = e.log_w;
        }
    }

    std::uint32_t n_ = 0;
    double beta_ = 0.0;
    const Environment* env_ = nullptr;
    std::vector<EdgeW> edges_;
    std::vector<std::uint32_t> adj_off_;
    std::vector<Vertex> adj_v_;
    std::vector<double> adj_w_;
};

// Spec name for the complete-graph construction.
inline LogWeightGraph log_weight_view(const Environment& env, double beta) {
    return LogWeightGraph::complete_view(env, beta);
}

}  // namespace rstre
