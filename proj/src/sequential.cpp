#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rstre/errors.hpp"
#include "rstre/oracle.hpp"
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
    void unite(Vertex a, Vertex b) {
        a = find(a);
        b = find(b);
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

struct StepProbs {
    double p;      // inclusion probability, clamped to [0,1]
    double log_p;  // accurate even when p is tiny
    double log_q;  // accurate even when q = 1-p is tiny
};

// Inclusion probability of edge `cur` in the contracted multigraph formed by
// the still-unprocessed edges. `need_logs` additionally produces accurate
// log p / log(1-p) via determinant ratios when one side is near 0.
class SequentialWalk {
public:
    SequentialWalk(const LogWeightGraph& g, const SequentialOptions& opts)
        : n_(g.n()), edges_(g.materialize_edges()), dsu_(g.n()) {
        if (n_ < 2) throw invalid_parameter("sequential sampler: n must be >= 2");
        if (n_ > opts.size_cap)
            throw size_cap_error("sequential sampler: n exceeds the configured cap");
        if (!g.connected()) throw invalid_parameter("sequential sampler: graph must be connected");
        order_.resize(edges_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (edges_[a].log_w != edges_[b].log_w) return edges_[a].log_w > edges_[b].log_w;
            return a < b;  // descending strength, ties by edge index
        });
        remaining_ = order_;
    }

    // Runs the deletion/contraction chain. decide(step_probs, edge_index) must
    // return true to contract and false to delete.
    template <class Decide>
    SpanningTree run(bool need_logs, Decide&& decide) {
        std::vector<std::pair<Vertex, Vertex>> tree;
        tree.reserve(n_ - 1);
        for (std::size_t t = 0; t < order_.size(); ++t) {
            const std::size_t k = order_[t];
            const auto& e = edges_[k];
            const Vertex a = dsu_.find(e.u), b = dsu_.find(e.v);
            if (a == b) continue;  // self-loop after contraction: never in the tree
            const StepProbs sp = step_probs(t, k, need_logs);
            if (decide(sp, k)) {
                dsu_.unite(e.u, e.v);
                tree.emplace_back(e.u, e.v);
                if (tree.size() == n_ - 1) break;
            }
        }
        if (tree.size() != n_ - 1)
            throw internal_invariant_violation(
                "sequential sampler: deletions disconnected the graph");
        return SpanningTree::from_edges(n_, tree);
    }

    const std::vector<EdgeW>& edges() const { return edges_; }

private:
    StepProbs step_probs(std::size_t t, std::size_t cur, bool need_logs) {
        // collect the contracted multigraph over the unprocessed suffix
        std::vector<Vertex> label(n_, UINT32_MAX);
        std::uint32_t classes = 0;
        std::vector<MultiEdge> medges;
        medges.reserve(remaining_.size());
        std::size_t cur_medge = SIZE_MAX;
        std::size_t w = 0;
        for (std::size_t i = 0; i < remaining_.size(); ++i) {
            const std::size_t k = remaining_[i];
            // drop edges that precede the cursor in processing order (cheap
            // lazy deletion: remaining_ mirrors order_, so anything at or
            // before position t has been processed except `cur` itself)
            if (k != cur && pos_lookup(k) < t) continue;
            const auto& e = edges_[k];
            const Vertex a = dsu_.find(e.u), b = dsu_.find(e.v);
            if (a == b) continue;  // self-loop: drop permanently
            remaining_[w++] = k;
            Vertex& la = label[a];
            Vertex& lb = label[b];
            if (la == UINT32_MAX) la = classes++;
            if (lb == UINT32_MAX) lb = classes++;
            if (k == cur) cur_medge = medges.size();
            medges.push_back({la, lb, e.log_w});
        }
        remaining_.resize(w);

        const auto& e = edges_[cur];
        const Vertex ca = label[dsu_.find(e.u)], cb = label[dsu_.find(e.v)];
        LaplacianSystem sys(classes, medges);
        auto r = sys.resistance(ca, cb);
        if (!r)
            throw internal_invariant_violation("sequential sampler: contracted graph disconnected");
        const XFloat w_e = XFloat::exp_of_log(e.log_w);
        const XFloat px = w_e * (*r);
        StepProbs sp;
        sp.p = std::clamp(px.to_double(), 0.0, 1.0);
        sp.log_p = std::min(0.0, px.log_abs());
        sp.log_q = sp.p < 0.999 ? std::log1p(-sp.p) : 0.0;
        if (need_logs && sp.p >= 0.999) {
            // q = Z(G - e) / Z(G) stays accurate when p is within an ulp of 1
            std::vector<MultiEdge> without;
            without.reserve(medges.size());
            for (std::size_t i = 0; i < medges.size(); ++i)
                if (i != cur_medge) without.push_back(medges[i]);
            auto z_without = LaplacianSystem(classes, without).log_det_reduced(0);
            auto z_full = sys.log_det_reduced(0);
            if (!z_full)
                throw internal_invariant_violation("sequential sampler: Z singular");
            if (!z_without) {
                sp.log_q = -std::numeric_limits<double>::infinity();  // bridge
                sp.log_p = 0.0;
                sp.p = 1.0;
            } else {
                sp.log_q = *z_without - *z_full;
                sp.log_p = std::log1p(-std::exp(sp.log_q));
            }
        }
        return sp;
    }

    std::size_t pos_lookup(std::size_t k) {
        if (pos_.empty()) {
            pos_.resize(order_.size());
            for (std::size_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = i;
        }
        return pos_[k];
    }

    std::uint32_t n_;
    std::vector<EdgeW> edges_;
    Dsu dsu_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> remaining_;
    std::vector<std::size_t> pos_;
};

}  // namespace

SpanningTree sequential_exact_sample(const LogWeightGraph& g, Rng& rng,
                                     const SequentialOptions& opts) {
    SequentialWalk walk(g, opts);
    auto tree = walk.run(false, [&](const StepProbs& sp, std::size_t) {
        // a true bridge computes to 1 up to roundoff; treat the last ulps as forced
        if (sp.p >= 1.0 - 1e-12) return true;
        return rng.next_unit() < sp.p;
    });
    if (opts.validate) tree.require_valid();
    return tree;
}

double sequential_tree_log_prob(const LogWeightGraph& g, const SpanningTree& t,
                                const SequentialOptions& opts) {
    if (t.n() != g.n()) throw invalid_parameter("sequential_tree_log_prob: size mismatch");
    t.require_valid();
    SequentialWalk walk(g, opts);
    const auto& edges = walk.edges();
    std::vector<bool> in_tree(edges.size(), false);
    {
        auto want = t.edge_ids();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const EdgeId id = canonical_edge_id(edges[i].u, edges[i].v, t.n());
            if (std::binary_search(want.begin(), want.end(), id)) in_tree[i] = true;
        }
    }
    double log_prob = 0.0;
    walk.run(true, [&](const StepProbs& sp, std::size_t k) {
        log_prob += in_tree[k] ? sp.log_p : sp.log_q;
        return in_tree[k];
    });
    return log_prob;
}

}  // namespace rstre
