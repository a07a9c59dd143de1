#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "rstre/errors.hpp"
#include "rstre/samplers.hpp"

namespace rstre {

std::vector<Vertex> loop_erase(const std::vector<Vertex>& path) {
    if (path.empty()) throw invalid_parameter("loop_erase: empty path");
    Vertex maxv = *std::max_element(path.begin(), path.end());
    std::vector<std::uint32_t> pos(static_cast<std::size_t>(maxv) + 1, UINT32_MAX);
    std::vector<Vertex> out;
    out.reserve(path.size());
    for (Vertex x : path) {
        if (pos[x] != UINT32_MAX) {
            for (std::size_t i = pos[x] + 1; i < out.size(); ++i) pos[out[i]] = UINT32_MAX;
            out.resize(pos[x] + 1);
        } else {
            pos[x] = static_cast<std::uint32_t>(out.size());
            out.push_back(x);
        }
    }
    return out;
}

namespace {

struct AliasTable {
    std::vector<double> prob;
    std::vector<Vertex> alias;

    // Walker construction over weights (>= 0, not all zero).
    explicit AliasTable(const std::vector<double>& w) {
        const std::size_t k = w.size();
        prob.assign(k, 0.0);
        alias.assign(k, 0);
        double total = 0.0;
        for (double x : w) total += x;
        std::vector<double> scaled(k);
        for (std::size_t i = 0; i < k; ++i) scaled[i] = w[i] * static_cast<double>(k) / total;
        std::vector<std::uint32_t> small, large;
        for (std::size_t i = 0; i < k; ++i)
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        while (!small.empty() && !large.empty()) {
            std::uint32_t s = small.back(); small.pop_back();
            std::uint32_t l = large.back(); large.pop_back();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::uint32_t i : large) prob[i] = 1.0;
        for (std::uint32_t i : small) prob[i] = 1.0;
    }

    Vertex draw(Rng& rng) const {
        const auto i = static_cast<std::size_t>(rng.next_below(prob.size()));
        return rng.next_unit() < prob[i] ? static_cast<Vertex>(i) : alias[i];
    }
};

class StepSampler {
public:
    StepSampler(const LogWeightGraph& g, Transition mode) : g_(g), mode_(mode) {
        if (mode_ == Transition::kAlias) tables_.resize(g.n());
        if (!g.is_complete_view()) {
            // cache neighbor lists once; for_neighbors on the CSR is cheap but
            // the gumbel loop wants contiguous arrays
            nbr_.resize(g.n());
            lw_.resize(g.n());
            for (Vertex u = 0; u < g.n(); ++u)
                g.for_neighbors(u, [&](Vertex v, double l) {
                    nbr_[u].push_back(v);
                    lw_[u].push_back(l);
                });
        }
    }

    Vertex step(Vertex u, Rng& rng) {
        return mode_ == Transition::kAlias ? alias_step(u, rng) : gumbel_step(u, rng);
    }

private:
    Vertex gumbel_step(Vertex u, Rng& rng) const {
        double best = -std::numeric_limits<double>::infinity();
        Vertex pick = u;
        if (g_.is_complete_view()) {
            const auto& env = *g_.environment();
            const double beta = g_.beta();
            for (Vertex v = 0; v < g_.n(); ++v) {
                if (v == u) continue;
                const double key = -beta * env.omega(u, v) + rng.next_gumbel();
                if (key > best) { best = key; pick = v; }
            }
        } else {
            const auto& vs = nbr_[u];
            const auto& ls = lw_[u];
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const double key = ls[i] + rng.next_gumbel();
                if (key > best) { best = key; pick = vs[i]; }
            }
        }
        return pick;
    }

    Vertex alias_step(Vertex u, Rng& rng) {
        if (!tables_[u]) {
            std::vector<double> w;
            double lmax = -std::numeric_limits<double>::infinity();
            if (g_.is_complete_view()) {
                w.assign(g_.n(), 0.0);
                const auto& env = *g_.environment();
                for (Vertex v = 0; v < g_.n(); ++v)
                    if (v != u) {
                        w[v] = -g_.beta() * env.omega(u, v);
                        lmax = std::max(lmax, w[v]);
                    }
                for (Vertex v = 0; v < g_.n(); ++v)
                    w[v] = (v == u) ? 0.0 : std::exp(w[v] - lmax);
            } else {
                const auto& ls = lw_[u];
                for (double l : ls) lmax = std::max(lmax, l);
                w.resize(ls.size());
                for (std::size_t i = 0; i < ls.size(); ++i) w[i] = std::exp(ls[i] - lmax);
            }
            tables_[u] = std::make_unique<AliasTable>(w);
        }
        const Vertex idx = tables_[u]->draw(rng);
        return g_.is_complete_view() ? idx : nbr_[u][idx];
    }

    const LogWeightGraph& g_;
    Transition mode_;
    std::vector<std::unique_ptr<AliasTable>> tables_;
    std::vector<std::vector<Vertex>> nbr_;
    std::vector<std::vector<double>> lw_;
};

}  // namespace

SpanningTree wilson_sample(const LogWeightGraph& g, Vertex root, Rng& rng,
                           const WilsonOptions& opts) {
    const std::uint32_t n = g.n();
    if (n < 1 || root >= n) throw invalid_parameter("wilson_sample: bad root");
    if (!g.connected()) throw invalid_parameter("wilson_sample: graph must be connected");

    std::uint64_t budget = opts.step_budget;
    if (budget == 0)
        budget = static_cast<std::uint64_t>(1e4 * n * std::max(1.0, std::log(n)));

    StepSampler sampler(g, opts.transition);
    std::vector<std::uint8_t> in_tree(n, 0);
    std::vector<Vertex> next(n, 0);
    std::vector<Vertex> parent(n, n);
    in_tree[root] = 1;
    parent[root] = root;

    std::uint64_t steps = 0;
    std::uint32_t attached = 1;
    for (Vertex start = 0; start < n; ++start) {
        if (in_tree[start]) continue;
        Vertex u = start;
        while (!in_tree[u]) {
            if (steps++ >= budget)
                throw budget_exceeded("wilson_sample: step budget exceeded", steps, attached);
            const Vertex v = sampler.step(u, rng);
            next[u] = v;  // overwriting = chronological loop erasure
            u = v;
        }
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            parent[u] = next[u];
            ++attached;
            u = next[u];
        }
    }
    SpanningTree t(n, root, std::move(parent));
    if (opts.validate) t.require_valid();
    return t;
}

}  // namespace rstre
