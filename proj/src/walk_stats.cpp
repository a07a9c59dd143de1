#include "rstre/walk_stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_set>

#include "rstre/errors.hpp"

namespace rstre {

namespace {

double log_sum_exp(const std::vector<double>& xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

void require_connected(const LogWeightGraph& g, const char* who) {
    if (!g.connected()) throw invalid_parameter(std::string(who) + ": graph must be connected");
}

}  // namespace

Stationary stationary_distribution(const LogWeightGraph& g) {
    require_connected(g, "stationary_distribution");
    const std::uint32_t n = g.n();
    Stationary out;
    out.log_pi.resize(n);
    std::vector<double> ls;
    for (Vertex u = 0; u < n; ++u) {
        ls.clear();
        g.for_neighbors(u, [&](Vertex, double l) { ls.push_back(l); });
        out.log_pi[u] = log_sum_exp(ls);
    }
    const double total = log_sum_exp(out.log_pi);
    out.pi.resize(n);
    for (Vertex v = 0; v < n; ++v) {
        out.log_pi[v] -= total;
        out.pi[v] = std::exp(out.log_pi[v]);
    }
    return out;
}

double bottleneck_of_set(const LogWeightGraph& g, const std::vector<Vertex>& s) {
    const std::uint32_t n = g.n();
    if (s.empty() || s.size() >= n)
        throw invalid_parameter("bottleneck_of_set: S must be a nonempty proper subset");
    std::vector<std::uint8_t> in_s(n, 0);
    for (Vertex v : s) {
        if (v >= n) throw invalid_parameter("bottleneck_of_set: vertex out of range");
        in_s[v] = 1;
    }
    // shift by the max incident log-weight; cross edges are a subset so the
    // shared shift is safe
    double shift = -std::numeric_limits<double>::infinity();
    double cross = 0.0, incident = 0.0;
    auto scan = [&](bool accumulate) {
        cross = incident = 0.0;
        for (Vertex u = 0; u < n; ++u) {
            if (!in_s[u]) continue;
            g.for_neighbors(u, [&](Vertex v, double l) {
                if (in_s[v] && v < u) return;  // count internal edges once
                if (!accumulate) {
                    shift = std::max(shift, l);
                    return;
                }
                const double w = std::exp(l - shift);
                incident += w;
                if (!in_s[v]) cross += w;
            });
        }
    };
    scan(false);
    scan(true);
    return 0.5 * cross / incident;
}

double bottleneck_exact(const LogWeightGraph& g) {
    const std::uint32_t n = g.n();
    if (n > kBottleneckExactCap)
        throw size_cap_error("bottleneck_exact: n exceeds cap of 20");
    require_connected(g, "bottleneck_exact");
    const auto st = stationary_distribution(g);

    // explicit edge list once; subsets via bitmask
    const auto edges = g.materialize_edges();
    double lmax = -std::numeric_limits<double>::infinity();
    for (const auto& e : edges) lmax = std::max(lmax, e.log_w);
    std::vector<double> w(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) w[i] = std::exp(edges[i].log_w - lmax);

    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        double pi_s = 0.0;
        for (std::uint32_t v = 0; v < n; ++v)
            if (mask & (1u << v)) pi_s += st.pi[v];
        if (pi_s > 0.5 + 1e-15) continue;
        double cross = 0.0, incident = 0.0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const bool au = mask & (1u << edges[i].u);
            const bool av = mask & (1u << edges[i].v);
            if (au || av) incident += w[i];
            if (au != av) cross += w[i];
        }
        if (incident > 0.0) best = std::min(best, 0.5 * cross / incident);
    }
    return best;
}

ChainSpectrum chain_spectrum(const LogWeightGraph& g) {
    const std::uint32_t n = g.n();
    if (n > kSpectrumSizeCap) throw size_cap_error("chain_spectrum: n exceeds cap of 512");
    require_connected(g, "chain_spectrum");

    ChainSpectrum spec;
    {
        auto st = stationary_distribution(g);
        spec.pi = std::move(st.pi);
        spec.log_pi = std::move(st.log_pi);
    }
    // un-normalized vertex weights: log w(v) = log pi(v) + total (shift-free
    // because only differences enter the symmetrized kernel)
    std::vector<double> log_wv(n);
    {
        std::vector<double> ls;
        for (Vertex u = 0; u < n; ++u) {
            ls.clear();
            g.for_neighbors(u, [&](Vertex, double l) { ls.push_back(l); });
            log_wv[u] = log_sum_exp(ls);
        }
    }
    // S(u,v) = (1/2) exp(l_uv - (log w(u) + log w(v))/2); S(u,u) = 1/2. Every
    // entry is in [0, 1/2] because w(u,v) <= min(w(u), w(v)).
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Vertex u = 0; u < n; ++u) {
        s(u, u) = 0.5;
        g.for_neighbors(u, [&](Vertex v, double l) {
            if (v < u) return;
            const double val = 0.5 * std::exp(l - 0.5 * (log_wv[u] + log_wv[v]));
            s(u, v) = val;
            s(v, u) = val;
        });
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success)
        throw internal_invariant_violation("chain_spectrum: eigensolver failed");

    // Eigen returns ascending; store descending
    spec.eigenvalues.resize(n);
    spec.basis.resize(static_cast<std::size_t>(n) * n);
    for (std::uint32_t k = 0; k < n; ++k) {
        const std::uint32_t src = n - 1 - k;
        double lambda = solver.eigenvalues()(src);
        if (lambda < 0.0 && lambda > -1e-9) lambda = 0.0;  // lazy kernel is PSD
        spec.eigenvalues[k] = lambda;
        for (std::uint32_t v = 0; v < n; ++v)
            spec.basis[static_cast<std::size_t>(v) * n + k] = solver.eigenvectors()(v, src);
    }
    double second = 0.0;
    for (std::uint32_t k = 1; k < n; ++k) second = std::max(second, std::abs(spec.eigenvalues[k]));
    spec.gap = 1.0 - second;
    return spec;
}

namespace {

constexpr std::uint64_t kMixingScanCap = std::uint64_t(1) << 40;

// deviation(t) = max_u sum_{k>=2} lambda_k^t psi_k(u)^2 with psi_k(u) =
// basis(u,k)/sqrt(pi(u)); on a PSD kernel the uniform distance peaks on the
// diagonal. psi^2 is carried in long double so beta up to ~2e4 * n stays
// representable.
struct DeviationScanner {
    std::uint32_t n;
    std::vector<long double> psi2;  // row-major u x k, k >= 1 (skipping the top eigenvector)
    std::vector<double> lambda;

    explicit DeviationScanner(const ChainSpectrum& spec) : n(spec.n()) {
        lambda.assign(spec.eigenvalues.begin() + 1, spec.eigenvalues.end());
        psi2.resize(static_cast<std::size_t>(n) * (n - 1));
        for (std::uint32_t u = 0; u < n; ++u) {
            const long double inv_pi = std::exp(-static_cast<long double>(spec.log_pi[u]));
            for (std::uint32_t k = 1; k < n; ++k) {
                const long double b = spec.basis_at(u, k);
                psi2[static_cast<std::size_t>(u) * (n - 1) + (k - 1)] = b * b * inv_pi;
            }
        }
    }

    long double deviation(std::uint64_t t) const {
        std::vector<long double> lt(n - 1);
        for (std::uint32_t k = 0; k + 1 < n; ++k)
            lt[k] = std::pow(static_cast<long double>(lambda[k]), static_cast<long double>(t));
        long double best = 0.0L;
        for (std::uint32_t u = 0; u < n; ++u) {
            long double acc = 0.0L;
            const long double* row = &psi2[static_cast<std::size_t>(u) * (n - 1)];
            for (std::uint32_t k = 0; k + 1 < n; ++k) acc += lt[k] * row[k];
            best = std::max(best, acc);
        }
        return best;
    }
};

}  // namespace

std::uint64_t mixing_time(const ChainSpectrum& spec) {
    if (spec.n() == 1) return 0;
    for (double lp : spec.log_pi)
        if (lp < -11000.0)
            throw numeric_range_error("mixing_time: pi underflows the deviation scan");
    DeviationScanner scan(spec);
    if (scan.deviation(0) <= 0.5L) return 0;
    std::uint64_t hi = 1;
    while (scan.deviation(hi) > 0.5L) {
        hi *= 2;
        if (hi > kMixingScanCap) return kMixingInfinite;
    }
    std::uint64_t lo = hi / 2;  // deviation(lo) > 1/2 >= deviation(hi)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (scan.deviation(mid) > 0.5L ? lo : hi) = mid;
    }
    return hi;
}

std::uint64_t mixing_time(const LogWeightGraph& g) { return mixing_time(chain_spectrum(g)); }

double escaping_sum(const ChainSpectrum& spec) {
    const std::uint32_t n = spec.n();
    const std::uint64_t tmix = mixing_time(spec);
    if (tmix == kMixingInfinite)
        throw numeric_range_error("escaping_sum: mixing time beyond the scan cap");
    if (tmix > 200000) throw size_cap_error("escaping_sum: mixing time too large to sum");
    // q_t(v,v) = sum_k lambda_k^t basis(v,k)^2: no pi division, plain doubles
    std::vector<double> b2(static_cast<std::size_t>(n) * n);
    for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t k = 0; k < n; ++k) {
            const double b = spec.basis_at(v, k);
            b2[static_cast<std::size_t>(v) * n + k] = b * b;
        }
    std::vector<double> lt(n, 1.0);
    double theta = 0.0;
    for (std::uint64_t t = 0; t <= tmix; ++t) {
        double sup = 0.0;
        for (std::uint32_t v = 0; v < n; ++v) {
            double acc = 0.0;
            const double* row = &b2[static_cast<std::size_t>(v) * n];
            for (std::uint32_t k = 0; k < n; ++k) acc += lt[k] * row[k];
            sup = std::max(sup, acc);
        }
        theta += static_cast<double>(t + 1) * sup;
        for (std::uint32_t k = 0; k < n; ++k) lt[k] *= spec.eigenvalues[k];
    }
    return theta;
}

double escaping_sum(const LogWeightGraph& g) { return escaping_sum(chain_spectrum(g)); }

BottleneckBounds bottleneck_bounds(const LogWeightGraph& g,
                                   const std::vector<std::vector<Vertex>>& candidates) {
    const auto spec = chain_spectrum(g);
    const std::uint32_t n = g.n();
    BottleneckBounds out{spec.gap / 2.0, std::numeric_limits<double>::infinity()};

    auto consider = [&](const std::vector<Vertex>& s) {
        if (s.empty() || s.size() >= n) return;
        double pi_s = 0.0;
        for (Vertex v : s) pi_s += spec.pi[v];
        if (pi_s > 0.5 + 1e-12) return;
        out.upper = std::min(out.upper, bottleneck_of_set(g, s));
    };

    for (Vertex v = 0; v < n; ++v) consider({v});
    for (const auto& s : candidates) consider(s);

    // Fiedler sweep: order by the second eigenvector of the symmetrized
    // kernel scaled back to the chain's coordinates
    if (n >= 3) {
        std::vector<Vertex> order(n);
        for (Vertex v = 0; v < n; ++v) order[v] = v;
        std::vector<double> fiedler(n);
        for (Vertex v = 0; v < n; ++v) fiedler[v] = spec.basis_at(v, 1);
        std::sort(order.begin(), order.end(),
                  [&](Vertex a, Vertex b) { return fiedler[a] < fiedler[b]; });
        std::vector<Vertex> prefix;
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            prefix.push_back(order[i]);
            consider(prefix);
        }
    }

    // C_1(p) for a p-grid when the weights come from an environment
    if (g.is_complete_view()) {
        const auto& env = *g.environment();
        for (double factor : {0.5, 1.0, 1.5, 2.0, 4.0}) {
            const double p = std::min(1.0, factor / n);
            const auto dec = clusters_at(env, p);
            if (dec.sizes.empty() || dec.sizes[0] < 2) continue;
            consider(dec.vertices_of(0));
        }
    }
    return out;
}

ConditionReport check_conditions(const LogWeightGraph& g, double alpha) {
    const std::uint32_t n = g.n();
    if (n > kSpectrumSizeCap) throw size_cap_error("check_conditions: n exceeds cap of 512");
    ConditionReport rep;
    rep.alpha = alpha;

    const auto spec = chain_spectrum(g);
    double lp_min = spec.log_pi[0], lp_max = spec.log_pi[0];
    for (double lp : spec.log_pi) {
        lp_min = std::min(lp_min, lp);
        lp_max = std::max(lp_max, lp);
    }
    rep.log_d = lp_max - lp_min;
    rep.d_ratio = rep.log_d < 700.0 ? std::exp(rep.log_d)
                                    : std::numeric_limits<double>::infinity();
    rep.balanced = rep.log_d <= std::log(9.0);

    const double threshold = std::pow(static_cast<double>(n), 0.5 - alpha);
    rep.tmix = kMixingInfinite;
    rep.tmix_exact = false;
    try {
        rep.tmix = mixing_time(spec);
        rep.tmix_exact = (rep.tmix != kMixingInfinite);
    } catch (const numeric_range_error&) {
        // pi underflows even long double: fall back to the relaxation-time
        // lower bound tmix >= (1/gamma* - 1) ln 2
        const double lb = (1.0 / std::max(spec.gap, 1e-300) - 1.0) * 0.6931471805599453;
        if (lb > threshold) {
            rep.mixing = false;
            rep.mixing_known = true;
        } else {
            rep.mixing_known = false;
        }
    }
    if (rep.tmix_exact) {
        rep.mixing = static_cast<double>(rep.tmix) <= threshold;
        rep.mixing_known = true;
        rep.alpha_slack =
            (0.5 * std::log(static_cast<double>(n)) - std::log(std::max<double>(1.0, rep.tmix))) /
            std::log(static_cast<double>(n));
    }

    rep.theta = std::numeric_limits<double>::quiet_NaN();
    rep.theta_exact = false;
    if (rep.tmix_exact && rep.tmix <= 200000) {
        try {
            rep.theta = escaping_sum(spec);
            rep.theta_exact = true;
            rep.escaping = rep.theta <= 16.0;
        } catch (const std::exception&) {
            rep.theta_exact = false;
        }
    }
    rep.pass = rep.balanced && rep.mixing_known && rep.mixing && rep.theta_exact && rep.escaping;
    return rep;
}

WalkToGiantStats run_to_giant(const Environment& env, double p, double beta, Vertex v0,
                              Rng& rng, std::uint64_t budget) {
    const std::uint32_t n = env.n();
    if (v0 >= n) throw invalid_parameter("run_to_giant: v0 out of range");
    if (beta < 0) throw invalid_parameter("run_to_giant: beta must be >= 0");
    const auto dec = clusters_at(env, p);
    if (dec.sizes.empty() || dec.sizes[0] == 0)
        throw invalid_parameter("run_to_giant: no giant component");

    WalkToGiantStats st;
    std::vector<std::uint8_t> seen_vertex(n, 0);
    std::vector<std::uint8_t> seen_cluster(dec.component_count(), 0);
    auto visit = [&](Vertex v) {
        if (!seen_vertex[v]) {
            seen_vertex[v] = 1;
            ++st.ran;
        }
        if (!seen_cluster[dec.component[v]]) {
            seen_cluster[dec.component[v]] = 1;
            ++st.clusters_visited;
        }
    };
    visit(v0);
    if (dec.component[v0] == 0) {
        st.hit = true;
        return st;
    }

    // per-visited-vertex cached alias tables over exp(l - max); transitions
    // with mass below double underflow never fire, which is immaterial here
    constexpr std::uint32_t kTableCacheCap = 4096;
    struct Table {
        std::vector<double> prob;
        std::vector<Vertex> alias;
    };
    std::vector<std::unique_ptr<Table>> tables(n);
    std::uint32_t tables_built = 0;
    std::vector<double> scratch(n);

    auto build_table = [&](Vertex u) {
        double lmax = -std::numeric_limits<double>::infinity();
        for (Vertex v = 0; v < n; ++v) {
            scratch[v] = (v == u) ? -std::numeric_limits<double>::infinity()
                                  : -beta * env.omega(u, v);
            lmax = std::max(lmax, scratch[v]);
        }
        double total = 0.0;
        for (Vertex v = 0; v < n; ++v) {
            scratch[v] = (v == u) ? 0.0 : std::exp(scratch[v] - lmax);
            total += scratch[v];
        }
        auto t = std::make_unique<Table>();
        t->prob.assign(n, 0.0);
        t->alias.assign(n, u);
        std::vector<Vertex> small, large;
        for (Vertex v = 0; v < n; ++v) {
            scratch[v] *= static_cast<double>(n) / total;
            (scratch[v] < 1.0 ? small : large).push_back(v);
        }
        while (!small.empty() && !large.empty()) {
            const Vertex s = small.back(); small.pop_back();
            const Vertex l = large.back(); large.pop_back();
            t->prob[s] = scratch[s];
            t->alias[s] = l;
            scratch[l] -= 1.0 - scratch[s];
            (scratch[l] < 1.0 ? small : large).push_back(l);
        }
        for (Vertex v : large) t->prob[v] = 1.0;
        for (Vertex v : small) t->prob[v] = 1.0;
        return t;
    };
    auto gumbel_step = [&](Vertex u) {
        double best = -std::numeric_limits<double>::infinity();
        Vertex pick = u;
        for (Vertex v = 0; v < n; ++v) {
            if (v == u) continue;
            const double key = -beta * env.omega(u, v) + rng.next_gumbel();
            if (key > best) { best = key; pick = v; }
        }
        return pick;
    };

    Vertex cur = v0;
    while (st.steps < budget) {
        Vertex next;
        if (tables[cur]) {
            const auto& t = *tables[cur];
            for (;;) {
                const auto i = static_cast<Vertex>(rng.next_below(n));
                const Vertex cand = rng.next_unit() < t.prob[i] ? i : t.alias[i];
                if (cand != cur || n == 1) { next = cand; break; }
                // zero-mass self entries can only be drawn through roundoff
            }
        } else if (tables_built < kTableCacheCap) {
            tables[cur] = build_table(cur);
            ++tables_built;
            continue;  // draw on the next loop iteration with the table in place
        } else {
            next = gumbel_step(cur);
        }
        ++st.steps;
        visit(next);
        cur = next;
        if (dec.component[cur] == 0) {
            st.hit = true;
            return st;
        }
    }
    return st;
}

}  // namespace rstre
