#include "rstre/p_schedule.hpp"

#include <algorithm>
#include <cmath>

#include "rstre/errors.hpp"

namespace rstre {

PSchedule p_schedule(std::uint32_t n, double eps, double g0) {
    if (n < 3) throw invalid_parameter("p_schedule: n must be >= 3");
    if (!(eps > 0.0 && eps < 1.0)) throw invalid_parameter("p_schedule: eps must be in (0,1)");
    if (g0 < 1.0) throw invalid_parameter("p_schedule: g0 must be >= 1");
    PSchedule s;
    s.n = n;
    s.eps = eps;
    s.g0 = g0;
    const double target = 1.0 / std::log(static_cast<double>(n));
    std::uint32_t m = 0;
    while (g0 * std::pow(1.25, m / 2.0) * eps < target) {
        ++m;
        if (m > 100000) throw invalid_parameter("p_schedule: m did not stabilize");
    }
    s.m = m;
    s.g.resize(m + 3);
    s.p.resize(m + 3);
    for (std::uint32_t i = 0; i < m + 3; ++i) {
        s.g[i] = g0 * std::pow(1.25, i / 2.0);
        s.p[i] = std::min(1.0, (1.0 + s.g[i] * eps) / n);
    }
    return s;
}

WellBehavedFlags well_behaved_flags(const OpenEdgeSet& open, const PSchedule& sched,
                                    std::uint32_t i, const LongestPathCaps& caps) {
    if (i > sched.m) throw invalid_parameter("well_behaved_flags: index out of range");
    if (open.p_cap + 1e-18 < sched.p_at(i + 2))
        throw invalid_parameter("well_behaved_flags: open edge set does not cover p_{i+2}");
    const std::uint32_t n = open.n;
    const double gi_eps = sched.g[i] * sched.eps;
    const double n13 = std::cbrt(static_cast<double>(n));

    WellBehavedFlags flags;
    const auto dec_i = clusters_from(open, sched.p_at(i));
    const auto dec_i1 = clusters_from(open, sched.p_at(i + 1));

    // A(i): |C_1(p_i)| >= (3/2) g_i eps n and l(C_1(p_i)) <= (g_i eps n^{1/3})^4 n^{1/3}
    {
        const double size_thr = 1.5 * gi_eps * n;
        const double lp_thr = std::pow(gi_eps * n13, 4.0) * n13;
        bool ok = static_cast<double>(dec_i.sizes.empty() ? 0 : dec_i.sizes[0]) >= size_thr;
        if (ok) {
            const auto lp = longest_path(component_subgraph(dec_i, 0), caps);
            flags.approximate |= !lp.exact;
            ok = static_cast<double>(lp.length) <= lp_thr;
        }
        flags.a = ok;
    }

    // B(i): l(G_{n,p_{i+2}} \ C_1(p_i)) <= n^{1/3} / sqrt(g_i eps n^{1/3}),
    // taken per component of the complement subgraph
    {
        const double thr = n13 / std::sqrt(gi_eps * n13);
        // complement = p_{i+2}-open edges avoiding C_1(p_i) vertices
        OpenEdgeSet rest;
        rest.n = n;
        rest.p_cap = sched.p_at(i + 2);
        for (const auto& e : open.edges)
            if (e.omega <= sched.p_at(i + 2) && dec_i.component[e.u] != 0 &&
                dec_i.component[e.v] != 0)
                rest.edges.push_back(e);
        const auto dec_rest = clusters_from(rest, rest.p_cap);
        bool ok = true;
        for (std::uint32_t r = 0; ok && r < dec_rest.component_count(); ++r) {
            if (dec_rest.sizes[r] < 2) break;  // ranks are size-sorted
            if (static_cast<double>(dec_rest.sizes[r]) - 1.0 <= thr &&
                dec_rest.edge_counts[r] < dec_rest.sizes[r])
                continue;  // a tree this small cannot exceed the cap
            const auto lp = longest_path(component_subgraph(dec_rest, r), caps);
            flags.approximate |= !lp.exact;
            ok = static_cast<double>(lp.length) <= thr;
        }
        // isolated C_1(p_i) vertices contribute empty complements only
        flags.b = ok;
    }

    // C(i): C_1(p_i) subset of C_1(p_{i+1})
    {
        bool ok = true;
        if (!dec_i.sizes.empty() && dec_i.sizes[0] > 0) {
            for (Vertex v = 0; ok && v < n; ++v)
                if (dec_i.component[v] == 0 && dec_i1.component[v] != 0) ok = false;
        }
        flags.c = ok;
    }
    return flags;
}

WellBehavedFlags well_behaved_flags(const Environment& env, const PSchedule& sched,
                                    std::uint32_t i, const LongestPathCaps& caps) {
    if (i > sched.m) throw invalid_parameter("well_behaved_flags: index out of range");
    return well_behaved_flags(collect_open_edges(env, sched.p_at(i + 2)), sched, i, caps);
}

}  // namespace rstre
