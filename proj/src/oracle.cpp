#include "rstre/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rstre/errors.hpp"

namespace rstre {

namespace {

std::vector<MultiEdge> as_multiedges(const LogWeightGraph& g) {
    std::vector<MultiEdge> out;
    if (g.is_complete_view()) {
        const auto& env = *g.environment();
        out.reserve(env.edges());
        for (Vertex u = 0; u + 1 < g.n(); ++u)
            for (Vertex v = u + 1; v < g.n(); ++v)
                out.push_back({u, v, -g.beta() * env.omega(u, v)});
    } else {
        out.reserve(g.edges().size());
        for (const auto& e : g.edges()) out.push_back({e.u, e.v, e.log_w});
    }
    return out;
}

void require_oracle_size(const LogWeightGraph& g) {
    if (g.n() > kOracleSizeCap)
        throw size_cap_error("oracle: n exceeds cap of " + std::to_string(kOracleSizeCap));
}

}  // namespace

LaplacianSystem::LaplacianSystem(std::uint32_t n_active, const std::vector<MultiEdge>& edges)
    : n_(n_active), lap_(static_cast<std::size_t>(n_active) * n_active) {
    for (const auto& e : edges) {
        const XFloat w = XFloat::exp_of_log(e.log_w);
        const std::size_t uu = static_cast<std::size_t>(e.u) * n_ + e.u;
        const std::size_t vv = static_cast<std::size_t>(e.v) * n_ + e.v;
        const std::size_t uv = static_cast<std::size_t>(e.u) * n_ + e.v;
        const std::size_t vu = static_cast<std::size_t>(e.v) * n_ + e.u;
        lap_[uu] += w;
        lap_[vv] += w;
        lap_[uv] -= w;
        lap_[vu] -= w;
    }
}

std::optional<double> LaplacianSystem::log_det_reduced(Vertex ground) const {
    const std::uint32_t m = n_ - 1;
    if (m == 0) return 0.0;
    // copy the minor without row/col `ground`
    std::vector<XFloat> a(static_cast<std::size_t>(m) * m);
    {
        std::uint32_t r = 0;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (i == ground) continue;
            std::uint32_t c = 0;
            for (std::uint32_t j = 0; j < n_; ++j) {
                if (j == ground) continue;
                a[static_cast<std::size_t>(r) * m + c] = lap_[static_cast<std::size_t>(i) * n_ + j];
                ++c;
            }
            ++r;
        }
    }
    double log_det = 0.0;
    std::vector<std::uint32_t> row(m);
    for (std::uint32_t i = 0; i < m; ++i) row[i] = i;
    bool negative = false;
    for (std::uint32_t k = 0; k < m; ++k) {
        // partial pivot on column k
        std::uint32_t best = k;
        for (std::uint32_t i = k + 1; i < m; ++i)
            if (XFloat::abs_less(a[static_cast<std::size_t>(row[best]) * m + k],
                                 a[static_cast<std::size_t>(row[i]) * m + k]))
                best = i;
        if (a[static_cast<std::size_t>(row[best]) * m + k].is_zero()) return std::nullopt;
        if (best != k) { std::swap(row[best], row[k]); negative = !negative; }
        const XFloat piv = a[static_cast<std::size_t>(row[k]) * m + k];
        if (piv.negative()) negative = !negative;
        log_det += piv.abs().log_abs();
        for (std::uint32_t i = k + 1; i < m; ++i) {
            XFloat& lead = a[static_cast<std::size_t>(row[i]) * m + k];
            if (lead.is_zero()) continue;
            const XFloat factor = lead / piv;
            lead = XFloat::zero();
            for (std::uint32_t j = k + 1; j < m; ++j) {
                const XFloat& src = a[static_cast<std::size_t>(row[k]) * m + j];
                if (!src.is_zero())
                    a[static_cast<std::size_t>(row[i]) * m + j] -= factor * src;
            }
        }
    }
    // Laplacian minors of connected graphs are positive; a negative sign here
    // can only come from roundoff on a near-singular system.
    if (negative) throw internal_invariant_violation("log_det_reduced: negative determinant");
    return log_det;
}

std::optional<XFloat> LaplacianSystem::resistance(Vertex a, Vertex b, bool* degraded) const {
    // Solve L' x = e_a on the minor grounded at b; then R = x[a].
    const std::uint32_t m = n_ - 1;
    std::vector<XFloat> mat(static_cast<std::size_t>(m) * m);
    std::vector<XFloat> rhs(m);
    std::vector<std::uint32_t> map(n_, UINT32_MAX);
    {
        std::uint32_t r = 0;
        for (std::uint32_t i = 0; i < n_; ++i)
            if (i != b) map[i] = r++;
    }
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (i == b) continue;
        for (std::uint32_t j = 0; j < n_; ++j) {
            if (j == b) continue;
            mat[static_cast<std::size_t>(map[i]) * m + map[j]] =
                lap_[static_cast<std::size_t>(i) * n_ + j];
        }
    }
    rhs[map[a]] = XFloat::one();

    bool flag = false;
    std::vector<std::uint32_t> row(m);
    for (std::uint32_t i = 0; i < m; ++i) row[i] = i;
    for (std::uint32_t k = 0; k < m; ++k) {
        std::uint32_t best = k;
        for (std::uint32_t i = k + 1; i < m; ++i)
            if (XFloat::abs_less(mat[static_cast<std::size_t>(row[best]) * m + k],
                                 mat[static_cast<std::size_t>(row[i]) * m + k]))
                best = i;
        const XFloat piv = mat[static_cast<std::size_t>(row[best]) * m + k];
        if (piv.is_zero()) return std::nullopt;
        if (best != k) std::swap(row[best], row[k]);
        for (std::uint32_t i = k + 1; i < m; ++i) {
            XFloat& lead = mat[static_cast<std::size_t>(row[i]) * m + k];
            if (lead.is_zero()) continue;
            const XFloat factor = lead / piv;
            lead = XFloat::zero();
            for (std::uint32_t j = k + 1; j < m; ++j) {
                const XFloat& src = mat[static_cast<std::size_t>(row[k]) * m + j];
                if (!src.is_zero())
                    mat[static_cast<std::size_t>(row[i]) * m + j] -= factor * src;
            }
            rhs[row[i]] -= factor * rhs[row[k]];
        }
    }
    // Back substitution. On an intact M-matrix factorization every term below
    // has the same sign, so cancellation (the solution landing far below the
    // largest accumulated term) or a non-positive resistance marks degraded
    // pivots.
    std::vector<XFloat> x(m);
    const std::uint32_t want = map[a];
    for (std::uint32_t kk = m; kk-- > 0;) {
        XFloat acc = rhs[row[kk]];
        XFloat max_term = acc.abs();
        for (std::uint32_t j = kk + 1; j < m; ++j) {
            const XFloat& c = mat[static_cast<std::size_t>(row[kk]) * m + j];
            if (c.is_zero()) continue;
            const XFloat term = c * x[j];
            if (XFloat::abs_less(max_term, term)) max_term = term.abs();
            acc -= term;
        }
        x[kk] = acc / mat[static_cast<std::size_t>(row[kk]) * m + kk];
        if (kk == want && !max_term.is_zero() &&
            (acc.is_zero() || acc.negative() || acc.abs().exp2 + 45 < max_term.exp2))
            flag = true;
    }
    if (degraded) *degraded = flag;
    return x[want];
}

LogPartition log_partition_function(const LogWeightGraph& g) {
    require_oracle_size(g);
    if (g.n() < 2) throw invalid_parameter("log_partition_function: n must be >= 2");
    LaplacianSystem sys(g.n(), as_multiedges(g));
    auto det = sys.log_det_reduced(0);
    if (!det) return {-std::numeric_limits<double>::infinity(), false};
    return {*det, true};
}

ResistanceReport effective_resistance(const LogWeightGraph& g, Vertex a, Vertex b) {
    require_oracle_size(g);
    if (a == b) throw invalid_parameter("effective_resistance: a and b must differ");
    if (a >= g.n() || b >= g.n()) throw invalid_parameter("effective_resistance: vertex range");
    LaplacianSystem sys(g.n(), as_multiedges(g));
    bool degraded = false;
    auto r = sys.resistance(a, b, &degraded);
    if (!r) throw invalid_parameter("effective_resistance: graph is disconnected");
    return {*r, degraded};
}

double edge_inclusion_prob(const LogWeightGraph& g, Vertex u, Vertex v) {
    const double lw = g.log_w(u, v);  // throws when the edge is absent
    auto rep = effective_resistance(g, u, v);
    const double p = (XFloat::exp_of_log(lw) * rep.r_eff).to_double();
    return std::clamp(p, 0.0, 1.0);
}

double tree_hamiltonian(const Environment& env, const SpanningTree& t) {
    if (t.n() != env.n()) throw invalid_parameter("tree_hamiltonian: size mismatch");
    t.require_valid();
    double h = 0.0;
    for (Vertex v = 0; v < t.n(); ++v)
        if (v != t.root()) h += env.omega(v, t.parent(v));
    return h;
}

double gibbs_log_prob(const LogWeightGraph& g, const SpanningTree& t) {
    if (t.n() != g.n()) throw invalid_parameter("gibbs_log_prob: size mismatch");
    t.require_valid();
    auto z = log_partition_function(g);
    if (!z.connected) throw invalid_parameter("gibbs_log_prob: graph is disconnected");
    double lw = 0.0;
    for (Vertex v = 0; v < t.n(); ++v)
        if (v != t.root()) lw += g.log_w(v, t.parent(v));
    return lw - z.log_z;
}

}  // namespace rstre
