#pragma once

#include <cstdint>
#include <vector>

#include "rstre/clusters.hpp"
#include "rstre/environment.hpp"
#include "rstre/log_weight_graph.hpp"
#include "rstre/rng.hpp"

namespace rstre {

inline constexpr std::uint32_t kSpectrumSizeCap = 512;
inline constexpr std::uint32_t kBottleneckExactCap = 20;

struct Stationary {
    std::vector<double> pi;      // may underflow to 0 at extreme beta
    std::vector<double> log_pi;  // always finite for connected graphs
};

// pi(v) = w(v) / sum_u w(u), evaluated by per-vertex log-sum-exp.
Stationary stationary_distribution(const LogWeightGraph& g);

// Phi(S) = (1/2) sum_{e in E(S,S^c)} w(e) / sum_{e in E(S,V)} w(e), by shifted
// log-sum-exp. pre: S is a nonempty proper subset.
double bottleneck_of_set(const LogWeightGraph& g, const std::vector<Vertex>& s);

// min of Phi(S) over all S with 0 < pi(S) <= 1/2, exhaustively. pre: n <= 20.
double bottleneck_exact(const LogWeightGraph& g);

struct BottleneckBounds {
    double lower;  // gap/2 from the spectral sandwich
    double upper;  // min Phi over the candidate family
};

// Certified bracket: lower = gamma*/2 <= Phi <= upper = min over candidates
// (singletons, C_1(p) for a p-grid when g views an environment, Fiedler sweep
// cuts, and any caller-provided sets).
BottleneckBounds bottleneck_bounds(const LogWeightGraph& g,
                                   const std::vector<std::vector<Vertex>>& candidates = {});

struct ChainSpectrum {
    std::vector<double> pi;
    std::vector<double> log_pi;
    std::vector<double> eigenvalues;  // descending; all in [0,1] for the lazy chain
    std::vector<double> basis;        // row-major n x n eigenvectors of the symmetrized kernel
    double gap = 0.0;                 // 1 - second largest absolute eigenvalue

    std::uint32_t n() const { return static_cast<std::uint32_t>(pi.size()); }
    double basis_at(std::uint32_t v, std::uint32_t k) const {
        return basis[static_cast<std::size_t>(v) * pi.size() + k];
    }
};

// Full eigendecomposition of the symmetrized lazy kernel. pre: n <= 512.
ChainSpectrum chain_spectrum(const LogWeightGraph& g);

inline constexpr std::uint64_t kMixingInfinite = UINT64_MAX;

// Smallest t with max_{u,v} |q_t(u,v)/pi(v) - 1| <= 1/2, reconstructed from
// the spectrum (doubling + bisection; for PSD lazy kernels the max sits on
// the diagonal). Returns kMixingInfinite past the scan cap.
std::uint64_t mixing_time(const ChainSpectrum& spec);
std::uint64_t mixing_time(const LogWeightGraph& g);

// theta = sum_{t=0}^{tmix} (t+1) sup_v q_t(v,v).
double escaping_sum(const ChainSpectrum& spec);
double escaping_sum(const LogWeightGraph& g);

struct ConditionReport {
    double alpha = 0.0;       // the free exponent of the mixing condition
    double d_ratio = 0.0;     // pi_max / pi_min (inf when it overflows)
    double log_d = 0.0;
    std::uint64_t tmix = 0;   // kMixingInfinite when not reached / not computable
    bool tmix_exact = false;  // false when only the relaxation-time bound was usable
    double alpha_slack = 0.0; // log_n(n^{1/2} / tmix)
    double theta = 0.0;
    bool theta_exact = false;
    bool balanced = false;    // D <= 9
    bool mixing = false;      // tmix <= n^{1/2 - alpha}
    bool mixing_known = true; // false if neither route could decide
    bool escaping = false;    // theta <= 16
    bool pass = false;
};

// Reports the three conditions; never asserts the diameter conclusion.
ConditionReport check_conditions(const LogWeightGraph& g, double alpha);

struct WalkToGiantStats {
    std::uint64_t ran = 0;               // distinct vertices visited
    std::uint64_t clusters_visited = 0;  // distinct p-clusters entered
    std::uint64_t steps = 0;             // jump steps (lazy steps ~ 2x)
    bool hit = false;
};

// Jump chain on the weighted K_n from v0 until it hits C_1(p) or exhausts the
// budget (budget exhaustion returns hit=false with partial statistics).
WalkToGiantStats run_to_giant(const Environment& env, double p, double beta, Vertex v0,
                              Rng& rng, std::uint64_t budget);

}  // namespace rstre
