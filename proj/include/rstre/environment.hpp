#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rstre/edge_id.hpp"
#include "rstre/rng.hpp"

namespace rstre {

// The disorder: one uniform [0,1] value per unordered edge of K_n.
//
// Generator stream (fixed, documented): edge e of environment (n, seed) has
//   omega_e = ((mix64(mix64(seed ^ 0x5253545245ULL) + (e+1) * kGolden)) >> 11) * 2^-53,
// i.e. a 53-bit-precision uniform from a counter-mode splitmix64 stream keyed
// by the seed. Values are computed on demand (procedural backend), so any n is
// addressable in O(1) without materializing n(n-1)/2 doubles; an Environment
// loaded from a file carries its values verbatim instead (stored backend).
// Regeneration with the same (n, seed) is bit-for-bit identical.
class Environment {
public:
    static constexpr std::uint64_t kStreamTag = 0x5253545245ULL;  // "RSTRE"

    Environment() = default;

    static Environment procedural(std::uint32_t n, std::uint64_t seed) {
        Environment env;
        env.n_ = n;
        env.seed_ = seed;
        env.base_ = mix64(seed ^ kStreamTag);
        return env;
    }

    static Environment stored(std::uint32_t n, std::uint64_t seed, std::vector<double> omega) {
        Environment env = procedural(n, seed);
        env.values_ = std::move(omega);
        return env;
    }

    std::uint32_t n() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t edges() const { return edge_count(n_); }
    bool is_stored() const { return !values_.empty(); }

    double omega(EdgeId e) const {
        if (!values_.empty()) return values_[e];
        return bits_to_unit(mix64(base_ + (e + 1) * kGolden));
    }

    double omega(Vertex u, Vertex v) const { return omega(canonical_edge_id(u, v, n_)); }

private:
    std::uint32_t n_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t base_ = 0;
    std::vector<double> values_;  // empty => procedural
};

// pre: n >= 2. Values are addressable immediately; nothing is materialized.
Environment gen_environment(std::uint32_t n, std::uint64_t seed);

// Text format v1: header `rstre-env v1 n=<n> seed=<seed>`, then one omega per
// line in canonical edge order, 17 significant digits. Round-trips bit-exactly.
void save_environment(const Environment& env, std::ostream& out);
void save_environment(const Environment& env, const std::string& path);
Environment load_environment(std::istream& in);
Environment load_environment(const std::string& path);

}  // namespace rstre
