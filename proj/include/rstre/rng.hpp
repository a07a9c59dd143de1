#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace rstre {

// 64-bit avalanche mix (splitmix64 finalizer). This is the one hash used
// everywhere deterministic state is derived: environment edge values,
// replicate seeds, walk rng streams.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Turn 64 random bits into a uniform double in [0,1) with 53-bit precision.
inline constexpr double bits_to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential splitmix64 engine. Satisfies UniformRandomBitGenerator so it can
// be handed to std:: distributions, but the samplers use the explicit helpers
// below so results are identical on every platform.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0,1), 53-bit.
    double next_unit() { return bits_to_unit(next_u64()); }

    // Uniform in (0,1]; safe to take log of.
    double next_unit_pos() { return 1.0 - next_unit(); }

    // Standard Gumbel noise for max-trick sampling.
    double next_gumbel() { return -std::log(-std::log(next_unit_pos())); }

    // Uniform integer in [0, k). Rejection-free Lemire reduction.
    std::uint64_t next_below(std::uint64_t k) {
        // multiply-shift; bias < 2^-64 * k, irrelevant at our k
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * k) >> 64);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace rstre
