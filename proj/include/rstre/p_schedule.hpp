#pragma once

#include <cstdint>
#include <vector>

#include "rstre/clusters.hpp"
#include "rstre/environment.hpp"

namespace rstre {

// The threshold ladder g_i = (5/4)^{i/2} g0, p_i = (1 + g_i eps)/n, with m the
// first index where g_m eps >= 1/log n.
struct PSchedule {
    std::uint32_t n = 0;
    double eps = 0.0;
    double g0 = 0.0;
    std::uint32_t m = 0;
    std::vector<double> g;  // indices 0..m+2 (two extra for the B(i) events)
    std::vector<double> p;

    double p_at(std::uint32_t i) const { return p.at(i); }
};

inline constexpr double kDefaultG0 = 16.0;

// pre: eps in (0,1), g0 >= 1, n >= 3.
PSchedule p_schedule(std::uint32_t n, double eps, double g0 = kDefaultG0);

struct WellBehavedFlags {
    bool a = false;           // size and longest-path bounds on C_1(p_i)
    bool b = false;           // longest path outside C_1(p_i) in G_{n,p_{i+2}}
    bool c = false;           // C_1(p_i) contained in C_1(p_{i+1})
    bool approximate = false; // a longest-path evaluation fell back to a lower bound

    bool all() const { return a && b && c; }
};

// Evaluates the three events for index i. The OpenEdgeSet overload lets huge-n
// Monte Carlo reuse one sparse sample; its p_cap must cover p_{i+2}.
WellBehavedFlags well_behaved_flags(const OpenEdgeSet& open, const PSchedule& sched,
                                    std::uint32_t i, const LongestPathCaps& caps = {});
WellBehavedFlags well_behaved_flags(const Environment& env, const PSchedule& sched,
                                    std::uint32_t i, const LongestPathCaps& caps = {});

}  // namespace rstre
