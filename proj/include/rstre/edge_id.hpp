#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "rstre/errors.hpp"

namespace rstre {

using Vertex = std::uint32_t;

// Canonical index of the unordered pair (u,v), u < v, among the edges of K_n.
// Ids enumerate pairs row by row: (0,1), (0,2), ..., (0,n-1), (1,2), ...
using EdgeId = std::uint64_t;

inline std::uint64_t edge_count(std::uint64_t n) { return n * (n - 1) / 2; }

// First id of row u, i.e. the number of pairs (a,b) with a < u.
inline EdgeId edge_row_offset(Vertex u, std::uint64_t n) {
    return static_cast<std::uint64_t>(u) * n - static_cast<std::uint64_t>(u) * (u + 1) / 2;
}

inline EdgeId canonical_edge_id(Vertex u, Vertex v, std::uint32_t n) {
    if (u == v || u >= n || v >= n)
        throw invalid_parameter("canonical_edge_id: need 0 <= u,v < n and u != v");
    if (u > v) std::swap(u, v);
    return edge_row_offset(u, n) + (v - u - 1);
}

// Inverse of canonical_edge_id. Closed-form row lookup with an integer fixup.
inline std::pair<Vertex, Vertex> decode_edge_id(EdgeId id, std::uint32_t n) {
    if (id >= edge_count(n)) throw invalid_parameter("decode_edge_id: id out of range");
    const double nd = static_cast<double>(n);
    double disc = (2.0 * nd - 1.0) * (2.0 * nd - 1.0) - 8.0 * static_cast<double>(id);
    auto u = static_cast<std::int64_t>((2.0 * nd - 1.0 - std::sqrt(disc)) / 2.0);
    if (u < 0) u = 0;
    while (u + 1 < n && edge_row_offset(static_cast<Vertex>(u + 1), n) <= id) ++u;
    while (u > 0 && edge_row_offset(static_cast<Vertex>(u), n) > id) --u;
    const auto uu = static_cast<Vertex>(u);
    const auto vv = static_cast<Vertex>(id - edge_row_offset(uu, n) + uu + 1);
    return {uu, vv};
}

}  // namespace rstre
