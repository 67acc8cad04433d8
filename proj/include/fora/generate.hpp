#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "fora/graph.hpp"

namespace fora {

enum class GraphKind { kErdosRenyi, kBarabasiAlbert, kStar, kCycle, kPath };

/// Parses "erdos-renyi", "ba-preferential", "star", "cycle" or "path".
GraphKind parse_graph_kind(std::string_view name);

/// Directed G(n, m): m distinct edges without self-loops, uniform.
Graph erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed);

/// Preferential attachment: a clique on the first degree+1 nodes, then each
/// new node links to `degree` distinct earlier nodes chosen proportionally to
/// their degree. Every link is emitted in both directions.
Graph barabasi_albert(std::size_t n, std::size_t degree, std::uint64_t seed);

/// 0 -> 1, 0 -> 2, ..., 0 -> n-1. Leaves are dangling.
Graph star(std::size_t n);

/// 0 -> 1 -> ... -> n-1 -> 0.
Graph cycle(std::size_t n);

/// 0 -> 1 -> ... -> n-1. The last node is dangling.
Graph path(std::size_t n);

/// `size` is the edge count for Erdos-Renyi and the per-node degree for
/// preferential attachment; other kinds ignore it.
Graph generate_graph(GraphKind kind, std::size_t n, std::size_t size,
                     std::uint64_t seed);

}  // namespace fora
