#pragma once

#include "fora/graph.hpp"
#include "fora/rng.hpp"

namespace fora {

/// Walk that stops at each step with probability alpha, otherwise moves to a
/// uniformly chosen out-neighbor. Stops immediately at a dangling node.
/// Returns the terminal node.
inline NodeId random_walk(const Graph& g, NodeId start, double alpha,
                          RngStream& rng) {
  NodeId current = start;
  for (;;) {
    const auto neighbors = g.out_neighbors(current);
    if (neighbors.empty() || rng.uniform() < alpha) return current;
    current = neighbors[rng.bounded(neighbors.size())];
  }
}

/// Walk conditioned on taking at least one step: moves to a uniform
/// out-neighbor of `start`, then continues as random_walk. A dangling start
/// is returned as is.
inline NodeId random_walk_skip_zero_hop(const Graph& g, NodeId start,
                                        double alpha, RngStream& rng) {
  const auto neighbors = g.out_neighbors(start);
  if (neighbors.empty()) return start;
  return random_walk(g, neighbors[rng.bounded(neighbors.size())], alpha, rng);
}

}  // namespace fora
