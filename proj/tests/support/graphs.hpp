#pragma once

// Small random graph families shared by the unit and acceptance tests.

#include <string>
#include <utility>
#include <vector>

#include "fora/generate.hpp"
#include "fora/graph.hpp"
#include "fora/rng.hpp"

namespace fora::testing {

/// Directed graph where each node keeps an out-edge with probability
/// `keep`, so some nodes end up dangling.
inline Graph sparse_with_dangling(std::size_t n, std::size_t degree,
                                  double keep, std::uint64_t seed) {
  RngStream rng = WalkRng(seed).aux_stream(77);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 0; j < degree; ++j) {
      if (rng.uniform() >= keep) continue;
      edges.emplace_back(u, rng.bounded(n));
    }
  }
  return Graph::from_edges(n, edges);
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// The i-th member of a mixed family: Erdos-Renyi, star, path, cycle and
/// sparse graphs with dangling nodes and self-loops, all with n <= 200.
inline NamedGraph mixed_graph(std::uint64_t i) {
  RngStream rng = WalkRng(i).aux_stream(91);
  const std::size_t n = 2 + rng.bounded(199);
  switch (i % 5) {
    case 0: {
      const std::size_t m = std::min<std::size_t>(n * (n - 1), 3 * n);
      return {"erdos-renyi", erdos_renyi(n, m, i)};
    }
    case 1:
      return {"star", star(n)};
    case 2:
      return {"path", path(n)};
    case 3:
      return {"cycle", cycle(n)};
    default:
      return {"dangling", sparse_with_dangling(n, 3, 0.6, i)};
  }
}

}  // namespace fora::testing
