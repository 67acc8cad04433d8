#include "fora/generate.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fora/errors.hpp"
#include "fora/rng.hpp"

namespace fora {
namespace {

using Edge = std::pair<NodeId, NodeId>;

void check_n(std::size_t n) {
  if (n < 1 || n > kMaxNodes) throw usage_error("generate: bad node count");
}

}  // namespace

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "erdos-renyi") return GraphKind::kErdosRenyi;
  if (name == "ba-preferential") return GraphKind::kBarabasiAlbert;
  if (name == "star") return GraphKind::kStar;
  if (name == "cycle") return GraphKind::kCycle;
  if (name == "path") return GraphKind::kPath;
  throw usage_error("unknown graph kind: " + std::string(name));
}

Graph erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed) {
  check_n(n);
  if (n > 1 && m > n * (n - 1)) throw usage_error("generate: too many edges");
  if (n == 1 && m > 0) throw usage_error("generate: too many edges");
  RngStream rng = WalkRng(seed).aux_stream(1);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    const auto u = static_cast<NodeId>(rng.bounded(n));
    const auto v = static_cast<NodeId>(rng.bounded(n));
    if (u == v) continue;
    if (!seen.insert(static_cast<std::uint64_t>(u) * n + v).second) continue;
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

Graph barabasi_albert(std::size_t n, std::size_t degree, std::uint64_t seed) {
  check_n(n);
  if (degree < 1) throw usage_error("generate: degree must be >= 1");
  RngStream rng = WalkRng(seed).aux_stream(2);
  const std::size_t core = std::min(n, degree + 1);
  std::vector<Edge> edges;
  // Each endpoint appears once per incident link.
  std::vector<NodeId> endpoints;
  auto link = [&](NodeId a, NodeId b) {
    edges.emplace_back(a, b);
    edges.emplace_back(b, a);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  for (NodeId a = 0; a < core; ++a) {
    for (NodeId b = a + 1; b < core; ++b) link(a, b);
  }
  std::vector<NodeId> picked;
  for (std::size_t v = core; v < n; ++v) {
    picked.clear();
    while (picked.size() < degree) {
      const NodeId t = endpoints[rng.bounded(endpoints.size())];
      if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
        picked.push_back(t);
      }
    }
    for (NodeId t : picked) link(static_cast<NodeId>(v), t);
  }
  return Graph::from_edges(n, edges);
}

Graph star(std::size_t n) {
  check_n(n);
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(n, edges);
}

Graph cycle(std::size_t n) {
  check_n(n);
  std::vector<Edge> edges;
  if (n > 1) {
    for (std::size_t v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  }
  return Graph::from_edges(n, edges);
}

Graph path(std::size_t n) {
  check_n(n);
  std::vector<Edge> edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

Graph generate_graph(GraphKind kind, std::size_t n, std::size_t size,
                     std::uint64_t seed) {
  switch (kind) {
    case GraphKind::kErdosRenyi:
      return erdos_renyi(n, size, seed);
    case GraphKind::kBarabasiAlbert:
      return barabasi_albert(n, size, seed);
    case GraphKind::kStar:
      return star(n);
    case GraphKind::kCycle:
      return cycle(n);
    case GraphKind::kPath:
      return path(n);
  }
  throw usage_error("unknown graph kind");
}

}  // namespace fora
