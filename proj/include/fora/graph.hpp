#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace fora {

using NodeId = std::uint32_t;
using EdgeOffset = std::uint64_t;

/// Largest supported node count; ids run up to kMaxNodes - 1.
inline constexpr std::size_t kMaxNodes = std::numeric_limits<NodeId>::max();

/// Immutable directed graph in compressed adjacency form. Only out-edges are
/// stored. Self-loops and parallel edges are kept as given; nodes without
/// out-edges (dangling nodes) are allowed.
class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Takes ownership of a CSR layout. Throws a format error when the layout
  /// violates the offsets/targets invariants.
  Graph(std::vector<EdgeOffset> offsets, std::vector<NodeId> targets);

  /// Builds a graph on `n` nodes from (src, dst) pairs. Edges are grouped by
  /// source; the relative order of a node's out-edges follows the input.
  static Graph from_edges(std::size_t n,
                          std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size(); }

  std::size_t out_degree(NodeId v) const noexcept {
    return static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
  }
  bool is_dangling(NodeId v) const noexcept { return out_degree(v) == 0; }

  /// Contiguous out-neighbors of `v`. `v` must be in [0, n).
  std::span<const NodeId> out_neighbors(NodeId v) const noexcept;

  std::span<const EdgeOffset> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> targets() const noexcept { return targets_; }

  bool valid_node(std::uint64_t v) const noexcept { return v < num_nodes(); }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<EdgeOffset> offsets_;
  std::vector<NodeId> targets_;
};

/// Parses "src dst" lines. Lines starting with '#' or '%' and blank lines are
/// skipped. n = max id + 1. With `undirected`, every edge is added in both
/// directions. Throws format_error (with the line number) on malformed input
/// and on input with no edges.
Graph parse_edge_list(std::istream& in, bool undirected);

/// File wrapper around parse_edge_list; throws io_error when unreadable.
Graph load_edge_list(const std::filesystem::path& path, bool undirected);

/// Writes one "src dst" line per edge in CSR order.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace fora
