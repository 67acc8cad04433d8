#include "fora/graph.hpp"

#include <cassert>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "fora/errors.hpp"

namespace fora {

Graph::Graph(std::vector<EdgeOffset> offsets, std::vector<NodeId> targets)
    : offsets_(std::move(offsets)), targets_(std::move(targets)) {
  if (offsets_.empty() || offsets_.front() != 0 ||
      offsets_.back() != targets_.size()) {
    throw format_error("graph: offsets must start at 0 and end at m");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] < offsets_[i - 1]) {
      throw format_error("graph: offsets must be non-decreasing");
    }
  }
  const std::size_t n = num_nodes();
  for (NodeId t : targets_) {
    if (t >= n) throw format_error("graph: target id out of range");
  }
}

Graph Graph::from_edges(std::size_t n,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<EdgeOffset> offsets(n + 1, 0);
  for (const auto& [src, dst] : edges) {
    if (src >= n || dst >= n) {
      throw format_error("graph: edge endpoint out of range");
    }
    ++offsets[src + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];

  // Stable counting sort by source.
  std::vector<NodeId> targets(edges.size());
  std::vector<EdgeOffset> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [src, dst] : edges) targets[cursor[src]++] = dst;
  return Graph(std::move(offsets), std::move(targets));
}

std::span<const NodeId> Graph::out_neighbors(NodeId v) const noexcept {
  assert(v < num_nodes());
  return std::span<const NodeId>(targets_).subspan(
      offsets_[v], offsets_[v + 1] - offsets_[v]);
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Parses the next whitespace-delimited token as a node id.
bool next_id(std::string_view& rest, std::uint64_t& out) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  rest.remove_prefix(i);
  if (rest.empty()) return false;
  const char* first = rest.data();
  const char* last = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || (ptr != last && !is_space(*ptr))) return false;
  rest.remove_prefix(static_cast<std::size_t>(ptr - first));
  return true;
}

}  // namespace

Graph parse_edge_list(std::istream& in, bool undirected) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::size_t lead = 0;
    while (lead < rest.size() && is_space(rest[lead])) ++lead;
    rest.remove_prefix(lead);
    if (rest.empty() || rest.front() == '#' || rest.front() == '%') continue;

    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    if (!next_id(rest, src) || !next_id(rest, dst)) {
      throw format_error("edge list: line " + std::to_string(line_no) +
                         ": expected two non-negative integer ids");
    }
    while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
    if (!rest.empty()) {
      throw format_error("edge list: line " + std::to_string(line_no) +
                         ": unexpected trailing token");
    }
    constexpr std::uint64_t kMaxId = kMaxNodes - 1;
    if (src > kMaxId || dst > kMaxId) {
      throw format_error("edge list: line " + std::to_string(line_no) +
                         ": node id too large");
    }
    max_id = std::max({max_id, src, dst});
    edges.emplace_back(static_cast<NodeId>(src), static_cast<NodeId>(dst));
    if (undirected) {
      edges.emplace_back(static_cast<NodeId>(dst), static_cast<NodeId>(src));
    }
  }
  if (in.bad()) throw io_error("edge list: read failure");
  if (edges.empty()) throw format_error("edge list: no edges");
  return Graph::from_edges(static_cast<std::size_t>(max_id) + 1, edges);
}

Graph load_edge_list(const std::filesystem::path& path, bool undirected) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open graph file " + path.string());
  return parse_edge_list(in, undirected);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto n = static_cast<NodeId>(g.num_nodes());
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.out_neighbors(v)) out << v << ' ' << u << '\n';
  }
}

}  // namespace fora
