#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fora/fora.hpp"
#include "fora/graph.hpp"
#include "fora/params.hpp"

namespace fora {

/// Parameters an index was built for.
struct IndexMeta {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double p_f = 0.0;
  double r_max = 0.0;
  std::uint64_t seed = 0;
  bool zero_hop = false;

  friend bool operator==(const IndexMeta&, const IndexMeta&) = default;
};

/// Precomputed walk terminals: for each node v, the terminals of walks
/// 0 .. omega_max(v)-1 issued from v, in generation order.
struct WalkIndex {
  IndexMeta meta;
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> destinations;

  std::span<const NodeId> slice(NodeId v) const {
    return std::span<const NodeId>(destinations)
        .subspan(offsets[v], offsets[v + 1] - offsets[v]);
  }
  std::uint64_t total() const { return destinations.size(); }

  friend bool operator==(const WalkIndex&, const WalkIndex&) = default;
};

/// Most walks a query with threshold r_max can request from v:
/// ceil(out_degree(v) * r_max * walk_density), with the pre-ceiling value
/// scaled by (1 - alpha) under zero-hop pruning.
std::uint64_t omega_max(const Graph& g, NodeId v, const QueryParams& params,
                        double r_max, bool zero_hop = false);

WalkIndex build_index(const Graph& g, const QueryParams& params, double r_max,
                      std::uint64_t seed, bool zero_hop,
                      Execution exec = Execution::kParallel);

/// Walk terminals read from an index slice prefix. Walks from dangling nodes
/// are not stored; they terminate at the node itself. Requesting more walks
/// than a slice holds throws invariant_error.
class IndexedWalks final : public WalkSource {
 public:
  IndexedWalks(const Graph& g, const WalkIndex& index)
      : g_(g), index_(index) {}

  void fill(NodeId v, std::uint64_t first,
            std::span<NodeId> out) const override;

 private:
  const Graph& g_;
  const WalkIndex& index_;
};

/// Whole-graph query answered from the index. The index meta must match the
/// graph and params; the query runs with the index's r_max and zero-hop mode
/// and equals the online query seeded with the index seed, bit for bit.
PprEstimate query_with_index(const Graph& g, const WalkIndex& index,
                             NodeId source, const QueryParams& params,
                             Execution exec = Execution::kParallel);

/// True when a walk-compensated run with (params, r_max) never needs more
/// walks per node than the index stores. Checks n, m, alpha and zero-hop.
bool index_covers(const WalkIndex& index, const Graph& g,
                  const QueryParams& params, double r_max, bool zero_hop);

/// Size bound min{n + sqrt(m)/(e sqrt(delta)) sqrt((2e/3+2) ln(2/p_f)), m}
/// plus n for per-node ceilings.
double index_size_bound(const Graph& g, const QueryParams& params);

std::string serialize_index(const WalkIndex& index);
WalkIndex deserialize_index(std::string_view bytes);

void save_index(const WalkIndex& index, const std::filesystem::path& path);
WalkIndex load_index(const std::filesystem::path& path);

}  // namespace fora
