#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fora/forward_push.hpp"
#include "fora/graph.hpp"
#include "fora/params.hpp"
#include "fora/rng.hpp"

namespace fora {

/// Kernel execution mode. The serial path is the reference implementation;
/// both produce bit-identical results.
enum class Execution { kSerial, kParallel };

/// Estimated PPR for one source or source distribution.
struct PprEstimate {
  std::vector<double> scores;
  std::uint64_t walks_issued = 0;
  /// Push cost in out-edge units.
  std::uint64_t pushes = 0;
};

/// Estimate plus the push by-products the top-k bounds need.
struct ForaTrace {
  PprEstimate estimate;
  std::vector<double> reserve;
  /// Residue mass covered by walks.
  double r_sum = 0.0;
  /// Real-valued walk budget r_sum * walk_density.
  double omega = 0.0;
};

/// Residue mass on one node that is compensated by random walks.
struct ResidueMass {
  NodeId node;
  double mass;
};

/// Supplies walk terminals. fill(v, first, out) writes the terminals of walks
/// first, first+1, ... issued from v.
class WalkSource {
 public:
  virtual ~WalkSource() = default;
  virtual void fill(NodeId v, std::uint64_t first,
                    std::span<NodeId> out) const = 0;
};

/// Simulates walks on the fly using keyed streams (seed, v, walk index).
class OnlineWalks final : public WalkSource {
 public:
  OnlineWalks(const Graph& g, double alpha, WalkRng rng, bool skip_zero_hop)
      : g_(g), alpha_(alpha), rng_(rng), skip_zero_hop_(skip_zero_hop) {}

  void fill(NodeId v, std::uint64_t first,
            std::span<NodeId> out) const override;

 private:
  const Graph& g_;
  double alpha_;
  WalkRng rng_;
  bool skip_zero_hop_;
};

/// ceil(mass * walk_density), tolerant to rounding at exact integers and at
/// least 1 for positive mass.
std::uint64_t walks_for_mass(double mass, double walk_density);

/// Issues walks_for_mass(mass_i, walk_density) walks per entry and adds
/// hits * mass_i / walks_i to each terminal it reaches. Entries are processed in
/// the given order. Returns the number of walks.
std::uint64_t run_walk_phase(std::span<const ResidueMass> masses,
                             double walk_density, const WalkSource& walks,
                             std::span<double> scores,
                             Execution exec = Execution::kParallel);

/// Push threshold minimizing push plus walk cost. Uses
/// (e / sqrt(m)) * sqrt(delta / ((2e/3 + 2) ln(2/p_f))) when m * r_max <= 1,
/// otherwise e^2 delta / ((2e/3 + 2) ln(2/p_f)).
double choose_r_max(const Graph& g, const QueryParams& params);

/// Push with a fixed r_max, then compensate residues with walks
/// (or read them from `walks`).
ForaTrace whole_graph_trace(const Graph& g, NodeId source,
                            const QueryParams& params, double r_max,
                            const WalkSource& walks,
                            Execution exec = Execution::kParallel);

PprEstimate whole_graph_basic(const Graph& g, NodeId source,
                              const QueryParams& params, double r_max,
                              WalkRng rng,
                              Execution exec = Execution::kParallel);

/// Fixed r_max with zero-hop pruning: alpha * r(v) goes straight to the
/// estimate and the remaining (1 - alpha) * r(v) is covered by walks that
/// take at least one step. `walks` must skip the zero hop.
ForaTrace whole_graph_zero_hop_trace(const Graph& g, NodeId source,
                                     const QueryParams& params, double r_max,
                                     const WalkSource& walks,
                                     Execution exec = Execution::kParallel);

PprEstimate whole_graph_zero_hop(const Graph& g, NodeId source,
                                 const QueryParams& params, double r_max,
                                 WalkRng rng,
                                 Execution exec = Execution::kParallel);

/// Lowest threshold of the balanced push schedule.
inline constexpr double kBalancedRMaxFloor = 1e-12;

/// Push until its cost matches the projected walk cost, then the zero-hop
/// walk phase.
PprEstimate whole_graph_balanced(const Graph& g, NodeId source,
                                 const QueryParams& params, WalkRng rng,
                                 Execution exec = Execution::kParallel);

/// PPR with respect to a source distribution.
PprEstimate ppr_from_distribution(
    const Graph& g, std::span<const std::pair<NodeId, double>> sigma,
    const QueryParams& params, double r_max, WalkRng rng,
    Execution exec = Execution::kParallel);

/// PageRank as PPR from the uniform distribution, r_max from choose_r_max.
PprEstimate global_pagerank(const Graph& g, const QueryParams& params,
                            WalkRng rng,
                            Execution exec = Execution::kParallel);

}  // namespace fora
