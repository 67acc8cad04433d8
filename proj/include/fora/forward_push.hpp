#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fora/graph.hpp"

namespace fora {

/// Reserves and residues of a local push from a source (or a source
/// distribution). Invariant: sum(reserve) + r_sum == initial_mass, up to
/// rounding.
struct PushState {
  std::vector<double> reserve;
  std::vector<double> residue;
  /// Running total of residue, maintained incrementally.
  double r_sum = 0.0;
  double initial_mass = 0.0;
  /// Nodes that have ever held residue, in first-touch order.
  std::vector<NodeId> touched;
  /// Number of push operations performed.
  std::uint64_t pushes = 0;
  /// Push cost in out-edges touched (a dangling push counts as one).
  std::uint64_t push_cost = 0;

  /// Nodes with positive residue in ascending id order.
  std::vector<NodeId> positive_residue_nodes() const;
};

/// Called after every individual push with the node just pushed.
using PushObserver = std::function<void(const PushState&, NodeId)>;

/// Local push from `source` until every non-dangling node has
/// residue/out_degree <= r_max and every dangling node has residue <= r_max.
/// A push on a dangling node moves its whole residue into its reserve.
PushState forward_push(const Graph& g, NodeId source, double alpha,
                       double r_max, const PushObserver& observer = {});

/// Same as forward_push with initial residue sigma(v) on each listed node.
/// `sigma` must be non-negative and sum to 1 within 1e-9.
PushState forward_push_from_distribution(
    const Graph& g, std::span<const std::pair<NodeId, double>> sigma,
    double alpha, double r_max, const PushObserver& observer = {});

/// Cost model for the push/walk balancing variant. Pushing continues while
/// the accumulated push cost is below the projected walk cost
/// omega * walk_cost, where omega = r_sum * (1 - alpha) * walk_density
/// (r_sum * walk_density before the first push).
struct PushBudget {
  /// Expected push-edge units per random walk.
  double walk_cost = 0.0;
  /// Walks needed per unit of residue mass.
  double walk_density = 0.0;
  /// Threshold schedule: starts at r_max_start and halves after each
  /// exhausted pass, never going below r_max_floor.
  double r_max_start = 1.0;
  double r_max_floor = 1e-12;

  /// Budget that never binds.
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();
};

PushState forward_push_budgeted(const Graph& g, NodeId source, double alpha,
                                const PushBudget& budget,
                                const PushObserver& observer = {});

}  // namespace fora
