#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fora/fora.hpp"
#include "fora/graph.hpp"
#include "fora/params.hpp"

namespace fora {

/// Ground-truth PPR from power iteration.
struct ExactPpr {
  std::vector<double> scores;
  int iterations = 0;
  /// L1 change of the last iteration.
  double residual = 0.0;
};

/// Power iteration for pi = alpha * sigma + (1 - alpha) * pi P, where a
/// dangling node keeps its own mass (walks stop there). Runs at most `iters`
/// iterations, stopping early once the L1 change drops below `tol`.
///
/// The parallel path pulls along in-edges and needs the transpose, which
/// PowerIteration caches; the serial path pushes along out-edges.
class PowerIteration {
 public:
  explicit PowerIteration(const Graph& g);

  ExactPpr solve(std::span<const std::pair<NodeId, double>> sigma,
                 double alpha, int iters, double tol,
                 Execution exec = Execution::kParallel) const;

  ExactPpr solve(NodeId source, double alpha, int iters, double tol,
                 Execution exec = Execution::kParallel) const;

 private:
  const Graph& g_;
  std::vector<EdgeOffset> in_offsets_;
  std::vector<NodeId> in_sources_;
};

ExactPpr power_iteration(const Graph& g, NodeId source, double alpha,
                         int iters, double tol,
                         Execution exec = Execution::kParallel);

ExactPpr power_iteration(const Graph& g,
                         std::span<const std::pair<NodeId, double>> sigma,
                         double alpha, int iters, double tol,
                         Execution exec = Execution::kParallel);

/// Fraction of `returned` inside the true top-k. Nodes whose exact score ties
/// the k-th largest (within 1e-12) all count as top-k.
double precision_at_k(std::span<const NodeId> returned, const ExactPpr& exact,
                      std::size_t k);

/// sum_i (2^pi(v_i) - 1)/log2(i+1) over the returned order, normalized by
/// the same sum over the ideal order. 1 when both sums are zero.
double ndcg_at_k(std::span<const NodeId> returned, const ExactPpr& exact,
                 std::size_t k);

struct ViolationReport {
  /// Nodes with exact score above delta.
  std::size_t eligible = 0;
  std::vector<NodeId> violating;

  std::size_t count() const { return violating.size(); }
};

/// Nodes with exact score > delta whose estimate misses by more than
/// epsilon * exact.
ViolationReport audit_relative_error(std::span<const double> estimate,
                                     const ExactPpr& exact,
                                     const QueryParams& params);

}  // namespace fora
