#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fora/fora.hpp"
#include "fora/graph.hpp"
#include "fora/params.hpp"
#include "fora/rng.hpp"
#include "fora/walk_index.hpp"

namespace fora {

struct TopKEntry {
  NodeId node;
  double estimate;

  friend bool operator==(const TopKEntry&, const TopKEntry&) = default;
};

struct TopKResult {
  /// Descending by estimate, ties broken by lower node id.
  std::vector<TopKEntry> entries;
  double delta_final = 0.0;
  int iterations = 0;
  /// False when the bound-refinement stop rule never fired.
  bool certified = false;
  std::uint64_t walks = 0;
  std::uint64_t pushes = 0;

  friend bool operator==(const TopKResult&, const TopKResult&) = default;
};

/// Per-node confidence interval for pi(s, v).
struct BoundState {
  std::vector<double> lb;
  std::vector<double> ub;

  static BoundState initial(std::size_t n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  }
};

/// Tightens `state` with one push+walk round: reserves, estimates, the
/// walk-covered residue r_sum and the walk budget omega, at failure
/// probability p_f_prime. Bounds only ever shrink.
void update_bounds(BoundState& state, std::span<const double> reserve,
                   std::span<const double> estimate, double r_sum,
                   double omega, double p_f_prime);

/// Produces one whole-graph estimate per top-k iteration.
class TopKEstimator {
 public:
  virtual ~TopKEstimator() = default;
  virtual ForaTrace run(const Graph& g, NodeId source,
                        const QueryParams& params, Execution exec) const = 0;
};

/// FORA with walks simulated on the fly; r_max from choose_r_max.
class OnlineForaEstimator final : public TopKEstimator {
 public:
  explicit OnlineForaEstimator(WalkRng rng) : rng_(rng) {}
  ForaTrace run(const Graph& g, NodeId source, const QueryParams& params,
                Execution exec) const override;

 private:
  WalkRng rng_;
};

/// FORA with walks read from an index. Throws format_error when the index
/// holds too few walks for the requested parameters.
class IndexedForaEstimator final : public TopKEstimator {
 public:
  explicit IndexedForaEstimator(const WalkIndex& index) : index_(index) {}
  ForaTrace run(const Graph& g, NodeId source, const QueryParams& params,
                Execution exec) const override;

 private:
  const WalkIndex& index_;
};

/// Plain Monte-Carlo walks from the source.
class MonteCarloEstimator final : public TopKEstimator {
 public:
  explicit MonteCarloEstimator(WalkRng rng) : rng_(rng) {}
  ForaTrace run(const Graph& g, NodeId source, const QueryParams& params,
                Execution exec) const override;

 private:
  WalkRng rng_;
};

enum class TopKAlgorithm { kBoundRefine, kFast };

/// Failure probability used by every iteration:
/// p_f / (n log2 n) for bound refinement, p_f / (n log2(n/k)) for the fast
/// variant, with the logarithm floored at 1.
double topk_failure_probability(std::size_t n, std::size_t k, double p_f,
                                TopKAlgorithm algorithm);

/// Parameters of the last (delta = 1/n) iteration. An index built for these
/// and choose_r_max of them serves every iteration.
QueryParams topk_final_params(const Graph& g, std::size_t k,
                              const QueryParams& params,
                              TopKAlgorithm algorithm);

/// Called after each bound-refinement iteration.
using BoundObserver = std::function<void(int iteration, double delta,
                                         const BoundState& bounds)>;

/// Halves delta from 1/k down to 1/n, keeping per-node bounds, and stops
/// once the k largest lower bounds are certified. Entries hold those k nodes
/// ordered by estimate.
TopKResult topk_bound_refine(const Graph& g, const TopKEstimator& estimator,
                             NodeId source, std::size_t k,
                             const QueryParams& params,
                             Execution exec = Execution::kParallel,
                             const BoundObserver& observer = {});

/// Halves delta from 1/k down to 1/n with half the relative error and stops
/// once the k-th largest estimate reaches (1 + e) delta.
TopKResult topk_fast(const Graph& g, const TopKEstimator& estimator,
                     NodeId source, std::size_t k, const QueryParams& params,
                     Execution exec = Execution::kParallel);

/// topk_fast over the Monte-Carlo estimator.
TopKResult mc_topk(const Graph& g, NodeId source, std::size_t k,
                   const QueryParams& params, WalkRng rng,
                   Execution exec = Execution::kParallel);

/// The k largest of `key`, descending, ties by lower id.
std::vector<NodeId> largest_k(std::span<const double> key, std::size_t k);

}  // namespace fora
