#include "fora/topk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fora/errors.hpp"
#include "fora/mc.hpp"

namespace fora {
namespace {

void check_k(const Graph& g, NodeId source, std::size_t k) {
  if (k < 1 || k > g.num_nodes()) throw usage_error("top-k: k out of range");
  if (!g.valid_node(source)) throw usage_error("top-k: bad source");
}

double floored_log2(double x) { return std::max(1.0, std::log2(x)); }

std::vector<TopKEntry> entries_by_estimate(std::vector<NodeId> nodes,
                                           std::span<const double> estimate) {
  std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
    return estimate[a] != estimate[b] ? estimate[a] > estimate[b] : a < b;
  });
  std::vector<TopKEntry> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back({v, estimate[v]});
  return out;
}

// Walks the schedule 1/k, 1/(2k), ... ending exactly at 1/n.
class DeltaSchedule {
 public:
  DeltaSchedule(std::size_t n, std::size_t k)
      : floor_(1.0 / static_cast<double>(n)),
        delta_(std::max(1.0 / static_cast<double>(k), floor_)) {}

  double delta() const { return delta_; }
  bool last() const { return delta_ <= floor_; }
  void advance() { delta_ = std::max(delta_ / 2.0, floor_); }

 private:
  double floor_;
  double delta_;
};

}  // namespace

std::vector<NodeId> largest_k(std::span<const double> key, std::size_t k) {
  std::vector<NodeId> ids(key.size());
  std::iota(ids.begin(), ids.end(), NodeId{0});
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                    ids.end(), [&](NodeId a, NodeId b) {
                      return key[a] != key[b] ? key[a] > key[b] : a < b;
                    });
  ids.resize(k);
  return ids;
}

void update_bounds(BoundState& state, std::span<const double> reserve,
                   std::span<const double> estimate, double r_sum,
                   double omega, double p_f_prime) {
  if (!(omega > 0.0)) throw invariant_error("update_bounds: omega must be > 0");
  const std::size_t n = estimate.size();
  if (reserve.size() != n || state.lb.size() != n || state.ub.size() != n) {
    throw invariant_error("update_bounds: size mismatch");
  }
  const double log_term = std::log(2.0 / p_f_prime);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < n; ++v) {
    const double est = estimate[v];
    double eps_j = 0.0;
    double lambda = 0.0;
    if (r_sum > 0.0) {
      const double anchor = std::max(reserve[v], state.lb[v]);
      eps_j = anchor > 0.0
                  ? std::sqrt(3.0 * r_sum * log_term / (omega * anchor))
                  : kInf;
      const double a = r_sum * log_term;
      lambda = ((2.0 / 3.0) * a +
                std::sqrt((4.0 / 9.0) * a * a +
                          8.0 * r_sum * omega * log_term * state.ub[v])) /
               (2.0 * omega);
    }
    double ub = std::min({1.0, est + lambda, state.ub[v]});
    if (eps_j < 1.0) ub = std::min(ub, est / (1.0 - eps_j));
    double lb = std::max({0.0, est - lambda, state.lb[v]});
    if (eps_j < kInf) lb = std::max(lb, est / (1.0 + eps_j));
    // Disjoint rounds (possible only when a bound failed) keep the latest
    // interval non-empty.
    if (lb > ub) lb = ub;
    state.lb[v] = lb;
    state.ub[v] = ub;
  }
}

ForaTrace OnlineForaEstimator::run(const Graph& g, NodeId source,
                                   const QueryParams& params,
                                   Execution exec) const {
  const OnlineWalks walks(g, params.alpha(), rng_, false);
  return whole_graph_trace(g, source, params, choose_r_max(g, params), walks,
                           exec);
}

ForaTrace IndexedForaEstimator::run(const Graph& g, NodeId source,
                                    const QueryParams& params,
                                    Execution exec) const {
  const double r_max = choose_r_max(g, params);
  if (!index_covers(index_, g, params, r_max, false)) {
    throw format_error("index too small for this top-k query");
  }
  const IndexedWalks walks(g, index_);
  return whole_graph_trace(g, source, params, r_max, walks, exec);
}

ForaTrace MonteCarloEstimator::run(const Graph& g, NodeId source,
                                   const QueryParams& params,
                                   Execution exec) const {
  const OnlineWalks walks(g, params.alpha(), rng_, false);
  return mc_trace(g, source, params, walks, exec);
}

double topk_failure_probability(std::size_t n, std::size_t k, double p_f,
                                TopKAlgorithm algorithm) {
  const auto nd = static_cast<double>(n);
  const double log_factor =
      algorithm == TopKAlgorithm::kBoundRefine
          ? floored_log2(nd)
          : floored_log2(nd / static_cast<double>(k));
  return p_f / (nd * log_factor);
}

QueryParams topk_final_params(const Graph& g, std::size_t k,
                              const QueryParams& params,
                              TopKAlgorithm algorithm) {
  if (k < 1 || k > g.num_nodes()) throw usage_error("top-k: k out of range");
  const std::size_t n = g.num_nodes();
  const double eps = algorithm == TopKAlgorithm::kFast ? params.epsilon() / 2.0
                                                       : params.epsilon();
  return QueryParams(params.alpha(), eps, 1.0 / static_cast<double>(n),
                     topk_failure_probability(n, k, params.p_f(), algorithm));
}

TopKResult topk_bound_refine(const Graph& g, const TopKEstimator& estimator,
                             NodeId source, std::size_t k,
                             const QueryParams& params, Execution exec,
                             const BoundObserver& observer) {
  check_k(g, source, k);
  const std::size_t n = g.num_nodes();
  const double eps = params.epsilon();
  const double p_f_prime = topk_failure_probability(
      n, k, params.p_f(), TopKAlgorithm::kBoundRefine);
  BoundState bounds = BoundState::initial(n);
  TopKResult result;
  for (DeltaSchedule schedule(n, k);; schedule.advance()) {
    const double delta = schedule.delta();
    const QueryParams round(params.alpha(), eps, delta, p_f_prime);
    const ForaTrace trace = estimator.run(g, source, round, exec);
    ++result.iterations;
    result.walks += trace.estimate.walks_issued;
    result.pushes += trace.estimate.pushes;
    const auto& est = trace.estimate.scores;
    if (trace.omega > 0.0) {
      update_bounds(bounds, trace.reserve, est, trace.r_sum, trace.omega,
                    p_f_prime);
    } else {
      // Everything was settled by pushes: the estimate is exact.
      update_bounds(bounds, trace.reserve, est, 0.0, 1.0, p_f_prime);
    }
    if (observer) observer(result.iterations, delta, bounds);

    std::vector<NodeId> candidates = largest_k(bounds.lb, k);
    const double lb_k = bounds.lb[candidates.back()];
    bool certified =
        lb_k >= delta &&
        std::all_of(candidates.begin(), candidates.end(), [&](NodeId v) {
          return bounds.ub[v] < (1.0 + eps) * bounds.lb[v];
        });
    if (certified) {
      std::vector<char> chosen(n, 0);
      for (NodeId v : candidates) chosen[v] = 1;
      for (std::size_t u = 0; u < n && certified; ++u) {
        if (chosen[u] || !(bounds.ub[u] > (1.0 + eps) * lb_k)) continue;
        if (bounds.ub[u] < (1.0 + eps) * bounds.lb[u] / (1.0 - eps)) {
          certified = false;
        }
      }
    }
    if (certified || schedule.last()) {
      result.entries = entries_by_estimate(std::move(candidates), est);
      result.delta_final = delta;
      result.certified = certified;
      return result;
    }
  }
}

TopKResult topk_fast(const Graph& g, const TopKEstimator& estimator,
                     NodeId source, std::size_t k, const QueryParams& params,
                     Execution exec) {
  check_k(g, source, k);
  const std::size_t n = g.num_nodes();
  const double eps = params.epsilon();
  const double p_f_prime =
      topk_failure_probability(n, k, params.p_f(), TopKAlgorithm::kFast);
  TopKResult result;
  for (DeltaSchedule schedule(n, k);; schedule.advance()) {
    const double delta = schedule.delta();
    const QueryParams round(params.alpha(), eps / 2.0, delta, p_f_prime);
    const ForaTrace trace = estimator.run(g, source, round, exec);
    ++result.iterations;
    result.walks += trace.estimate.walks_issued;
    result.pushes += trace.estimate.pushes;
    const auto& est = trace.estimate.scores;
    std::vector<NodeId> top = largest_k(est, k);
    const bool reached = est[top.back()] >= (1.0 + eps) * delta;
    if (reached || schedule.last()) {
      result.entries = entries_by_estimate(std::move(top), est);
      result.delta_final = delta;
      result.certified = reached;
      return result;
    }
  }
}

TopKResult mc_topk(const Graph& g, NodeId source, std::size_t k,
                   const QueryParams& params, WalkRng rng, Execution exec) {
  return topk_fast(g, MonteCarloEstimator(rng), source, k, params, exec);
}

}  // namespace fora
