#include "fora/exact.hpp"

#include <algorithm>
#include <cmath>

#include "fora/errors.hpp"
#include "fora/topk.hpp"

namespace fora {

PowerIteration::PowerIteration(const Graph& g) : g_(g) {
  const std::size_t n = g.num_nodes();
  in_offsets_.assign(n + 1, 0);
  for (NodeId t : g.targets()) ++in_offsets_[t + 1];
  for (std::size_t v = 0; v < n; ++v) in_offsets_[v + 1] += in_offsets_[v];
  in_sources_.resize(g.num_edges());
  std::vector<EdgeOffset> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t u = 0; u < n; ++u) {
    for (NodeId t : g.out_neighbors(static_cast<NodeId>(u))) {
      in_sources_[cursor[t]++] = static_cast<NodeId>(u);
    }
  }
}

ExactPpr PowerIteration::solve(NodeId source, double alpha, int iters,
                               double tol, Execution exec) const {
  if (!g_.valid_node(source)) throw usage_error("power iteration: bad source");
  const std::pair<NodeId, double> point{source, 1.0};
  return solve(std::span(&point, 1), alpha, iters, tol, exec);
}

ExactPpr PowerIteration::solve(std::span<const std::pair<NodeId, double>> sigma,
                               double alpha, int iters, double tol,
                               Execution exec) const {
  if (iters < 1) throw usage_error("power iteration: iters must be >= 1");
  const std::size_t n = g_.num_nodes();
  std::vector<double> restart(n, 0.0);
  for (const auto& [v, p] : sigma) {
    if (!g_.valid_node(v)) throw usage_error("power iteration: bad node");
    restart[v] += p;
  }

  ExactPpr result;
  std::vector<double> current = restart;
  std::vector<double> next(n, 0.0);
  const double carry = 1.0 - alpha;
  const auto signed_n = static_cast<std::int64_t>(n);

  for (int it = 0; it < iters; ++it) {
    if (exec == Execution::kSerial) {
      for (std::size_t v = 0; v < n; ++v) next[v] = alpha * restart[v];
      for (std::size_t u = 0; u < n; ++u) {
        const auto nbrs = g_.out_neighbors(static_cast<NodeId>(u));
        if (nbrs.empty()) {
          next[u] += carry * current[u];
          continue;
        }
        const double share =
            carry * current[u] / static_cast<double>(nbrs.size());
        for (NodeId t : nbrs) next[t] += share;
      }
    } else {
#pragma omp parallel for schedule(dynamic, 256)
      for (std::int64_t sv = 0; sv < signed_n; ++sv) {
        const auto v = static_cast<std::size_t>(sv);
        double incoming = 0.0;
        for (EdgeOffset e = in_offsets_[v]; e < in_offsets_[v + 1]; ++e) {
          const NodeId u = in_sources_[e];
          incoming += current[u] / static_cast<double>(g_.out_degree(u));
        }
        if (g_.is_dangling(static_cast<NodeId>(v))) incoming += current[v];
        next[v] = alpha * restart[v] + carry * incoming;
      }
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - current[v]);
    current.swap(next);
    result.iterations = it + 1;
    result.residual = change;
    if (change < tol) break;
  }
  result.scores = std::move(current);
  return result;
}

ExactPpr power_iteration(const Graph& g, NodeId source, double alpha,
                         int iters, double tol, Execution exec) {
  return PowerIteration(g).solve(source, alpha, iters, tol, exec);
}

ExactPpr power_iteration(const Graph& g,
                         std::span<const std::pair<NodeId, double>> sigma,
                         double alpha, int iters, double tol, Execution exec) {
  return PowerIteration(g).solve(sigma, alpha, iters, tol, exec);
}

double precision_at_k(std::span<const NodeId> returned, const ExactPpr& exact,
                      std::size_t k) {
  if (k == 0 || returned.size() != k) {
    throw usage_error("precision_at_k: need exactly k returned nodes");
  }
  const auto ideal = largest_k(exact.scores, k);
  const double kth = exact.scores[ideal.back()];
  std::vector<NodeId> unique(returned.begin(), returned.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::size_t hits = 0;
  for (NodeId v : unique) {
    if (exact.scores.at(v) >= kth - 1e-12) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at_k(std::span<const NodeId> returned, const ExactPpr& exact,
                 std::size_t k) {
  if (k == 0 || returned.size() != k) {
    throw usage_error("ndcg_at_k: need exactly k returned nodes");
  }
  const auto ideal = largest_k(exact.scores, k);
  double dcg = 0.0;
  double ideal_dcg = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double discount = std::log2(static_cast<double>(i) + 2.0);
    dcg += (std::exp2(exact.scores.at(returned[i])) - 1.0) / discount;
    ideal_dcg += (std::exp2(exact.scores[ideal[i]]) - 1.0) / discount;
  }
  if (ideal_dcg == 0.0) return dcg == 0.0 ? 1.0 : 0.0;
  return dcg / ideal_dcg;
}

ViolationReport audit_relative_error(std::span<const double> estimate,
                                     const ExactPpr& exact,
                                     const QueryParams& params) {
  if (estimate.size() != exact.scores.size()) {
    throw usage_error("audit: size mismatch");
  }
  ViolationReport report;
  for (std::size_t v = 0; v < estimate.size(); ++v) {
    const double truth = exact.scores[v];
    if (!(truth > params.delta())) continue;
    ++report.eligible;
    if (std::abs(truth - estimate[v]) > params.epsilon() * truth) {
      report.violating.push_back(static_cast<NodeId>(v));
    }
  }
  return report;
}

}  // namespace fora
