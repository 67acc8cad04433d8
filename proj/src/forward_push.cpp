#include "fora/forward_push.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "fora/errors.hpp"

namespace fora {

std::vector<NodeId> PushState::positive_residue_nodes() const {
  std::vector<NodeId> nodes;
  for (NodeId v : touched) {
    if (residue[v] > 0.0) nodes.push_back(v);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

namespace {

class Pusher {
 public:
  Pusher(const Graph& g, double alpha, const PushObserver& observer)
      : g_(g), alpha_(alpha), observer_(observer),
        in_queue_(g.num_nodes(), 0), seen_(g.num_nodes(), 0) {
    state_.reserve.assign(g.num_nodes(), 0.0);
    state_.residue.assign(g.num_nodes(), 0.0);
  }

  void seed(std::span<const std::pair<NodeId, double>> sigma) {
    for (const auto& [v, mass] : sigma) {
      add_residue(v, mass);
      state_.r_sum += mass;
    }
    state_.initial_mass = state_.r_sum;
  }

  bool eligible(NodeId v, double threshold) const {
    const std::size_t deg = g_.out_degree(v);
    const double r = state_.residue[v];
    return deg == 0 ? r > threshold : r / static_cast<double>(deg) > threshold;
  }

  // Queues every touched node whose push condition holds, ascending by id.
  void enqueue_eligible(double threshold) {
    std::vector<NodeId> ready;
    for (NodeId v : state_.touched) {
      if (!in_queue_[v] && eligible(v, threshold)) ready.push_back(v);
    }
    std::sort(ready.begin(), ready.end());
    for (NodeId v : ready) {
      in_queue_[v] = 1;
      queue_.push_back(v);
    }
  }

  // FIFO pushes at `threshold` while `keep_going()` holds.
  template <typename KeepGoing>
  void drain(double threshold, KeepGoing keep_going) {
    while (!queue_.empty() && keep_going()) {
      const NodeId v = queue_.front();
      queue_.pop_front();
      in_queue_[v] = 0;
      if (!eligible(v, threshold)) continue;
      push(v, threshold);
      if (observer_) observer_(state_, v);
    }
  }

  bool queue_empty() const { return queue_.empty(); }
  PushState& state() { return state_; }
  PushState take() { return std::move(state_); }

 private:
  void add_residue(NodeId v, double mass) {
    if (!seen_[v]) {
      seen_[v] = 1;
      state_.touched.push_back(v);
    }
    state_.residue[v] += mass;
  }

  void push(NodeId v, double threshold) {
    const double r = state_.residue[v];
    state_.residue[v] = 0.0;
    ++state_.pushes;
    const auto neighbors = g_.out_neighbors(v);
    if (neighbors.empty()) {
      state_.reserve[v] += r;
      state_.r_sum -= r;
      state_.push_cost += 1;
      return;
    }
    state_.reserve[v] += alpha_ * r;
    state_.r_sum -= alpha_ * r;
    state_.push_cost += neighbors.size();
    const double share =
        (1.0 - alpha_) * r / static_cast<double>(neighbors.size());
    for (NodeId u : neighbors) {
      add_residue(u, share);
      if (!in_queue_[u] && eligible(u, threshold)) {
        in_queue_[u] = 1;
        queue_.push_back(u);
      }
    }
  }

  const Graph& g_;
  double alpha_;
  const PushObserver& observer_;
  PushState state_;
  std::deque<NodeId> queue_;
  std::vector<char> in_queue_;
  std::vector<char> seen_;
};

std::vector<std::pair<NodeId, double>> normalize_sigma(
    const Graph& g, std::span<const std::pair<NodeId, double>> sigma) {
  std::map<NodeId, double> merged;
  double total = 0.0;
  for (const auto& [v, p] : sigma) {
    if (!g.valid_node(v)) {
      throw usage_error("distribution: node " + std::to_string(v) +
                        " out of range");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw usage_error("distribution: probabilities must be non-negative");
    }
    merged[v] += p;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw usage_error("distribution: probabilities must sum to 1");
  }
  std::vector<std::pair<NodeId, double>> out;
  for (const auto& [v, p] : merged) {
    if (p > 0.0) out.emplace_back(v, p);
  }
  return out;
}

void check_push_args(double alpha, double r_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw usage_error("forward push: alpha must lie in (0,1)");
  }
  if (!(r_max > 0.0)) throw usage_error("forward push: r_max must be positive");
}

}  // namespace

PushState forward_push(const Graph& g, NodeId source, double alpha,
                       double r_max, const PushObserver& observer) {
  if (!g.valid_node(source)) throw usage_error("forward push: bad source");
  const std::pair<NodeId, double> point{source, 1.0};
  return forward_push_from_distribution(g, std::span(&point, 1), alpha, r_max,
                                        observer);
}

PushState forward_push_from_distribution(
    const Graph& g, std::span<const std::pair<NodeId, double>> sigma,
    double alpha, double r_max, const PushObserver& observer) {
  check_push_args(alpha, r_max);
  const auto entries = normalize_sigma(g, sigma);
  Pusher pusher(g, alpha, observer);
  pusher.seed(entries);
  pusher.enqueue_eligible(r_max);
  pusher.drain(r_max, [] { return true; });
  return pusher.take();
}

PushState forward_push_budgeted(const Graph& g, NodeId source, double alpha,
                                const PushBudget& budget,
                                const PushObserver& observer) {
  if (!g.valid_node(source)) throw usage_error("forward push: bad source");
  check_push_args(alpha, budget.r_max_floor);
  if (!(budget.walk_cost >= 0.0) || !(budget.walk_density >= 0.0)) {
    throw usage_error("forward push: budget terms must be non-negative");
  }
  const std::pair<NodeId, double> point{source, 1.0};
  Pusher pusher(g, alpha, observer);
  pusher.seed(std::span(&point, 1));

  const PushState& state = pusher.state();
  double omega = state.r_sum * budget.walk_density;
  std::uint64_t last_cost = 0;
  auto within_budget = [&] {
    if (state.push_cost != last_cost) {
      last_cost = state.push_cost;
      omega = state.r_sum * (1.0 - alpha) * budget.walk_density;
    }
    return static_cast<double>(state.push_cost) < omega * budget.walk_cost;
  };

  double threshold = std::max(budget.r_max_start, budget.r_max_floor);
  for (;;) {
    pusher.enqueue_eligible(threshold);
    pusher.drain(threshold, within_budget);
    if (!pusher.queue_empty() || !within_budget()) break;
    if (threshold <= budget.r_max_floor) break;
    threshold = std::max(threshold / 2.0, budget.r_max_floor);
  }
  return pusher.take();
}

}  // namespace fora
