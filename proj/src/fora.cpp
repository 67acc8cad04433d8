#include "fora/fora.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include "fora/errors.hpp"
#include "fora/walks.hpp"

namespace fora {

void OnlineWalks::fill(NodeId v, std::uint64_t first,
                       std::span<NodeId> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) {
    RngStream stream = rng_.stream(v, first + j);
    out[j] = skip_zero_hop_ ? random_walk_skip_zero_hop(g_, v, alpha_, stream)
                            : random_walk(g_, v, alpha_, stream);
  }
}

std::uint64_t walks_for_mass(double mass, double walk_density) {
  if (!(mass > 0.0)) return 0;
  const double x = mass * walk_density;
  const double count = std::ceil(x * (1.0 - 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(count));
}

namespace {

// Adds hits(t) * mass / count to each terminal t. Credits whole runs so that
// count walks ending on one node contribute exactly `mass`.
void credit_terminals(std::span<NodeId> terminals, double mass,
                      std::span<double> scores) {
  std::sort(terminals.begin(), terminals.end());
  const auto count = static_cast<double>(terminals.size());
  for (std::size_t i = 0; i < terminals.size();) {
    std::size_t j = i + 1;
    while (j < terminals.size() && terminals[j] == terminals[i]) ++j;
    scores[terminals[i]] += static_cast<double>(j - i) * mass / count;
    i = j;
  }
}

std::uint64_t walk_phase_serial(std::span<const ResidueMass> masses,
                                double walk_density, const WalkSource& walks,
                                std::span<double> scores) {
  std::uint64_t total = 0;
  std::vector<NodeId> terminals;
  for (const auto& [node, mass] : masses) {
    const std::uint64_t count = walks_for_mass(mass, walk_density);
    if (count == 0) continue;
    terminals.resize(count);
    walks.fill(node, 0, terminals);
    credit_terminals(terminals, mass, scores);
    total += count;
  }
  return total;
}

std::uint64_t walk_phase_parallel(std::span<const ResidueMass> masses,
                                  double walk_density, const WalkSource& walks,
                                  std::span<double> scores) {
  const std::size_t entries = masses.size();
  std::vector<std::uint64_t> offsets(entries + 1, 0);
  for (std::size_t i = 0; i < entries; ++i) {
    offsets[i + 1] = offsets[i] + walks_for_mass(masses[i].mass, walk_density);
  }
  const std::uint64_t total = offsets.back();
  std::vector<NodeId> terminals(total);

  constexpr std::int64_t kChunk = 2048;
  const auto chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(total, lo + kChunk);
    auto it = std::upper_bound(offsets.begin(), offsets.end(), lo);
    std::size_t i = static_cast<std::size_t>(it - offsets.begin()) - 1;
    std::uint64_t pos = lo;
    try {
      while (pos < hi) {
        const std::uint64_t end = std::min(hi, offsets[i + 1]);
        walks.fill(masses[i].node, pos - offsets[i],
                   std::span<NodeId>(terminals).subspan(pos, end - pos));
        pos = end;
        ++i;
      }
    } catch (...) {
#pragma omp critical(fora_walk_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Serial accumulation in entry order keeps the sums bit-identical to the
  // serial path.
  for (std::size_t i = 0; i < entries; ++i) {
    const std::uint64_t count = offsets[i + 1] - offsets[i];
    if (count == 0) continue;
    credit_terminals(
        std::span<NodeId>(terminals).subspan(offsets[i], count),
        masses[i].mass, scores);
  }
  return total;
}

// Residues as walk masses, scaled by `scale`, ascending by node id.
std::vector<ResidueMass> residue_masses(const PushState& state, double scale) {
  std::vector<ResidueMass> masses;
  for (NodeId v : state.positive_residue_nodes()) {
    masses.push_back({v, scale * state.residue[v]});
  }
  return masses;
}

double total_mass(std::span<const ResidueMass> masses) {
  double sum = 0.0;
  for (const auto& m : masses) sum += m.mass;
  return sum;
}

ForaTrace finish_basic(PushState&& state, const QueryParams& params,
                       const WalkSource& walks, Execution exec) {
  ForaTrace trace;
  trace.estimate.pushes = state.push_cost;
  trace.estimate.scores = state.reserve;
  const auto masses = residue_masses(state, 1.0);
  trace.r_sum = total_mass(masses);
  trace.omega = trace.r_sum * params.walk_density();
  trace.estimate.walks_issued = run_walk_phase(
      masses, params.walk_density(), walks, trace.estimate.scores, exec);
  trace.reserve = std::move(state.reserve);
  return trace;
}

ForaTrace finish_zero_hop(PushState&& state, const QueryParams& params,
                          const WalkSource& walks, Execution exec) {
  const double alpha = params.alpha();
  ForaTrace trace;
  trace.estimate.pushes = state.push_cost;
  trace.estimate.scores = state.reserve;
  for (NodeId v : state.touched) {
    trace.estimate.scores[v] += alpha * state.residue[v];
  }
  const auto masses = residue_masses(state, 1.0 - alpha);
  trace.r_sum = total_mass(masses);
  trace.omega = trace.r_sum * params.walk_density();
  trace.estimate.walks_issued = run_walk_phase(
      masses, params.walk_density(), walks, trace.estimate.scores, exec);
  trace.reserve = std::move(state.reserve);
  return trace;
}

}  // namespace

std::uint64_t run_walk_phase(std::span<const ResidueMass> masses,
                             double walk_density, const WalkSource& walks,
                             std::span<double> scores, Execution exec) {
  return exec == Execution::kSerial
             ? walk_phase_serial(masses, walk_density, walks, scores)
             : walk_phase_parallel(masses, walk_density, walks, scores);
}

double choose_r_max(const Graph& g, const QueryParams& params) {
  const double eps = params.epsilon();
  const double c = (2.0 * eps / 3.0 + 2.0) * params.log_term();
  const double walk_limited = eps * eps * params.delta() / c;
  const auto m = static_cast<double>(g.num_edges());
  if (m == 0.0) return walk_limited;
  const double balanced = eps / std::sqrt(m) * std::sqrt(params.delta() / c);
  return m * balanced <= 1.0 ? balanced : walk_limited;
}

ForaTrace whole_graph_trace(const Graph& g, NodeId source,
                            const QueryParams& params, double r_max,
                            const WalkSource& walks, Execution exec) {
  return finish_basic(forward_push(g, source, params.alpha(), r_max), params,
                      walks, exec);
}

PprEstimate whole_graph_basic(const Graph& g, NodeId source,
                              const QueryParams& params, double r_max,
                              WalkRng rng, Execution exec) {
  const OnlineWalks walks(g, params.alpha(), rng, false);
  return whole_graph_trace(g, source, params, r_max, walks, exec).estimate;
}

ForaTrace whole_graph_zero_hop_trace(const Graph& g, NodeId source,
                                     const QueryParams& params, double r_max,
                                     const WalkSource& walks, Execution exec) {
  return finish_zero_hop(forward_push(g, source, params.alpha(), r_max),
                         params, walks, exec);
}

PprEstimate whole_graph_zero_hop(const Graph& g, NodeId source,
                                 const QueryParams& params, double r_max,
                                 WalkRng rng, Execution exec) {
  const OnlineWalks walks(g, params.alpha(), rng, true);
  return whole_graph_zero_hop_trace(g, source, params, r_max, walks, exec)
      .estimate;
}

PprEstimate whole_graph_balanced(const Graph& g, NodeId source,
                                 const QueryParams& params, WalkRng rng,
                                 Execution exec) {
  PushBudget budget;
  budget.walk_cost = 1.0 / params.alpha();
  budget.walk_density = params.walk_density();
  budget.r_max_start = 1.0;
  budget.r_max_floor = kBalancedRMaxFloor;
  const OnlineWalks walks(g, params.alpha(), rng, true);
  return finish_zero_hop(
             forward_push_budgeted(g, source, params.alpha(), budget), params,
             walks, exec)
      .estimate;
}

PprEstimate ppr_from_distribution(
    const Graph& g, std::span<const std::pair<NodeId, double>> sigma,
    const QueryParams& params, double r_max, WalkRng rng, Execution exec) {
  const OnlineWalks walks(g, params.alpha(), rng, false);
  return finish_basic(
             forward_push_from_distribution(g, sigma, params.alpha(), r_max),
             params, walks, exec)
      .estimate;
}

PprEstimate global_pagerank(const Graph& g, const QueryParams& params,
                            WalkRng rng, Execution exec) {
  const std::size_t n = g.num_nodes();
  std::vector<std::pair<NodeId, double>> sigma;
  sigma.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    sigma.emplace_back(static_cast<NodeId>(v), 1.0 / static_cast<double>(n));
  }
  return ppr_from_distribution(g, sigma, params, choose_r_max(g, params), rng,
                               exec);
}

}  // namespace fora
