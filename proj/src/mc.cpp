#include "fora/mc.hpp"

#include "fora/errors.hpp"

namespace fora {

ForaTrace mc_trace(const Graph& g, NodeId source, const QueryParams& params,
                   const WalkSource& walks, Execution exec) {
  if (!g.valid_node(source)) throw usage_error("mc: bad source");
  ForaTrace trace;
  trace.estimate.scores.assign(g.num_nodes(), 0.0);
  trace.reserve.assign(g.num_nodes(), 0.0);
  trace.r_sum = 1.0;
  trace.omega = params.walk_density();
  const ResidueMass start{source, 1.0};
  trace.estimate.walks_issued =
      run_walk_phase(std::span(&start, 1), params.walk_density(), walks,
                     trace.estimate.scores, exec);
  return trace;
}

PprEstimate mc_whole_graph(const Graph& g, NodeId source,
                           const QueryParams& params, WalkRng rng,
                           Execution exec) {
  const OnlineWalks walks(g, params.alpha(), rng, false);
  return mc_trace(g, source, params, walks, exec).estimate;
}

}  // namespace fora
