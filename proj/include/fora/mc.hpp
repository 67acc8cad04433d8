#pragma once

#include "fora/fora.hpp"

namespace fora {

/// Monte-Carlo baseline: ceil(omega) walks from the source with
/// omega = (2e/3 + 2) ln(2/p_f) / (e^2 delta); each terminal receives
/// 1 / ceil(omega).
PprEstimate mc_whole_graph(const Graph& g, NodeId source,
                           const QueryParams& params, WalkRng rng,
                           Execution exec = Execution::kParallel);

/// Same as mc_whole_graph with walk terminals drawn from `walks`; reported
/// as a trace with zero reserves and r_sum = 1.
ForaTrace mc_trace(const Graph& g, NodeId source, const QueryParams& params,
                   const WalkSource& walks,
                   Execution exec = Execution::kParallel);

}  // namespace fora
