#include "fora/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fora/errors.hpp"
#include "fora/exact.hpp"
#include "fora/fora.hpp"
#include "fora/generate.hpp"
#include "fora/graph.hpp"
#include "fora/mc.hpp"
#include "fora/params.hpp"
#include "fora/rng.hpp"
#include "fora/topk.hpp"
#include "fora/walk_index.hpp"

namespace fora {
namespace {

struct RunConfig {
  std::string graph;
  bool undirected = false;
  double alpha = 0.2;
  double epsilon = 0.5;
  std::optional<double> delta;
  std::optional<double> p_f;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> source;
  std::size_t k = 10;
  std::vector<std::size_t> k_list;
  std::string index;
  std::string method;
  std::string algorithm = "fast";
  double rmax_scale = 1.0;
  bool zero_hop = false;
  std::string out = "-";
  std::string summary;
  std::size_t sources = 50;
  std::optional<std::size_t> topk_index;
  bool topk_refine = false;
  int oracle_iters = 200;
  int threads = 0;
  std::string kind;
  std::size_t n = 0;
  std::size_t size = 0;
};

QueryParams params_for(const RunConfig& cfg, const Graph& g) {
  const QueryParams base = QueryParams::defaults_for(g.num_nodes(), cfg.alpha);
  return QueryParams(cfg.alpha, cfg.epsilon, cfg.delta.value_or(base.delta()),
                     cfg.p_f.value_or(base.p_f()));
}

NodeId source_for(const RunConfig& cfg, const Graph& g) {
  if (!cfg.source) throw usage_error("--source is required");
  if (!g.valid_node(*cfg.source)) throw usage_error("--source out of range");
  return static_cast<NodeId>(*cfg.source);
}

// Writes to --out, or to the command's stdout for "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw io_error("cannot open for writing: " + path);
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw io_error("write failed: " + path);
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string format_score(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_scores(std::ostream& out, std::span<const double> scores) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return scores[a] > scores[b];
  });
  for (NodeId v : order) out << v << '\t' << format_score(scores[v]) << '\n';
}

PprEstimate whole_graph(const RunConfig& cfg, const Graph& g, NodeId source,
                        const QueryParams& params, const WalkIndex* index,
                        std::uint64_t seed) {
  const WalkRng rng(seed);
  if (cfg.method == "fora") return whole_graph_balanced(g, source, params, rng);
  if (cfg.method == "fora-basic") {
    return whole_graph_basic(g, source, params,
                             choose_r_max(g, params) * cfg.rmax_scale, rng);
  }
  if (cfg.method == "mc") return mc_whole_graph(g, source, params, rng);
  if (cfg.method == "fora-plus") {
    if (index == nullptr) throw usage_error("--index is required for fora-plus");
    return query_with_index(g, *index, source, params);
  }
  throw usage_error("unknown whole-graph method: " + cfg.method);
}

bool is_topk_method(const std::string& m) {
  return m == "topk-fast" || m == "topk-refine" || m == "mc-topk";
}

// Resolves --method/--algorithm for top-k queries into an estimator and
// algorithm choice.
struct TopKPlan {
  TopKAlgorithm algorithm = TopKAlgorithm::kFast;
  enum class Source { kOnline, kIndex, kMonteCarlo } source = Source::kOnline;
};

TopKPlan plan_topk(const RunConfig& cfg) {
  TopKPlan plan;
  if (cfg.algorithm == "refine") {
    plan.algorithm = TopKAlgorithm::kBoundRefine;
  } else if (cfg.algorithm != "fast") {
    throw usage_error("--algorithm must be fast or refine");
  }
  const std::string& m = cfg.method;
  if (m == "fora" || m == "fora-basic" || m == "topk-fast") {
    if (m == "topk-fast") plan.algorithm = TopKAlgorithm::kFast;
  } else if (m == "topk-refine") {
    plan.algorithm = TopKAlgorithm::kBoundRefine;
  } else if (m == "fora-plus") {
    plan.source = TopKPlan::Source::kIndex;
  } else if (m == "mc" || m == "mc-topk") {
    plan.source = TopKPlan::Source::kMonteCarlo;
    if (m == "mc-topk") plan.algorithm = TopKAlgorithm::kFast;
  } else {
    throw usage_error("unknown top-k method: " + m);
  }
  return plan;
}

TopKResult run_topk(const RunConfig& cfg, const Graph& g, NodeId source,
                    std::size_t k, const QueryParams& params,
                    const WalkIndex* index, std::uint64_t seed) {
  const TopKPlan plan = plan_topk(cfg);
  const WalkRng rng(seed);
  std::unique_ptr<TopKEstimator> estimator;
  switch (plan.source) {
    case TopKPlan::Source::kOnline:
      estimator = std::make_unique<OnlineForaEstimator>(rng);
      break;
    case TopKPlan::Source::kIndex:
      if (index == nullptr) {
        throw usage_error("--index is required for fora-plus");
      }
      estimator = std::make_unique<IndexedForaEstimator>(*index);
      break;
    case TopKPlan::Source::kMonteCarlo:
      estimator = std::make_unique<MonteCarloEstimator>(rng);
      break;
  }
  return plan.algorithm == TopKAlgorithm::kFast
             ? topk_fast(g, *estimator, source, k, params)
             : topk_bound_refine(g, *estimator, source, k, params);
}

std::optional<WalkIndex> maybe_load_index(const RunConfig& cfg) {
  if (cfg.index.empty()) return std::nullopt;
  return load_index(cfg.index);
}

int cmd_query(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  const QueryParams params = params_for(cfg, g);
  const NodeId source = source_for(cfg, g);
  const auto index = maybe_load_index(cfg);
  const PprEstimate est = whole_graph(cfg, g, source, params,
                                      index ? &*index : nullptr, cfg.seed);
  Output sink(cfg.out, out);
  write_scores(sink.get(), est.scores);
  sink.finish(cfg.out);
  return 0;
}

int cmd_pagerank(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  const PprEstimate est =
      global_pagerank(g, params_for(cfg, g), WalkRng(cfg.seed));
  Output sink(cfg.out, out);
  write_scores(sink.get(), est.scores);
  sink.finish(cfg.out);
  return 0;
}

int cmd_topk(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  const QueryParams params = params_for(cfg, g);
  const NodeId source = source_for(cfg, g);
  if (cfg.k < 1 || cfg.k > g.num_nodes()) throw usage_error("--k out of range");
  const auto index = maybe_load_index(cfg);
  const TopKResult result = run_topk(cfg, g, source, cfg.k, params,
                                     index ? &*index : nullptr, cfg.seed);
  Output sink(cfg.out, out);
  for (const auto& e : result.entries) {
    sink.get() << e.node << '\t' << format_score(e.estimate) << '\n';
  }
  sink.finish(cfg.out);

  const nlohmann::json summary = {
      {"delta_final", result.delta_final}, {"iterations", result.iterations},
      {"walks", result.walks},             {"pushes", result.pushes},
      {"certified", result.certified},     {"k", cfg.k},
      {"source", source}};
  std::string summary_path = cfg.summary;
  if (summary_path.empty() && cfg.out != "-") summary_path = cfg.out + ".json";
  if (summary_path.empty()) {
    err << summary.dump() << '\n';
  } else {
    Output json_sink(summary_path, out);
    json_sink.get() << summary.dump(2) << '\n';
    json_sink.finish(summary_path);
  }
  return 0;
}

int cmd_build_index(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out == "-") throw usage_error("build-index needs --out <file>");
  if (!(cfg.rmax_scale > 0.0)) throw usage_error("--rmax-scale must be > 0");
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  QueryParams params = params_for(cfg, g);
  bool zero_hop = cfg.zero_hop;
  if (cfg.topk_index) {
    if (cfg.zero_hop) throw usage_error("--zero-hop does not apply to --topk");
    params = topk_final_params(g, *cfg.topk_index, params,
                               cfg.topk_refine ? TopKAlgorithm::kBoundRefine
                                               : TopKAlgorithm::kFast);
    zero_hop = false;
  }
  const double r_max = choose_r_max(g, params) * cfg.rmax_scale;
  const auto start = std::chrono::steady_clock::now();
  const WalkIndex index = build_index(g, params, r_max, cfg.seed, zero_hop);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  save_index(index, cfg.out);
  const nlohmann::json summary = {{"n", g.num_nodes()},
                                  {"m", g.num_edges()},
                                  {"r_max", r_max},
                                  {"destinations", index.total()},
                                  {"size_bound", index_size_bound(g, params)},
                                  {"build_seconds", seconds}};
  out << summary.dump() << '\n';
  return 0;
}

std::vector<NodeId> sample_sources(const Graph& g, std::size_t count,
                                   std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  RngStream rng = WalkRng(seed).aux_stream(3);
  count = std::min(count, n);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.bounded(n - i)]);
  }
  pool.resize(count);
  return pool;
}

std::uint64_t query_seed(std::uint64_t seed, std::size_t query_id) {
  return WalkRng(seed).aux_stream(1000 + query_id).next_u64();
}

std::vector<std::size_t> k_menu(const RunConfig& cfg, std::size_t n) {
  std::vector<std::size_t> ks = cfg.k_list;
  if (ks.empty()) {
    const std::size_t step = n <= 2000 ? 10 : 100;
    for (std::size_t i = 1; i <= 5; ++i) ks.push_back(i * step);
  }
  std::erase_if(ks, [&](std::size_t k) { return k < 1 || k > n; });
  if (ks.empty()) ks.push_back(n);
  return ks;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  const QueryParams params = params_for(cfg, g);
  const auto index = maybe_load_index(cfg);
  const WalkIndex* idx = index ? &*index : nullptr;
  const PowerIteration oracle(g);
  const auto ks = k_menu(cfg, g.num_nodes());
  Output sink(cfg.out, out);
  auto& os = sink.get();
  os << "query_id,method,k,precision,ndcg,violations,walks,pushes,"
        "violation_fraction\n";
  const auto sources = sample_sources(g, cfg.sources, cfg.seed);
  for (std::size_t q = 0; q < sources.size(); ++q) {
    const NodeId s = sources[q];
    const std::uint64_t seed = query_seed(cfg.seed, q);
    const ExactPpr exact =
        oracle.solve(s, params.alpha(), cfg.oracle_iters, 1e-13);
    auto row = [&](std::size_t k, std::span<const NodeId> returned,
                   std::size_t violations, std::size_t eligible,
                   std::uint64_t walks, std::uint64_t pushes) {
      const double fraction =
          eligible == 0 ? 0.0
                        : static_cast<double>(violations) /
                              static_cast<double>(eligible);
      os << q << ',' << cfg.method << ',' << k << ','
         << format_score(precision_at_k(returned, exact, k)) << ','
         << format_score(ndcg_at_k(returned, exact, k)) << ',' << violations
         << ',' << walks << ',' << pushes << ',' << format_score(fraction)
         << '\n';
    };
    if (is_topk_method(cfg.method)) {
      for (std::size_t k : ks) {
        const TopKResult r = run_topk(cfg, g, s, k, params, idx, seed);
        std::vector<NodeId> returned;
        std::size_t violations = 0;
        std::size_t eligible = 0;
        for (const auto& e : r.entries) {
          returned.push_back(e.node);
          const double truth = exact.scores[e.node];
          if (truth > r.delta_final) {
            ++eligible;
            if (std::abs(truth - e.estimate) > params.epsilon() * truth) {
              ++violations;
            }
          }
        }
        row(k, returned, violations, eligible, r.walks, r.pushes);
      }
    } else {
      const PprEstimate est = whole_graph(cfg, g, s, params, idx, seed);
      const ViolationReport audit =
          audit_relative_error(est.scores, exact, params);
      for (std::size_t k : ks) {
        const auto returned = largest_k(est.scores, k);
        row(k, returned, audit.count(), audit.eligible, est.walks_issued,
            est.pushes);
      }
    }
  }
  sink.finish(cfg.out);
  return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const Graph g = load_edge_list(cfg.graph, cfg.undirected);
  const QueryParams params = params_for(cfg, g);
  const auto sources = sample_sources(g, cfg.sources, cfg.seed);
  const std::size_t k = std::min(cfg.k, g.num_nodes());
  Output sink(cfg.out, out);
  auto& os = sink.get();
  os << "method,queries,total_ms,mean_ms,walks,pushes\n";
  using Clock = std::chrono::steady_clock;
  auto report = [&](const std::string& name, std::size_t queries,
                    Clock::duration elapsed, std::uint64_t walks,
                    std::uint64_t pushes) {
    const double ms =
        std::chrono::duration<double, std::milli>(elapsed).count();
    os << name << ',' << queries << ',' << format_score(ms) << ','
       << format_score(queries ? ms / static_cast<double>(queries) : 0.0)
       << ',' << walks << ',' << pushes << '\n';
  };
  auto time_whole = [&](const std::string& method, const WalkIndex* idx) {
    RunConfig c = cfg;
    c.method = method;
    std::uint64_t walks = 0;
    std::uint64_t pushes = 0;
    const auto start = Clock::now();
    for (std::size_t q = 0; q < sources.size(); ++q) {
      const PprEstimate e =
          whole_graph(c, g, sources[q], params, idx, query_seed(cfg.seed, q));
      walks += e.walks_issued;
      pushes += e.pushes;
    }
    report(method, sources.size(), Clock::now() - start, walks, pushes);
  };
  auto time_topk = [&](const std::string& method, const std::string& algorithm,
                       const std::string& label, const WalkIndex* idx) {
    RunConfig c = cfg;
    c.method = method;
    c.algorithm = algorithm;
    std::uint64_t walks = 0;
    std::uint64_t pushes = 0;
    const auto start = Clock::now();
    for (std::size_t q = 0; q < sources.size(); ++q) {
      const TopKResult r =
          run_topk(c, g, sources[q], k, params, idx, query_seed(cfg.seed, q));
      walks += r.walks;
      pushes += r.pushes;
    }
    report(label, sources.size(), Clock::now() - start, walks, pushes);
  };

  time_whole("mc", nullptr);
  time_whole("fora-basic", nullptr);
  time_whole("fora", nullptr);

  auto start = Clock::now();
  const WalkIndex whole_index =
      build_index(g, params, choose_r_max(g, params) * cfg.rmax_scale,
                  cfg.seed, false);
  report("fora-plus-build", 1, Clock::now() - start, whole_index.total(), 0);
  time_whole("fora-plus", &whole_index);

  time_topk("mc-topk", "fast", "mc-topk", nullptr);
  time_topk("fora", "fast", "topk-fast", nullptr);
  time_topk("fora", "refine", "topk-refine", nullptr);
  const QueryParams final_params =
      topk_final_params(g, k, params, TopKAlgorithm::kFast);
  start = Clock::now();
  const WalkIndex topk_index = build_index(
      g, final_params, choose_r_max(g, final_params) * cfg.rmax_scale,
      cfg.seed, false);
  report("fora-plus-topk-build", 1, Clock::now() - start, topk_index.total(),
         0);
  time_topk("fora-plus", "fast", "topk-fast-plus", &topk_index);
  sink.finish(cfg.out);
  return 0;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const Graph g = generate_graph(parse_graph_kind(cfg.kind), cfg.n, cfg.size,
                                 cfg.seed);
  Output sink(cfg.out, out);
  write_edge_list(g, sink.get());
  sink.finish(cfg.out);
  return 0;
}

void add_graph_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--graph", cfg.graph, "Edge-list file")->required();
  cmd->add_flag("--undirected", cfg.undirected,
                "Read each line as an undirected edge");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = default)");
}

void add_param_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "Termination probability")
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon, "Relative error")
      ->capture_default_str();
  cmd->add_option("--delta", cfg.delta, "PPR threshold (default 1/n)");
  cmd->add_option("--pf", cfg.p_f, "Failure probability (default 1/n)");
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Approximate personalized PageRank"};
  app.require_subcommand(1);

  auto* query = app.add_subcommand("query", "Whole-graph PPR from one source");
  add_graph_options(query, cfg);
  add_param_options(query, cfg);
  query->add_option("--source", cfg.source, "Source node")->required();
  cfg.method = "fora";
  query->add_option("--method", cfg.method,
                    "fora | fora-basic | fora-plus | mc")
      ->capture_default_str();
  query->add_option("--index", cfg.index, "Index file for fora-plus");
  query->add_option("--rmax-scale", cfg.rmax_scale,
                    "r_max multiplier for fora-basic");
  query->add_option("--out", cfg.out, "Output TSV (default stdout)");

  auto* topk = app.add_subcommand("topk", "Top-k PPR from one source");
  add_graph_options(topk, cfg);
  add_param_options(topk, cfg);
  topk->add_option("--source", cfg.source, "Source node")->required();
  topk->add_option("--k", cfg.k, "Number of results")->capture_default_str();
  topk->add_option("--method", cfg.method,
                   "fora | fora-plus | mc | topk-fast | topk-refine | "
                   "mc-topk");
  topk->add_option("--algorithm", cfg.algorithm, "fast | refine")
      ->capture_default_str();
  topk->add_option("--index", cfg.index, "Index file for fora-plus");
  topk->add_option("--out", cfg.out, "Output TSV (default stdout)");
  topk->add_option("--summary", cfg.summary,
                   "JSON summary path (default <out>.json, or stderr)");

  auto* pagerank = app.add_subcommand("pagerank", "Global PageRank");
  add_graph_options(pagerank, cfg);
  add_param_options(pagerank, cfg);
  pagerank->add_option("--out", cfg.out, "Output TSV (default stdout)");

  auto* build = app.add_subcommand("build-index", "Precompute walk index");
  add_graph_options(build, cfg);
  add_param_options(build, cfg);
  build->add_option("--rmax-scale", cfg.rmax_scale, "r_max multiplier")
      ->capture_default_str();
  build->add_flag("--zero-hop", cfg.zero_hop, "Index for zero-hop queries");
  build->add_option("--topk", cfg.topk_index,
                    "Size the index for top-k queries with this k");
  build->add_flag("--topk-refine", cfg.topk_refine,
                  "With --topk: size for bound refinement instead of fast");
  build->add_option("--out", cfg.out, "Index file")->required();

  auto* eval = app.add_subcommand("eval", "Accuracy against power iteration");
  add_graph_options(eval, cfg);
  add_param_options(eval, cfg);
  eval->add_option("--method", cfg.method,
                   "fora | fora-basic | fora-plus | mc | topk-fast | "
                   "topk-refine | mc-topk");
  eval->add_option("--sources", cfg.sources, "Number of sampled sources")
      ->capture_default_str();
  eval->add_option("--k", cfg.k_list, "k values (default 10..50 or 100..500)");
  eval->add_option("--index", cfg.index, "Index file for fora-plus");
  eval->add_option("--rmax-scale", cfg.rmax_scale,
                   "r_max multiplier for fora-basic");
  eval->add_option("--oracle-iters", cfg.oracle_iters,
                   "Power-iteration rounds")
      ->capture_default_str();
  eval->add_option("--out", cfg.out, "Output CSV (default stdout)");

  auto* bench = app.add_subcommand("bench", "Timing and walk counts");
  add_graph_options(bench, cfg);
  add_param_options(bench, cfg);
  bench->add_option("--sources", cfg.sources, "Number of sampled sources")
      ->capture_default_str();
  bench->add_option("--k", cfg.k, "k for top-k rows")->capture_default_str();
  bench->add_option("--rmax-scale", cfg.rmax_scale, "Index r_max multiplier")
      ->capture_default_str();
  bench->add_option("--out", cfg.out, "Output CSV (default stdout)");

  auto* generate = app.add_subcommand("generate", "Write a synthetic graph");
  generate->add_option("--kind", cfg.kind,
                       "erdos-renyi | ba-preferential | star | cycle | path")
      ->required();
  generate->add_option("--n", cfg.n, "Node count")->required();
  generate->add_option("--m", cfg.size,
                       "Edges (erdos-renyi) or degree (ba-preferential)");
  generate->add_option("--seed", cfg.seed, "Random seed")
      ->capture_default_str();
  generate->add_option("--out", cfg.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out;
    std::ostringstream error_out;
    const int code = app.exit(e, help_out, error_out);
    out << help_out.str();
    err << error_out.str();
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kUsage);
  }

  try {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    if (query->parsed()) return cmd_query(cfg, out);
    if (topk->parsed()) return cmd_topk(cfg, out, err);
    if (pagerank->parsed()) return cmd_pagerank(cfg, out);
    if (build->parsed()) return cmd_build_index(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    if (generate->parsed()) return cmd_generate(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kInvariant);
  }
  return static_cast<int>(ErrorKind::kUsage);
}

}  // namespace fora
