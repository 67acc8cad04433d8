// Serial reference vs OpenMP kernels: walk phase, index build and power
// iteration. Prints a CSV row per kernel and execution mode.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "fora/exact.hpp"
#include "fora/fora.hpp"
#include "fora/generate.hpp"
#include "fora/walk_index.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_ms(int reps, F&& f) {
  double best = INFINITY;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    f();
    best = std::min(
        best,
        std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 20000;
  std::size_t degree = 10;
  int reps = 3;
  int threads = 0;
  CLI::App app{"Serial vs parallel kernel timings"};
  app.add_option("--n", n, "Nodes")->capture_default_str();
  app.add_option("--degree", degree, "Average out-degree")
      ->capture_default_str();
  app.add_option("--reps", reps, "Repetitions (best is kept)")
      ->capture_default_str();
  app.add_option("--threads", threads, "OpenMP threads (0 = default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  using namespace fora;
  const Graph g = erdos_renyi(n, n * degree, 1);
  const QueryParams p = QueryParams::defaults_for(n);
  const double r_max = choose_r_max(g, p);
  const WalkRng rng(7);

  std::printf("kernel,exec,threads,best_ms,identical\n");
  auto row = [&](const char* kernel, const char* exec, double ms,
                 bool identical) {
    std::printf("%s,%s,%d,%.3f,%s\n", kernel, exec, omp_get_max_threads(), ms,
                identical ? "yes" : "no");
  };

  {
    // Pure walk phase: all mass on the source.
    const std::vector<ResidueMass> masses = {{0, 1.0}};
    const OnlineWalks walks(g, p.alpha(), rng, false);
    std::vector<double> serial(n, 0.0);
    std::vector<double> parallel(n, 0.0);
    const double density = p.walk_density() * 4;
    const double s_ms = best_ms(reps, [&] {
      std::fill(serial.begin(), serial.end(), 0.0);
      run_walk_phase(masses, density, walks, serial, Execution::kSerial);
    });
    const double p_ms = best_ms(reps, [&] {
      std::fill(parallel.begin(), parallel.end(), 0.0);
      run_walk_phase(masses, density, walks, parallel, Execution::kParallel);
    });
    row("walk_phase", "serial", s_ms, true);
    row("walk_phase", "parallel", p_ms, serial == parallel);
  }
  {
    PprEstimate serial, parallel;
    const double s_ms = best_ms(reps, [&] {
      serial = whole_graph_basic(g, 0, p, r_max, rng, Execution::kSerial);
    });
    const double p_ms = best_ms(reps, [&] {
      parallel = whole_graph_basic(g, 0, p, r_max, rng, Execution::kParallel);
    });
    row("fora_query", "serial", s_ms, true);
    row("fora_query", "parallel", p_ms, serial.scores == parallel.scores);
  }
  {
    WalkIndex serial, parallel;
    const double s_ms = best_ms(reps, [&] {
      serial = build_index(g, p, r_max, 7, false, Execution::kSerial);
    });
    const double p_ms = best_ms(reps, [&] {
      parallel = build_index(g, p, r_max, 7, false, Execution::kParallel);
    });
    row("index_build", "serial", s_ms, true);
    row("index_build", "parallel", p_ms, serial == parallel);
  }
  {
    const PowerIteration oracle(g);
    ExactPpr serial, parallel;
    const double s_ms = best_ms(reps, [&] {
      serial = oracle.solve(0, p.alpha(), 100, 0.0, Execution::kSerial);
    });
    const double p_ms = best_ms(reps, [&] {
      parallel = oracle.solve(0, p.alpha(), 100, 0.0, Execution::kParallel);
    });
    double gap = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      gap = std::max(gap, std::abs(serial.scores[v] - parallel.scores[v]));
    }
    row("power_iteration", "serial", s_ms, true);
    // Pull and push orders differ, so agreement is up to rounding.
    row("power_iteration", "parallel", p_ms, gap <= 1e-15);
  }
  return 0;
}
