#include <gtest/gtest.h>

#include <cmath>

#include "fora/errors.hpp"
#include "fora/forward_push.hpp"
#include "fora/generate.hpp"
#include "support/graphs.hpp"
#include "support/oracle.hpp"
#include "support/push_checks.hpp"

namespace fora {
namespace {

using testing::dense_ppr_matrix;
using testing::MassChecker;

double invariant_gap(const PushState& st, const Eigen::MatrixXd& pi,
                     NodeId source) {
  double worst = 0.0;
  const auto n = st.reserve.size();
  for (std::size_t t = 0; t < n; ++t) {
    double rhs = st.reserve[t];
    for (std::size_t v = 0; v < n; ++v) {
      if (st.residue[v] != 0.0) rhs += st.residue[v] * pi(v, t);
    }
    worst = std::max(worst, std::abs(pi(source, t) - rhs));
  }
  return worst;
}

TEST(ForwardPush, InvariantHoldsAfterEveryPush) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Graph g = testing::sparse_with_dangling(40, 3, 0.7, i);
    const Eigen::MatrixXd pi = dense_ppr_matrix(g, 0.2);
    double worst = 0.0;
    std::size_t pushes = 0;
    forward_push(g, 0, 0.2, 1e-4, [&](const PushState& st, NodeId) {
      worst = std::max(worst, invariant_gap(st, pi, 0));
      ++pushes;
    });
    EXPECT_GT(pushes, 0u);
    EXPECT_LE(worst, 1e-12) << "graph " << i;
  }
}

TEST(ForwardPush, ConservesMassAfterEveryPush) {
  MassChecker checker;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto named = testing::mixed_graph(i);
    forward_push(named.graph, 0, 0.2, 1e-6, checker.observer());
  }
  EXPECT_GT(checker.checks, 1000u);
  EXPECT_EQ(checker.violations, 0u) << "worst " << checker.worst;
}

TEST(ForwardPush, StopsBelowThreshold) {
  const Graph g = erdos_renyi(200, 1000, 3);
  const double r_max = 1e-3;
  const PushState st = forward_push(g, 5, 0.2, r_max);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double deg = g.is_dangling(v) ? 1.0 : double(g.out_degree(v));
    EXPECT_LE(st.residue[v] / deg, r_max);
  }
  EXPECT_EQ(st.positive_residue_nodes().size(),
            static_cast<std::size_t>(std::count_if(
                st.residue.begin(), st.residue.end(),
                [](double r) { return r > 0.0; })));
}

TEST(ForwardPush, LargeThresholdDoesNothing) {
  const Graph g = cycle(4);
  const PushState st = forward_push(g, 2, 0.2, 1.0);
  EXPECT_EQ(st.pushes, 0u);
  EXPECT_EQ(st.residue[2], 1.0);
  EXPECT_EQ(st.r_sum, 1.0);
}

TEST(ForwardPush, DanglingSourceAbsorbsEverything) {
  const Graph g = path(2);
  const PushState st = forward_push(g, 1, 0.2, 0.5);
  EXPECT_EQ(st.reserve[1], 1.0);
  EXPECT_EQ(st.r_sum, 0.0);
  EXPECT_EQ(st.push_cost, 1u);
}

TEST(ForwardPush, PathHandTrace) {
  // 0 -> 1 with 1 dangling: push 0 then absorb at 1.
  const Graph g = path(2);
  const PushState st = forward_push(g, 0, 0.2, 1e-9);
  EXPECT_NEAR(st.reserve[0], 0.2, 1e-15);
  EXPECT_NEAR(st.reserve[1], 0.8, 1e-15);
  EXPECT_EQ(st.r_sum, 0.0);
}

TEST(ForwardPush, SelfLoopKeepsReturnedResidue) {
  const std::vector<std::pair<NodeId, NodeId>> edges = {{0, 0}, {0, 1}};
  const Graph g = Graph::from_edges(2, edges);
  const PushState st = forward_push(g, 0, 0.2, 0.45);
  // One push: reserve 0.2, half of 0.8 returns to 0 (0.4/2 <= 0.45).
  EXPECT_EQ(st.pushes, 1u);
  EXPECT_NEAR(st.residue[0], 0.4, 1e-15);
  EXPECT_NEAR(st.residue[1], 0.4, 1e-15);
}

TEST(ForwardPush, PointDistributionMatchesSource) {
  const Graph g = erdos_renyi(100, 400, 2);
  const std::vector<std::pair<NodeId, double>> sigma = {{7, 1.0}};
  const PushState a = forward_push(g, 7, 0.2, 1e-4);
  const PushState b = forward_push_from_distribution(g, sigma, 0.2, 1e-4);
  EXPECT_EQ(a.reserve, b.reserve);
  EXPECT_EQ(a.residue, b.residue);
  EXPECT_EQ(a.r_sum, b.r_sum);
}

TEST(ForwardPush, DistributionInvariantIsLinear) {
  const Graph g = testing::sparse_with_dangling(30, 3, 0.8, 11);
  const Eigen::MatrixXd pi = dense_ppr_matrix(g, 0.2);
  const std::vector<std::pair<NodeId, double>> sigma = {
      {0, 0.5}, {3, 0.25}, {3, 0.125}, {9, 0.125}};
  MassChecker checker;
  const PushState st =
      forward_push_from_distribution(g, sigma, 0.2, 1e-5, checker.observer());
  EXPECT_EQ(checker.violations, 0u);
  for (std::size_t t = 0; t < g.num_nodes(); ++t) {
    const double truth =
        0.5 * pi(0, t) + 0.375 * pi(3, t) + 0.125 * pi(9, t);
    double rhs = st.reserve[t];
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      rhs += st.residue[v] * pi(v, t);
    }
    EXPECT_NEAR(truth, rhs, 1e-12);
  }
}

TEST(ForwardPush, RejectsBadDistribution) {
  const Graph g = cycle(3);
  const std::vector<std::pair<NodeId, double>> short_mass = {{0, 0.5}};
  const std::vector<std::pair<NodeId, double>> negative = {{0, 1.5},
                                                           {1, -0.5}};
  const std::vector<std::pair<NodeId, double>> bad_node = {{3, 1.0}};
  EXPECT_THROW(forward_push_from_distribution(g, short_mass, 0.2, 0.1), Error);
  EXPECT_THROW(forward_push_from_distribution(g, negative, 0.2, 0.1), Error);
  EXPECT_THROW(forward_push_from_distribution(g, bad_node, 0.2, 0.1), Error);
}

TEST(BudgetedPush, FixedScheduleEqualsPlainPush) {
  const Graph g = erdos_renyi(150, 900, 8);
  const double r_max = 2e-4;
  PushBudget budget;
  budget.walk_cost = 5.0;
  budget.walk_density = PushBudget::kUnbounded;
  budget.r_max_start = r_max;
  budget.r_max_floor = r_max;
  const PushState a = forward_push(g, 3, 0.2, r_max);
  const PushState b = forward_push_budgeted(g, 3, 0.2, budget);
  EXPECT_EQ(a.reserve, b.reserve);
  EXPECT_EQ(a.residue, b.residue);
  EXPECT_EQ(a.push_cost, b.push_cost);
}

TEST(BudgetedPush, ZeroDensityMeansNoPush) {
  const Graph g = cycle(5);
  PushBudget budget;
  budget.walk_cost = 5.0;
  budget.walk_density = 0.0;
  const PushState st = forward_push_budgeted(g, 0, 0.2, budget);
  EXPECT_EQ(st.pushes, 0u);
  EXPECT_EQ(st.r_sum, 1.0);
}

TEST(BudgetedPush, StopsWhenCostMatchesWalks) {
  const Graph g = erdos_renyi(300, 3000, 4);
  PushBudget budget;
  budget.walk_cost = 5.0;
  budget.walk_density = 2000.0;
  budget.r_max_floor = 1e-12;
  MassChecker checker;
  const PushState st =
      forward_push_budgeted(g, 0, 0.2, budget, checker.observer());
  EXPECT_EQ(checker.violations, 0u);
  EXPECT_GT(st.pushes, 0u);
  EXPECT_GT(st.r_sum, 0.0);
  // The final pass may overshoot the budget by at most one push of the
  // largest out-degree.
  const double walk_cost = st.r_sum * 0.8 * 2000.0 * 5.0;
  EXPECT_LE(static_cast<double>(st.push_cost), walk_cost + 3000.0);
}

TEST(ForwardPush, IsolatedNode) {
  const Graph g = Graph::from_edges(1, {});
  const PushState st = forward_push(g, 0, 0.2, 0.1);
  EXPECT_EQ(st.reserve[0], 1.0);
  EXPECT_EQ(st.residue[0], 0.0);
  EXPECT_EQ(st.r_sum, 0.0);
}

TEST(ForwardPush, TwoCycleThresholdOne) {
  const PushState st = forward_push(cycle(2), 0, 0.2, 1.0);
  EXPECT_EQ(st.pushes, 0u);
  EXPECT_EQ(st.reserve, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(st.residue[0], 1.0);
  EXPECT_EQ(st.r_sum, 1.0);
}

TEST(ForwardPush, UniformDistributions) {
  const Graph single = Graph::from_edges(1, {});
  const std::vector<std::pair<NodeId, double>> one = {{0, 1.0}};
  EXPECT_EQ(forward_push_from_distribution(single, one, 0.2, 0.1).reserve[0],
            1.0);

  const Graph g = cycle(2);
  const Eigen::MatrixXd pi = dense_ppr_matrix(g, 0.2);
  const std::vector<std::pair<NodeId, double>> uniform = {{0, 0.5}, {1, 0.5}};
  const PushState st = forward_push_from_distribution(g, uniform, 0.2, 1e-4);
  for (int t = 0; t < 2; ++t) {
    const double truth = 0.5 * pi(0, t) + 0.5 * pi(1, t);
    const double rhs = st.reserve[t] + st.residue[0] * pi(0, t) +
                       st.residue[1] * pi(1, t);
    EXPECT_NEAR(truth, rhs, 1e-9);
  }
}

TEST(BudgetedPush, TwoCycleConservesMass) {
  PushBudget budget;
  budget.walk_cost = 5.0;
  budget.walk_density = 1e4;
  MassChecker checker;
  forward_push_budgeted(cycle(2), 0, 0.2, budget, checker.observer());
  EXPECT_GT(checker.checks, 0u);
  EXPECT_EQ(checker.violations, 0u);
}

}  // namespace
}  // namespace fora
