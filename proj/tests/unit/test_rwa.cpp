#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "netfec/error.hpp"
#include "netfec/gn_phy.hpp"
#include "netfec/network_model.hpp"
#include "netfec/rwa_optimizer.hpp"
#include "oracles.hpp"

using namespace netfec;

namespace {

// Every connected labelled graph on n nodes, links with 1..3 spans.
std::vector<Topology> all_connected_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) slots.push_back({a, b});
  }
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, "v" + std::to_string(i)});
  std::vector<Topology> out;
  for (unsigned mask = 1; mask < (1u << slots.size()); ++mask) {
    std::vector<Link> links;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (mask >> i & 1u) links.push_back({slots[i].first, slots[i].second, std::nullopt, 1 + static_cast<int>(i % 3)});
    }
    try {
      out.emplace_back("g" + std::to_string(mask), nodes, links);
    } catch (const Error&) {
      // disconnected
    }
  }
  return out;
}

std::shared_ptr<IlpInstance> instance_for(const Topology& topo, int k, int w, const RateFn& rate) {
  const auto co = default_coefficients(FiberParams{});
  const auto tr = uniform_traffic(topo.node_count());
  const auto paths = enumerate_candidates(topo, tr, k, co);
  return std::make_shared<IlpInstance>(build_instance(topo, paths, rate, tr, 32e9, w));
}

}  // namespace

TEST(Rwa, AllConnectedGraphsUpToFourNodesMatchBruteForce) {
  int checked = 0, positive = 0;
  // A coarse step rate produces many ties; the smooth one few.
  const RateFn smooth = capacity_rate;
  const RateFn stepped = [](double snr) { return std::floor(10.0 * std::log10(snr) / 3.0); };
  for (int n : {2, 3, 4}) {
    for (const auto& topo : all_connected_graphs(n)) {
      for (int w = 1; w <= 4; ++w) {
        for (const RateFn* rate : {&smooth, &stepped}) {
          const auto inst = instance_for(topo, 3, w, *rate);
          const auto want = oracle::brute_force_ilp(*inst);
          const auto plan = solve_max_min(inst);
          SCOPED_TRACE(topo.name() + " W=" + std::to_string(w));
          ASSERT_TRUE(plan.optimal);
          EXPECT_TRUE(is_feasible(*inst, plan.counts));
          EXPECT_NEAR(plan.objective, want.objective, 1e-9 * std::max(1.0, want.objective));
          EXPECT_GE(plan.upper_bound, plan.objective - 1e-9);
          if (want.objective > 0.0) {
            ++positive;
            EXPECT_TRUE(plan.lightpaths_minimal);
            EXPECT_EQ(static_cast<int>(plan.lightpaths.size()), want.lightpaths);
          }
          ++checked;
        }
      }
    }
  }
  // 1 + 4 + 38 connected graphs, four W values, two rate functions.
  EXPECT_EQ(checked, 43 * 4 * 2);
  EXPECT_GT(positive, checked / 3);
}

TEST(Rwa, PlanBookkeeping) {
  const auto topo = load_topology(NETFEC_DATA_DIR "/topologies/dtg.json");
  const auto co = default_coefficients(FiberParams{});
  const auto inst = instance_for(topo, 4, 6, capacity_rate);
  const auto greedy = greedy_plan(inst);
  EXPECT_TRUE(is_feasible(*inst, greedy.counts));
  const auto plan = solve_max_min(inst);
  ASSERT_TRUE(plan.optimal);
  EXPECT_GE(plan.objective, greedy.objective - 1e-12);
  EXPECT_GE(lp_relaxation_bound(*inst), plan.objective - 1e-9);

  // Rebuilding from counts gives the same objective.
  const auto again = make_plan(inst, plan.counts);
  EXPECT_NEAR(again.objective, plan.objective, 1e-12);
  EXPECT_EQ(static_cast<int>(again.lightpaths.size()), std::accumulate(plan.counts.begin(), plan.counts.end(), 0));

  const double n = topo.node_count();
  EXPECT_NEAR(plan.theta_bps(), n * (n - 1) * plan.objective * 32e9, 1e-6);
  const auto per_pair = plan.pair_throughput_bps();
  EXPECT_NEAR(*std::min_element(per_pair.begin(), per_pair.end()), plan.objective * 32e9, 1e-3);

  const auto bins = snr_distribution(plan, co);
  int total = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    total += bins[i].count;
    if (i) {
      EXPECT_LT(bins[i - 1].snr_db, bins[i].snr_db);
    }
  }
  EXPECT_EQ(total, plan.transceivers());
  EXPECT_GE(first_fit_blocked(plan), 0);
}

TEST(Rwa, EveryPairGetsALightpath) {
  const auto topo = load_topology(NETFEC_DATA_DIR "/topologies/gb4.json");
  const auto inst = instance_for(topo, 16, 80, capacity_rate);
  SolveOptions o;
  o.minimize_lightpaths = false;
  const auto plan = solve_max_min(inst, o);
  std::vector<int> per_pair(inst->pairs.size(), 0);
  for (const auto& lp : plan.lightpaths) ++per_pair[lp.pair];
  for (int c : per_pair) EXPECT_GE(c, 1);
}

TEST(Rwa, BudgetExhaustionKeepsAValidBound) {
  const auto topo = load_topology(NETFEC_DATA_DIR "/topologies/nsf.json");
  const auto inst = instance_for(topo, 16, 80, capacity_rate);
  SolveOptions o;
  o.node_budget = 50;
  o.minimize_lightpaths = false;
  const auto plan = solve_max_min(inst, o);
  EXPECT_TRUE(is_feasible(*inst, plan.counts));
  EXPECT_GE(plan.upper_bound, plan.objective);
  EXPECT_LE(plan.upper_bound, lp_relaxation_bound(*inst) + 1e-9);
  if (!plan.optimal) {
    EXPECT_GT(plan.bound_bps(), plan.theta_bps());
  }
}

TEST(Rwa, UncoveredPairIsAnError) {
  const auto topo = load_topology(NETFEC_DATA_DIR "/topologies/dtg.json");
  const auto co = default_coefficients(FiberParams{});
  const auto tr = uniform_traffic(topo.node_count());
  auto paths = enumerate_candidates(topo, tr, 2, co);
  paths.erase(paths.begin(), paths.begin() + 2);
  try {
    build_instance(topo, paths, capacity_rate, tr);
    FAIL() << "accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUncoveredPair);
  }
}
