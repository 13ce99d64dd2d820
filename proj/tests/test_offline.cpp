#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cbwk/offline.hpp"
#include "cbwk/rng.hpp"
#include "doctest.h"

using namespace cbwk;

namespace {

// Exhaustive oracle: tries every count vector with 0 <= k_i <= horizon and
// spend within budget (same slack rule as the solvers) and keeps the best
// value. Exponential; only for tiny instances.
double enum_best_value(const std::vector<double>& values,
                       const std::vector<double>& costs, double budget,
                       int horizon) {
  const int n = static_cast<int>(values.size());
  std::vector<int> counts(n, 0);
  double best = 0.0;
  auto recurse = [&](auto&& self, int arm, double spent) -> void {
    if (arm == n) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += counts[i] * values[i];
      best = std::max(best, v);
      return;
    }
    for (int k = 0; k <= horizon; ++k) {
      double s = spent + k * costs[arm];
      if (s > budget + kBudgetSlack) break;
      counts[arm] = k;
      self(self, arm + 1, s);
    }
    counts[arm] = 0;
  };
  recurse(recurse, 0, 0.0);
  return best;
}

// Vertex oracle for the two-variable relaxation: the maximum of a linear
// objective over {0 <= z_i <= T, c1 z1 + c2 z2 <= B} is attained at an
// intersection of two constraint boundaries. Enumerates all candidate
// intersections, filters to feasible ones, evaluates the objective.
double vertex_best_value_2d(const std::vector<double>& values,
                            const std::vector<double>& costs, double budget,
                            int horizon) {
  const double T = horizon;
  std::vector<std::pair<double, double>> candidates;
  for (double z1 : {0.0, T}) {
    for (double z2 : {0.0, T}) candidates.emplace_back(z1, z2);
    candidates.emplace_back(z1, (budget - costs[0] * z1) / costs[1]);
  }
  for (double z2 : {0.0, T})
    candidates.emplace_back((budget - costs[1] * z2) / costs[0], z2);
  double best = 0.0;
  for (auto [z1, z2] : candidates) {
    if (z1 < -1e-12 || z1 > T + 1e-12 || z2 < -1e-12 || z2 > T + 1e-12)
      continue;
    if (costs[0] * z1 + costs[1] * z2 > budget + 1e-9) continue;
    best = std::max(best, values[0] * z1 + values[1] * z2);
  }
  return best;
}

}  // namespace

TEST_CASE("bangperbuck_order sorts by ratio, ties by ascending index") {
  // Pairwise comparator oracle: for every pair in the returned order, the
  // earlier arm's ratio is not smaller, and equal ratios keep index order.
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 8);
    std::vector<double> values(n), costs(n);
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01();
      // Coarse grid makes ratio ties likely.
      costs[i] = (1 + static_cast<int>(rng.uniform01() * 4)) * 0.25;
      if (trial % 3 == 0) values[i] = (1 + static_cast<int>(values[i] * 2)) * 0.25;
    }
    std::vector<int> order = bangperbuck_order(values, costs);
    REQUIRE(order.size() == static_cast<std::size_t>(n));
    std::vector<int> sorted_ids = order;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    for (int i = 0; i < n; ++i) CHECK(sorted_ids[i] == i);  // a permutation
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      double ra = values[order[k]] / costs[order[k]];
      double rb = values[order[k + 1]] / costs[order[k + 1]];
      CHECK(!(rb > ra));
      if (ra == rb) CHECK(order[k] < order[k + 1]);
    }
  }
  CHECK(bangperbuck_order(std::vector<double>{2, 1, 2},
                          std::vector<double>{1, 0.5, 1}) ==
        std::vector<int>{0, 1, 2});
  CHECK(bangperbuck_order(std::vector<double>{1, 2},
                          std::vector<double>{1, 1}) == std::vector<int>{1, 0});
}

TEST_CASE("cbwk_greedy frozen example") {
  std::vector<double> mu = {0.8, 0.6, 0.4};
  std::vector<double> c = {0.4, 0.5, 0.9};
  Allocation alloc = cbwk_greedy(mu, c, 3.7, 4);
  CHECK(alloc.counts == std::vector<int>{4, 4, 0});
  CHECK(alloc.total_value == doctest::Approx(5.6));
  CHECK(alloc.total_cost == doctest::Approx(3.6));
}

TEST_CASE("cbwk_greedy honors caps, budget, and degenerate inputs") {
  std::vector<double> mu = {0.9};
  std::vector<double> c = {0.3};
  CHECK(cbwk_greedy(mu, c, 10.0, 4).counts == std::vector<int>{4});
  CHECK(cbwk_greedy(mu, c, 0.65, 4).counts == std::vector<int>{2});
  CHECK(cbwk_greedy(mu, c, 0.0, 4).counts == std::vector<int>{0});
  CHECK(cbwk_greedy(mu, c, 10.0, 0).counts == std::vector<int>{0});
  // A pull affordable in exact arithmetic survives floating-point drift:
  // 0.3 - 0.1 < 0.2 in binary, but the slack absorbs the difference.
  std::vector<double> c2 = {0.1, 0.2};
  Allocation tight = cbwk_greedy(std::vector<double>{1.0, 1.0}, c2, 0.3, 1);
  CHECK(tight.counts == std::vector<int>{1, 1});
}

TEST_CASE("cbwk_greedy input validation") {
  std::vector<double> v = {0.5}, c = {0.5};
  CHECK_THROWS_AS(cbwk_greedy(std::vector<double>{}, std::vector<double>{},
                              1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbwk_greedy(std::vector<double>{0.5, 0.5}, c, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbwk_greedy(v, std::vector<double>{0.0}, 1.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cbwk_greedy(v, std::vector<double>{-0.5}, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("lp_opt_fractional frozen example") {
  std::vector<double> mu = {0.9, 0.5};
  std::vector<double> c = {0.5, 0.5};
  FractionalSolution sol = lp_opt_fractional(mu, c, 2.75, 4);
  CHECK(sol.zeta[0] == 4.0);
  CHECK(sol.zeta[1] == 1.5);
  CHECK(sol.opt_value == doctest::Approx(4.35));
}

TEST_CASE("lp_opt_fractional matches the vertex oracle on two arms") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values = {rng.uniform01(), rng.uniform01()};
    std::vector<double> costs = {rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)};
    int horizon = 1 + static_cast<int>(rng.uniform01() * 6);
    double budget = rng.uniform(0.0, 2.0 * horizon);
    FractionalSolution sol = lp_opt_fractional(values, costs, budget, horizon);
    double oracle = vertex_best_value_2d(values, costs, budget, horizon);
    CHECK(sol.opt_value == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("lp_opt_fractional solution structure") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 6);
    int horizon = 1 + static_cast<int>(rng.uniform01() * 8);
    std::vector<double> values(n), costs(n);
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01();
      costs[i] = rng.uniform(0.05, 1.0);
    }
    double budget = rng.uniform(0.0, 1.5 * horizon);
    FractionalSolution sol = lp_opt_fractional(values, costs, budget, horizon);
    double spend = 0.0, value = 0.0;
    int interior = 0;
    for (int i = 0; i < n; ++i) {
      CHECK(sol.zeta[i] >= 0.0);
      CHECK(sol.zeta[i] <= horizon + 1e-12);
      if (sol.zeta[i] > 1e-12 && sol.zeta[i] < horizon - 1e-12) ++interior;
      spend += sol.zeta[i] * costs[i];
      value += sol.zeta[i] * values[i];
    }
    CHECK(interior <= 1);  // capped fractional knapsack: one marginal arm
    CHECK(spend <= budget + 1e-9);
    CHECK(value == doctest::Approx(sol.opt_value).epsilon(1e-12));
  }
}

TEST_CASE("dp_exact matches exhaustive enumeration on small instances") {
  Rng rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 4);
    int horizon = 1 + static_cast<int>(rng.uniform01() * 4);
    std::vector<double> values(n), costs(n);
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01();
      costs[i] = (1 + static_cast<int>(rng.uniform01() * 20)) * 0.05;
    }
    double budget = rng.uniform(0.0, 2.5);
    Allocation dp = dp_exact(values, costs, budget, horizon, 20);
    double oracle = enum_best_value(values, costs, budget, horizon);
    CHECK(dp.total_value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(dp.total_cost <= budget + 1e-7);
    for (int i = 0; i < n; ++i) {
      CHECK(dp.counts[i] >= 0);
      CHECK(dp.counts[i] <= horizon);
    }
  }
}

TEST_CASE("dp_exact prefers the lexicographically smallest optimal counts") {
  // Two optima with exactly equal values (all quantities are dyadic
  // rationals, so comparisons are exact): (1,0) vs (0,1) and (1,0) vs (0,2).
  Allocation a = dp_exact(std::vector<double>{0.5, 0.5},
                          std::vector<double>{0.25, 0.25}, 0.25, 1, 4);
  CHECK(a.counts == std::vector<int>{0, 1});
  Allocation b = dp_exact(std::vector<double>{0.6, 0.3},
                          std::vector<double>{0.5, 0.25}, 0.5, 2, 4);
  CHECK(b.counts == std::vector<int>{0, 2});
}

TEST_CASE("dp_exact input validation") {
  std::vector<double> v = {0.5}, c = {0.333};
  std::vector<double> half = {0.5};
  CHECK_THROWS_AS(dp_exact(v, c, 1.0, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS(dp_exact(v, half, 1.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(dp_exact(v, half, -1.0, 1, 2), std::invalid_argument);
  // Size guard: scaled budget times arms exceeds the oracle-grade limit.
  CHECK_THROWS_AS(dp_exact(std::vector<double>{0.5, 0.5},
                           std::vector<double>{1.0, 1.0}, 2e7, 10000000, 2),
                  std::invalid_argument);
}

TEST_CASE("greedy_2approx upgrades to a dominant single arm, keeps ties") {
  Allocation up = cbwk_greedy_2approx(std::vector<double>{0.5, 1.0},
                                      std::vector<double>{0.1, 1.0}, 1.0, 1);
  CHECK(up.counts == std::vector<int>{0, 1});
  CHECK(up.total_value == doctest::Approx(1.0));
  // On a value tie the plain greedy allocation is kept.
  Allocation tie = cbwk_greedy_2approx(std::vector<double>{0.5, 0.5},
                                       std::vector<double>{0.5, 1.0}, 1.0, 1);
  CHECK(tie.counts == std::vector<int>{1, 0});
}

TEST_CASE("solver chain inequalities on random instances") {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 6);
    int horizon = 1 + static_cast<int>(rng.uniform01() * 5);
    std::vector<double> values(n), costs(n);
    double value_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01();
      costs[i] = (1 + static_cast<int>(rng.uniform01() * 20)) * 0.05;
      value_sum += values[i];
    }
    double budget = rng.uniform(0.0, 3.0);
    Allocation greedy = cbwk_greedy(values, costs, budget, horizon);
    Allocation greedy2 = cbwk_greedy_2approx(values, costs, budget, horizon);
    Allocation dp = dp_exact(values, costs, budget, horizon, 20);
    FractionalSolution lp = lp_opt_fractional(values, costs, budget, horizon);
    // Relaxation dominates the exact integral optimum dominates greedy.
    CHECK(dp.total_value <= lp.opt_value + 1e-9);
    CHECK(greedy.total_value <= dp.total_value + 1e-9);
    CHECK(greedy2.total_value <= dp.total_value + 1e-9);
    // Greedy loses at most one pull per arm versus the relaxation.
    CHECK(lp.opt_value - greedy.total_value <= value_sum + 1e-9);
    // The fallback makes greedy a genuine 2-approximation.
    CHECK(greedy2.total_value >= dp.total_value / 2.0 - 1e-9);
    CHECK(greedy2.total_value >= greedy.total_value - 1e-12);
    // Feasibility of every integral allocation.
    for (const Allocation* a : {&greedy, &greedy2, &dp}) {
      CHECK(a->total_cost <= budget + 1e-7);
      for (int i = 0; i < n; ++i) {
        CHECK(a->counts[i] >= 0);
        CHECK(a->counts[i] <= horizon);
      }
    }
  }
}

TEST_CASE("build_cost_matrix frozen example and properties") {
  std::vector<double> costs = {0.2, 0.7};
  CostMatrix m = build_cost_matrix(costs, 5.0, 5);
  CHECK(m.n == 2);
  CHECK(m.d() == 3);
  CHECK(m.b_prime == 5.0);
  CHECK(m.at(0, 0) == 1.0);  // b' / T
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 1) == 0.0);
  CHECK(m.at(1, 0) == 0.0);
  CHECK(m.at(2, 0) == doctest::Approx(0.2));  // c_i * b' / B
  CHECK(m.at(2, 1) == doctest::Approx(0.7));
  std::vector<double> col = m.column(0);
  REQUIRE(col.size() == 3);
  CHECK(col[0] == m.at(0, 0));
  CHECK(col[1] == m.at(1, 0));
  CHECK(col[2] == m.at(2, 0));

  // Budget above the horizon: money row shrinks, cap rows stay at 1.
  CostMatrix wide = build_cost_matrix(costs, 20.0, 5);
  CHECK(wide.b_prime == 5.0);
  CHECK(wide.at(0, 0) == 1.0);
  CHECK(wide.at(2, 0) == doctest::Approx(0.2 * 5.0 / 20.0));
  // Budget below the horizon: cap rows shrink, money row stays <= 1.
  CostMatrix tall = build_cost_matrix(costs, 2.0, 5);
  CHECK(tall.b_prime == 2.0);
  CHECK(tall.at(0, 0) == doctest::Approx(0.4));
  CHECK(tall.at(2, 1) == doctest::Approx(0.7));

  // Every entry lies in [0,1] for random shapes.
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 8);
    std::vector<double> cs(n);
    for (double& c : cs) c = rng.uniform(0.05, 1.0);
    int horizon = 1 + static_cast<int>(rng.uniform01() * 50);
    double budget = rng.uniform(0.1, 2.0 * horizon);
    CostMatrix mm = build_cost_matrix(cs, budget, horizon);
    for (int r = 0; r < mm.d(); ++r)
      for (int c = 0; c < mm.n; ++c) {
        CHECK(mm.at(r, c) >= 0.0);
        CHECK(mm.at(r, c) <= 1.0 + 1e-12);
      }
  }

  CHECK_THROWS_AS(build_cost_matrix(costs, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_cost_matrix(costs, 5.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_cost_matrix(std::vector<double>{1.5}, 5.0, 5),
                  std::invalid_argument);
}

TEST_CASE("lp_dual_witness is feasible and matches the primal optimum") {
  Rng rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.uniform01() * 8);
    int horizon = 1 + static_cast<int>(rng.uniform01() * 10);
    std::vector<double> values(n), costs(n);
    for (int i = 0; i < n; ++i) {
      values[i] = rng.uniform01();
      costs[i] = rng.uniform(0.05, 1.0);
    }
    double budget = rng.uniform(0.05, 1.5 * horizon);
    DualWitness w = lp_dual_witness(values, costs, budget, horizon);
    CostMatrix m = build_cost_matrix(costs, budget, horizon);
    REQUIRE(w.eta.size() == static_cast<std::size_t>(n + 1));
    for (double e : w.eta) CHECK(e >= 0.0);
    // Dual feasibility: each arm's column, priced by eta, covers its value.
    for (int i = 0; i < n; ++i) {
      double priced = w.eta[i] * m.at(i, i) + w.eta[n] * m.at(n, i);
      CHECK(priced >= values[i] - 1e-9);
    }
    // Strong duality: the witness value equals the primal optimum.
    double opt = lp_opt_fractional(values, costs, budget, horizon).opt_value;
    CHECK(std::abs(w.value - opt) <= 1e-6);
  }
  // Zero budget: all-zero dual, value 0.
  DualWitness z =
      lp_dual_witness(std::vector<double>{0.5}, std::vector<double>{0.5}, 0.0, 3);
  CHECK(z.value == 0.0);
  CHECK(z.eta == std::vector<double>{0.0, 0.0});
}

TEST_CASE("saturated budget caps every arm in all solvers") {
  std::vector<double> values = {0.9, 0.4, 0.7};
  std::vector<double> costs = {0.5, 0.25, 1.0};
  const int horizon = 6;
  double budget = horizon * (0.5 + 0.25 + 1.0);
  Allocation g = cbwk_greedy(values, costs, budget, horizon);
  CHECK(g.counts == std::vector<int>{6, 6, 6});
  FractionalSolution lp = lp_opt_fractional(values, costs, budget, horizon);
  for (double z : lp.zeta) CHECK(z == doctest::Approx(6.0));
  Allocation dp = dp_exact(values, costs, budget, horizon, 4);
  CHECK(dp.counts == std::vector<int>{6, 6, 6});
  CHECK(g.total_value == doctest::Approx(lp.opt_value));
}

TEST_CASE("write_allocation golden output") {
  Allocation alloc;
  alloc.counts = {2, 0, 5};
  alloc.total_value = 1.5;
  alloc.total_cost = 0.75;
  std::ostringstream out;
  write_allocation(alloc, out);
  CHECK(out.str() ==
        "counts = 2 0 5\n"
        "total_value = 1.5\n"
        "total_cost = 0.75\n");
}
