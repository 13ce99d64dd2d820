#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "cbwk/error.hpp"
#include "cbwk/instance.hpp"
#include "cbwk/offline.hpp"
#include "cbwk/rng.hpp"
#include "cbwk/sim.hpp"
#include "doctest.h"

using namespace cbwk;

namespace {

BanditInstance make(std::vector<double> mu, std::vector<double> cost,
                    double budget, int horizon) {
  BanditInstance inst;
  inst.mu = std::move(mu);
  inst.cost = std::move(cost);
  inst.budget = budget;
  inst.horizon = horizon;
  return inst;
}

std::string trace_text(const EpisodeTrace& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

void check_trace_invariants(const EpisodeTrace& trace,
                            const BanditInstance& inst) {
  REQUIRE(trace.rounds.size() == static_cast<std::size_t>(inst.horizon));
  std::vector<int> counts(inst.arms(), 0);
  double remaining = inst.budget;
  double realized = 0.0, expected = 0.0, spend = 0.0;
  for (int t = 1; t <= inst.horizon; ++t) {
    const RoundRecord& rec = trace.rounds[t - 1];
    CHECK(rec.round == t);
    REQUIRE(rec.rewards.size() == rec.superarm.size());
    double round_spend = 0.0, round_expected = 0.0;
    int prev = -1;
    for (std::size_t k = 0; k < rec.superarm.size(); ++k) {
      int arm = rec.superarm[k];
      REQUIRE(arm >= 0);
      REQUIRE(arm < inst.arms());
      CHECK(arm > prev);  // strictly ascending: each arm at most once
      prev = arm;
      counts[arm] += 1;
      round_spend += inst.cost[arm];
      round_expected += inst.mu[arm];
      realized += rec.rewards[k];
    }
    CHECK(rec.spend == doctest::Approx(round_spend).epsilon(1e-12));
    CHECK(rec.expected == doctest::Approx(round_expected).epsilon(1e-12));
    remaining -= round_spend;
    CHECK(rec.budget_remaining == doctest::Approx(remaining).epsilon(1e-9));
    CHECK(rec.budget_remaining >= -1e-6);  // never meaningfully overdrawn
    spend += round_spend;
    expected += round_expected;
  }
  CHECK(trace.pull_counts == counts);
  CHECK(trace.total_spend == doctest::Approx(spend).epsilon(1e-9));
  CHECK(trace.total_expected == doctest::Approx(expected).epsilon(1e-9));
  CHECK(trace.total_realized == doctest::Approx(realized).epsilon(1e-9));
  CHECK(trace.total_spend <= inst.budget + 1e-6);
}

}  // namespace

TEST_CASE("same seed gives byte-identical traces, different seed differs") {
  BanditInstance inst = gen_iid_uniform(6, 60, 9.0, 2024);
  PolicySpec spec;
  spec.kind = PolicyKind::LpUcb;
  EpisodeTrace a = run_episode(inst, spec, RewardKind::Bernoulli, 5);
  EpisodeTrace b = run_episode(inst, spec, RewardKind::Bernoulli, 5);
  EpisodeTrace c = run_episode(inst, spec, RewardKind::Bernoulli, 6);
  CHECK(trace_text(a) == trace_text(b));
  CHECK(a.total_realized == b.total_realized);
  CHECK(a.total_realized != c.total_realized);
}

TEST_CASE("degenerate rewards make realized equal expected exactly") {
  BanditInstance inst = gen_iid_uniform(5, 40, 6.0, 91);
  for (PolicyKind kind :
       {PolicyKind::GreedyUcb, PolicyKind::LpUcb, PolicyKind::FixedBudget}) {
    PolicySpec spec;
    spec.kind = kind;
    EpisodeTrace t = run_episode(inst, spec, RewardKind::DegenerateMean, 1);
    CHECK(t.total_realized == t.total_expected);
  }
}

TEST_CASE("trace invariants hold across policies and reward models") {
  Rng meta(1234);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(meta.uniform01() * 6);
    int horizon = 5 + static_cast<int>(meta.uniform01() * 40);
    double budget = meta.uniform(0.0, 0.7 * horizon);
    BanditInstance inst =
        gen_iid_uniform(n, horizon, budget, 7000 + trial);
    PolicySpec spec;
    spec.kind = static_cast<PolicyKind>(trial % 3);
    spec.ucb.kind =
        trial % 2 ? UcbConfig::Kind::Alpha : UcbConfig::Kind::Rad;
    RewardKind rk =
        trial % 5 ? RewardKind::Bernoulli : RewardKind::DegenerateMean;
    EpisodeTrace trace = run_episode(inst, spec, rk, 9000 + trial);
    check_trace_invariants(trace, inst);
    if (rk == RewardKind::Bernoulli)
      for (const RoundRecord& rec : trace.rounds)
        for (double r : rec.rewards) CHECK((r == 0.0 || r == 1.0));
    // The recorded final estimator state equals a recomputation from the log.
    std::vector<double> sums(inst.arms(), 0.0);
    std::vector<int> pulls(inst.arms(), 0);
    for (const RoundRecord& rec : trace.rounds)
      for (std::size_t k = 0; k < rec.superarm.size(); ++k) {
        sums[rec.superarm[k]] += rec.rewards[k];
        pulls[rec.superarm[k]] += 1;
      }
    for (int i = 0; i < inst.arms(); ++i) {
      double want = pulls[i] > 0 ? sums[i] / pulls[i] : 0.0;
      CHECK(trace.final_emp_mean[i] == want);
    }
  }
}

TEST_CASE("pseudo_regret basics") {
  BanditInstance inst = gen_iid_uniform(4, 30, 5.0, 55);
  PolicySpec spec;
  spec.kind = PolicyKind::GreedyUcb;
  EpisodeTrace trace = run_episode(inst, spec, RewardKind::Bernoulli, 3);
  double r = pseudo_regret(trace, inst);
  CHECK(r >= -1e-6);
  double opt = lp_opt_fractional(inst.mu, inst.cost, inst.budget, inst.horizon)
                   .opt_value;
  CHECK(r == doctest::Approx(opt - trace.total_expected));

  // Shape mismatches are rejected.
  BanditInstance other = gen_iid_uniform(5, 30, 5.0, 56);
  CHECK_THROWS_AS(pseudo_regret(trace, other), std::invalid_argument);
  BanditInstance shorter = inst;
  shorter.horizon = 29;
  CHECK_THROWS_AS(pseudo_regret(trace, shorter), std::invalid_argument);
}

TEST_CASE("zero budget means zero pulls and zero regret") {
  BanditInstance inst = make({0.9, 0.5}, {0.2, 0.1}, 0.0, 10);
  for (PolicyKind kind :
       {PolicyKind::GreedyUcb, PolicyKind::LpUcb, PolicyKind::FixedBudget}) {
    PolicySpec spec;
    spec.kind = kind;
    EpisodeTrace trace = run_episode(inst, spec, RewardKind::Bernoulli, 8);
    CHECK(trace.total_spend == 0.0);
    CHECK(trace.pull_counts == std::vector<int>{0, 0});
    CHECK(pseudo_regret(trace, inst) == 0.0);
  }
}

TEST_CASE("golden trace for an exactly representable episode") {
  // All quantities are dyadic rationals, so every arithmetic step is exact
  // and the serialized trace is reproducible byte for byte.
  BanditInstance inst = make({0.5, 0.25}, {0.25, 0.25}, 1.5, 3);
  PolicySpec spec;
  spec.kind = PolicyKind::GreedyUcb;
  EpisodeTrace trace = run_episode(inst, spec, RewardKind::DegenerateMean, 1);
  CHECK(trace_text(trace) ==
        "round,superarm,spend,budget_remaining,expected_reward\n"
        "1,1;2,0.5,1,0.75\n"
        "2,1;2,0.5,0.5,0.75\n"
        "3,1;2,0.5,0,0.75\n");
  CHECK(trace.total_expected == 2.25);
  CHECK(trace.total_spend == 1.5);
  CHECK(trace.final_emp_mean == std::vector<double>{0.5, 0.25});
}

TEST_CASE("run_episode validates the instance") {
  BanditInstance bad = make({0.5}, {0.5}, -1.0, 3);
  PolicySpec spec;
  CHECK_THROWS_AS(run_episode(bad, spec, RewardKind::Bernoulli, 1),
                  std::invalid_argument);
}

TEST_CASE("write_trace_file round-trips through the filesystem") {
  BanditInstance inst = make({0.5, 0.25}, {0.25, 0.25}, 1.5, 3);
  PolicySpec spec;
  EpisodeTrace trace = run_episode(inst, spec, RewardKind::DegenerateMean, 1);
  std::string path = "trace_roundtrip_test.csv";
  write_trace_file(trace, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == trace_text(trace));
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_trace_file(trace, "/nonexistent/dir/trace.csv"),
                  IoError);
}
