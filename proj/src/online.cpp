#include "cbwk/online.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace cbwk {

namespace {

double ucb_one(double mean, int pulls, int round, const UcbConfig& cfg) {
  double radius;
  if (cfg.kind == UcbConfig::Kind::Alpha) {
    double t = std::max(round, 1);
    radius = std::sqrt(cfg.alpha * std::log(t) / pulls);
  } else {
    radius = rad(mean, pulls, cfg.c_rad);
  }
  return std::min(1.0, mean + radius);
}

// Arms with at least one observation, with their optimistic indices. An arm
// that round 1 could not afford has a cost above every later remaining
// budget (budgets only shrink), so arms without observations are permanently
// unaffordable and are excluded from planning.
struct ActiveArms {
  std::vector<int> index;  // original arm ids, ascending
  std::vector<double> values;
  std::vector<double> costs;
};

ActiveArms active_arms(const UcbState& state, std::span<const double> costs,
                       const UcbConfig& cfg) {
  ActiveArms act;
  for (int i = 0; i < state.arms(); ++i) {
    if (state.pulls[i] < 1) continue;
    act.index.push_back(i);
    act.values.push_back(
        ucb_one(state.emp_mean(i), state.pulls[i], state.round, cfg));
    act.costs.push_back(costs[i]);
  }
  return act;
}

void check_round_args(const UcbState& state, std::span<const double> costs,
                      int round, int horizon, const char* where) {
  if (static_cast<std::size_t>(state.arms()) != costs.size())
    throw std::invalid_argument(std::string(where) +
                                ": state and costs disagree on arm count");
  if (round < 2 || round > horizon)
    throw std::invalid_argument(std::string(where) +
                                ": round must lie in [2, horizon]");
}

}  // namespace

double rad(double x, int n_samples, double c_rad) {
  if (n_samples < 1)
    throw std::invalid_argument("rad: need at least one sample");
  return std::sqrt(x * c_rad / n_samples) + c_rad / n_samples;
}

std::vector<double> ucb_values(const UcbState& state, const UcbConfig& cfg) {
  std::vector<double> out(state.arms());
  for (int i = 0; i < state.arms(); ++i) {
    if (state.pulls[i] < 1)
      throw std::invalid_argument("ucb_values: arm " + std::to_string(i + 1) +
                                  " has no observations");
    out[i] = ucb_one(state.emp_mean(i), state.pulls[i], state.round, cfg);
  }
  return out;
}

DualWeights DualWeights::ones(int d, double epsilon) {
  DualWeights w;
  w.v.assign(d, 1.0);
  w.epsilon = epsilon;
  return w;
}

std::vector<double> normalize_weights(const DualWeights& w) {
  double sum = 0.0;
  for (double v : w.v) {
    if (!(v > 0.0))
      throw std::invalid_argument("normalize_weights: weights must be positive");
    sum += v;
  }
  std::vector<double> y(w.v.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = w.v[j] / sum;
  return y;
}

void mw_update(DualWeights& w, std::span<const double> column) {
  if (column.size() != w.v.size())
    throw std::invalid_argument("mw_update: column length mismatch");
  for (std::size_t j = 0; j < column.size(); ++j) {
    if (!(column[j] >= 0.0 && column[j] <= 1.0))
      throw std::invalid_argument("mw_update: exponents must lie in [0,1]");
    if (column[j] != 0.0)
      w.v[j] *= std::pow(1.0 + w.epsilon, column[j]);
  }
}

double epsilon_for(double budget, int horizon, int n) {
  if (n < 1) throw std::invalid_argument("epsilon_for: n must be >= 1");
  double m = std::min(budget, static_cast<double>(horizon));
  if (!(m > 0.0)) return 0.999;
  double eps = std::sqrt(std::log(static_cast<double>(n) + 1.0) / m);
  return std::clamp(eps, 1e-9, 0.999);
}

PolicyDecision init_round(std::span<const double> costs, double round_budget) {
  PolicyDecision d;
  d.outcomes.assign(costs.size(), ArmOutcome::SkippedUnaffordable);
  double remaining = round_budget;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i] <= remaining + kBudgetSlack) {
      d.superarm.push_back(static_cast<int>(i));
      d.outcomes[i] = ArmOutcome::Pulled;
      remaining -= costs[i];
    }
  }
  return d;
}

PolicyDecision greedy_ucb_round(const UcbState& state, double remaining_budget,
                                int round, int horizon,
                                std::span<const double> costs,
                                const UcbConfig& cfg) {
  check_round_args(state, costs, round, horizon, "greedy_ucb_round");
  PolicyDecision d;
  d.outcomes.assign(costs.size(), ArmOutcome::SkippedUnaffordable);
  ActiveArms act = active_arms(state, costs, cfg);
  for (int arm : act.index) d.outcomes[arm] = ArmOutcome::SkippedNotInPlan;
  if (act.index.empty()) return d;

  const int rounds_left = horizon - round + 1;  // current round included
  Allocation plan =
      cbwk_greedy(act.values, act.costs, remaining_budget, rounds_left);
  double budget = remaining_budget;
  for (std::size_t k = 0; k < act.index.size(); ++k) {  // ascending arm id
    if (plan.counts[k] < 1) continue;
    int arm = act.index[k];
    if (act.costs[k] <= budget + kBudgetSlack) {
      d.superarm.push_back(arm);
      d.outcomes[arm] = ArmOutcome::Pulled;
      budget -= act.costs[k];
    } else {
      d.outcomes[arm] = ArmOutcome::SkippedUnaffordable;
    }
  }
  return d;
}

PolicyDecision lp_ucb_round(const UcbState& state, DualWeights& weights,
                            const CostMatrix& m, double remaining_budget,
                            int round, int horizon,
                            std::span<const double> costs,
                            const UcbConfig& cfg) {
  check_round_args(state, costs, round, horizon, "lp_ucb_round");
  if (m.n != state.arms())
    throw std::invalid_argument("lp_ucb_round: cost matrix arm count mismatch");
  PolicyDecision d;
  d.outcomes.assign(costs.size(), ArmOutcome::SkippedUnaffordable);
  ActiveArms act = active_arms(state, costs, cfg);
  for (int arm : act.index) d.outcomes[arm] = ArmOutcome::SkippedNotInPlan;
  if (act.index.empty()) return d;

  // Price each arm's column under the normalized weights. Only two rows of
  // column i are nonzero: the arm's own cap row and the money row.
  const std::vector<double> y = normalize_weights(weights);
  const int n = m.n;
  std::vector<double> bpb(act.index.size());
  for (std::size_t k = 0; k < act.index.size(); ++k) {
    int arm = act.index[k];
    double est_cost = y[arm] * m.at(arm, arm) + y[n] * m.at(n, arm);
    bpb[k] = act.values[k] / est_cost;
  }
  std::vector<std::size_t> order(act.index.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bpb[a] > bpb[b]; });

  // Walk the ranking with a virtual budget that reserves each taken arm's
  // full plan for the remaining rounds; an arm enters the super-arm only if
  // the budget survives all estimated-better arms' plans.
  const int rounds_left = horizon - round + 1;
  double virtual_budget = remaining_budget;
  double actual_budget = remaining_budget;
  for (std::size_t k : order) {
    int arm = act.index[k];
    double planned = std::floor((virtual_budget + kBudgetSlack) / act.costs[k]);
    planned = std::min(planned, static_cast<double>(rounds_left));
    if (planned < 1.0) continue;  // not in the plan
    if (act.costs[k] <= actual_budget + kBudgetSlack) {
      d.superarm.push_back(arm);
      d.outcomes[arm] = ArmOutcome::Pulled;
      actual_budget -= act.costs[k];
      virtual_budget -= act.costs[k] * planned;
      mw_update(weights, m.column(arm));
    } else {
      d.outcomes[arm] = ArmOutcome::SkippedUnaffordable;
    }
  }
  std::sort(d.superarm.begin(), d.superarm.end());
  return d;
}

PolicyDecision fixed_budget_round(const UcbState& state,
                                  double per_round_budget,
                                  double remaining_budget,
                                  std::span<const double> costs,
                                  const UcbConfig& cfg) {
  if (static_cast<std::size_t>(state.arms()) != costs.size())
    throw std::invalid_argument(
        "fixed_budget_round: state and costs disagree on arm count");
  PolicyDecision d;
  d.outcomes.assign(costs.size(), ArmOutcome::SkippedUnaffordable);
  ActiveArms act = active_arms(state, costs, cfg);
  for (int arm : act.index) d.outcomes[arm] = ArmOutcome::SkippedNotInPlan;
  if (act.index.empty()) return d;

  const double round_budget = std::min(per_round_budget, remaining_budget);
  Allocation plan = cbwk_greedy(act.values, act.costs, round_budget, 1);
  double budget = round_budget;
  for (std::size_t k = 0; k < act.index.size(); ++k) {
    if (plan.counts[k] < 1) continue;
    int arm = act.index[k];
    if (act.costs[k] <= budget + kBudgetSlack) {
      d.superarm.push_back(arm);
      d.outcomes[arm] = ArmOutcome::Pulled;
      budget -= act.costs[k];
    } else {
      d.outcomes[arm] = ArmOutcome::SkippedUnaffordable;
    }
  }
  return d;
}

namespace {

PolicyDecision empty_decision(int n) {
  PolicyDecision d;
  d.outcomes.assign(n, ArmOutcome::SkippedUnaffordable);
  return d;
}

class GreedyUcbPolicy final : public Policy {
 public:
  GreedyUcbPolicy(const BanditInstance& inst, const UcbConfig& cfg)
      : state_(inst.arms()),
        cfg_(cfg),
        costs_(inst.cost),
        horizon_(inst.horizon) {}

  std::string_view name() const override { return "greedy-ucb"; }

  PolicyDecision select(int round, double remaining_budget) override {
    state_.round = round;
    if (round <= 1) return init_round(costs_, remaining_budget);
    return greedy_ucb_round(state_, remaining_budget, round, horizon_, costs_,
                            cfg_);
  }

  void observe(int arm, double reward) override { state_.observe(arm, reward); }
  const UcbState& state() const override { return state_; }

 private:
  UcbState state_;
  UcbConfig cfg_;
  std::vector<double> costs_;
  int horizon_;
};

class LpUcbPolicy final : public Policy {
 public:
  LpUcbPolicy(const BanditInstance& inst, const UcbConfig& cfg)
      : state_(inst.arms()),
        cfg_(cfg),
        costs_(inst.cost),
        horizon_(inst.horizon),
        weights_(DualWeights::ones(
            inst.arms() + 1,
            epsilon_for(inst.budget, inst.horizon, inst.arms()))) {
    if (inst.budget > 0.0)
      matrix_ = build_cost_matrix(inst.cost, inst.budget, inst.horizon);
  }

  std::string_view name() const override { return "lp-ucb"; }

  PolicyDecision select(int round, double remaining_budget) override {
    state_.round = round;
    if (round <= 1) return init_round(costs_, remaining_budget);
    if (!matrix_) return empty_decision(state_.arms());  // zero total budget
    return lp_ucb_round(state_, weights_, *matrix_, remaining_budget, round,
                        horizon_, costs_, cfg_);
  }

  void observe(int arm, double reward) override { state_.observe(arm, reward); }
  const UcbState& state() const override { return state_; }

 private:
  UcbState state_;
  UcbConfig cfg_;
  std::vector<double> costs_;
  int horizon_;
  DualWeights weights_;
  std::optional<CostMatrix> matrix_;
};

class FixedBudgetPolicy final : public Policy {
 public:
  FixedBudgetPolicy(const BanditInstance& inst, const UcbConfig& cfg,
                    double per_round_budget)
      : state_(inst.arms()),
        cfg_(cfg),
        costs_(inst.cost),
        per_round_(per_round_budget > 0.0
                       ? per_round_budget
                       : inst.budget / inst.horizon) {}

  std::string_view name() const override { return "fixed-budget"; }

  PolicyDecision select(int round, double remaining_budget) override {
    state_.round = round;
    if (round <= 1)
      return init_round(costs_, std::min(per_round_, remaining_budget));
    return fixed_budget_round(state_, per_round_, remaining_budget, costs_,
                              cfg_);
  }

  void observe(int arm, double reward) override { state_.observe(arm, reward); }
  const UcbState& state() const override { return state_; }

 private:
  UcbState state_;
  UcbConfig cfg_;
  std::vector<double> costs_;
  double per_round_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const BanditInstance& inst,
                                    const PolicySpec& spec) {
  if (auto err = validate_instance(inst))
    throw std::invalid_argument("make_policy: " + *err);
  UcbConfig cfg = spec.ucb;
  if (cfg.kind == UcbConfig::Kind::Rad) {
    double n = inst.arms();
    cfg.c_rad = spec.kappa * std::log(n * (n + 1.0) * inst.horizon);
  }
  switch (spec.kind) {
    case PolicyKind::GreedyUcb:
      return std::make_unique<GreedyUcbPolicy>(inst, cfg);
    case PolicyKind::LpUcb:
      return std::make_unique<LpUcbPolicy>(inst, cfg);
    case PolicyKind::FixedBudget:
      return std::make_unique<FixedBudgetPolicy>(inst, cfg,
                                                 spec.per_round_budget);
  }
  throw std::invalid_argument("make_policy: unknown policy kind");
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::GreedyUcb:
      return "greedy-ucb";
    case PolicyKind::LpUcb:
      return "lp-ucb";
    case PolicyKind::FixedBudget:
      return "fixed-budget";
  }
  return "unknown";
}

PolicyKind policy_kind_from_name(std::string_view name) {
  if (name == "greedy-ucb") return PolicyKind::GreedyUcb;
  if (name == "lp-ucb") return PolicyKind::LpUcb;
  if (name == "fixed-budget") return PolicyKind::FixedBudget;
  throw std::invalid_argument(
      "unknown policy '" + std::string(name) +
      "' (expected greedy-ucb, lp-ucb, or fixed-budget)");
}

}  // namespace cbwk
