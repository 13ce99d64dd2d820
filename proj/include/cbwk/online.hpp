#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "cbwk/instance.hpp"
#include "cbwk/offline.hpp"

namespace cbwk {

// Per-arm pull counts and reward sums observed so far. emp_mean is always the
// exact average of the observed rewards (a ratio of stored sums, never an
// incrementally updated mean).
struct UcbState {
  std::vector<int> pulls;
  std::vector<double> reward_sum;
  int round = 0;  // current round t, 1-based
  long long total_plays = 0;

  explicit UcbState(int n) : pulls(n, 0), reward_sum(n, 0.0) {}
  int arms() const { return static_cast<int>(pulls.size()); }
  double emp_mean(int arm) const {
    return pulls[arm] > 0 ? reward_sum[arm] / pulls[arm] : 0.0;
  }
  void observe(int arm, double reward) {
    pulls[arm] += 1;
    reward_sum[arm] += reward;
    total_plays += 1;
  }
};

// Choice of optimism bonus for the index estimates.
struct UcbConfig {
  enum class Kind {
    Alpha,  // emp_mean + sqrt(alpha * ln(t) / pulls)
    Rad,    // emp_mean + rad(emp_mean, pulls, c_rad)
  };
  Kind kind = Kind::Alpha;
  double alpha = 5.0;
  double c_rad = 1.0;
};

// Confidence radius sqrt(x * c_rad / n_samples) + c_rad / n_samples.
double rad(double x, int n_samples, double c_rad);

// Optimistic index per arm, clamped into [0,1]. Rejects any arm with zero
// pulls (indices are undefined before the first observation).
std::vector<double> ucb_values(const UcbState& state, const UcbConfig& cfg);

// Multiplicative-weights estimate of the dual resource prices. Weights start
// at 1 and never decrease.
struct DualWeights {
  std::vector<double> v;
  double epsilon = 0.5;

  static DualWeights ones(int d, double epsilon);
};

// v / sum(v). Requires every component positive.
std::vector<double> normalize_weights(const DualWeights& w);

// v_j *= (1 + epsilon)^column[j]. Exponents must lie in [0,1], so every
// factor is >= 1 and weights stay positive and non-decreasing.
void mw_update(DualWeights& w, std::span<const double> column);

// Learning rate sqrt(ln(n+1) / min(B, T)), clamped into (0, 0.999]; the
// multiplicative-weights update is only defined for epsilon in (0, 1).
double epsilon_for(double budget, int horizon, int n);

enum class ArmOutcome {
  Pulled,
  SkippedNotInPlan,      // planner assigned the arm zero pulls
  SkippedUnaffordable,   // cost exceeds the budget left for this round
};

struct PolicyDecision {
  std::vector<int> superarm;         // pulled arms, ascending
  std::vector<ArmOutcome> outcomes;  // one entry per arm
};

// Round 1: pull every arm the round budget still affords, scanning in
// ascending index order and decrementing as arms are taken.
PolicyDecision init_round(std::span<const double> costs, double round_budget);

// One round of the greedy-planner policy: plan with cbwk_greedy on the
// current optimistic indices, the remaining budget, and the rounds still to
// be played (current round included), then pull every planned arm that is
// still affordable, in ascending index order.
PolicyDecision greedy_ucb_round(const UcbState& state, double remaining_budget,
                                int round, int horizon,
                                std::span<const double> costs,
                                const UcbConfig& cfg);

// One round of the dual-price policy: rank arms by optimistic index divided
// by their price under the normalized dual weights, then walk that ranking
// with a virtual budget that reserves the full future plan of every arm taken
// so far. A taken arm is pulled once now, its planned spend is deducted from
// the virtual budget, and the weights of the resources it consumes are
// raised multiplicatively.
PolicyDecision lp_ucb_round(const UcbState& state, DualWeights& weights,
                            const CostMatrix& m, double remaining_budget,
                            int round, int horizon,
                            std::span<const double> costs,
                            const UcbConfig& cfg);

// One round of the fixed-budget baseline: plan with cbwk_greedy over a single
// round whose budget is min(per_round_budget, remaining_budget), and pull the
// planned arms. Unspent per-round budget is effectively lost, since later
// rounds are capped the same way; that is the baseline's structural weakness.
PolicyDecision fixed_budget_round(const UcbState& state,
                                  double per_round_budget,
                                  double remaining_budget,
                                  std::span<const double> costs,
                                  const UcbConfig& cfg);

// An online policy bound to one episode. Policies are single-use: create a
// fresh one per episode.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  // Decide the super-arm for round `round` (1-based) given the true
  // remaining budget. Must be called with rounds strictly increasing.
  virtual PolicyDecision select(int round, double remaining_budget) = 0;
  // Semi-bandit feedback for one pulled arm.
  virtual void observe(int arm, double reward) = 0;
  virtual const UcbState& state() const = 0;
};

enum class PolicyKind { GreedyUcb, LpUcb, FixedBudget };

struct PolicySpec {
  PolicyKind kind = PolicyKind::GreedyUcb;
  UcbConfig ucb;
  double kappa = 1.0;  // Rad only: c_rad = kappa * ln(n * (n+1) * horizon)
  double per_round_budget = -1.0;  // fixed-budget only; <= 0 means B / T
};

std::unique_ptr<Policy> make_policy(const BanditInstance& inst,
                                    const PolicySpec& spec);

const char* policy_name(PolicyKind kind);
PolicyKind policy_kind_from_name(std::string_view name);

}  // namespace cbwk
