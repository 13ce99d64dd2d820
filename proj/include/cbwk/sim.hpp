#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cbwk/instance.hpp"
#include "cbwk/online.hpp"

namespace cbwk {

// What happened in one round of an episode.
struct RoundRecord {
  int round = 0;                 // 1-based
  std::vector<int> superarm;     // pulled arms, ascending
  std::vector<double> rewards;   // realized rewards, aligned with superarm
  double expected = 0.0;         // sum of true means over the super-arm
  double spend = 0.0;
  double budget_remaining = 0.0;  // after this round
};

struct EpisodeTrace {
  std::vector<RoundRecord> rounds;  // one record per round, 1..horizon
  double total_realized = 0.0;
  double total_expected = 0.0;
  double total_spend = 0.0;
  std::vector<int> pull_counts;  // per arm
  // Final estimator state of the policy, for diagnostics and tests.
  std::vector<double> final_emp_mean;
};

// Plays one full episode: each round asks the policy for a super-arm, draws
// one reward per pulled arm, charges the true costs, and feeds the rewards
// back. Deterministic given (instance, policy configuration, seed).
EpisodeTrace run_episode(const BanditInstance& inst, Policy& policy,
                         RewardKind reward_kind, std::uint64_t seed);

// Convenience overload that builds a fresh policy from `spec`.
EpisodeTrace run_episode(const BanditInstance& inst, const PolicySpec& spec,
                         RewardKind reward_kind, std::uint64_t seed);

// Expected-value regret against the fractional-relaxation optimum computed
// on the true means. Never meaningfully negative (>= -1e-6). Rejects traces
// whose shape does not match the instance.
double pseudo_regret(const EpisodeTrace& trace, const BanditInstance& inst);

// Row-per-round delimited text: round, superarm (semicolon-joined 1-based
// indices), spend, budget_remaining, expected_reward. Byte-deterministic for
// a fixed trace, which makes it suitable for golden tests.
void write_trace(const EpisodeTrace& trace, std::ostream& out);
void write_trace_file(const EpisodeTrace& trace, const std::string& path);

}  // namespace cbwk
