#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cbwk {

// Generated costs are clamped up to this floor so that bang-per-buck ratios
// and budget divisions stay well defined.
inline constexpr double kMinCost = 1e-6;

// A budgeted combinatorial bandit problem: n arms with unknown mean rewards
// and known per-pull costs, a total budget, and a fixed number of rounds. In
// each round a policy may pull each arm at most once.
struct BanditInstance {
  std::vector<double> mu;    // true mean rewards, each in [0,1]
  std::vector<double> cost;  // known per-pull costs, each in (0,1]
  double budget = 0.0;       // total spend allowed across all rounds
  int horizon = 1;           // number of rounds T

  int arms() const { return static_cast<int>(mu.size()); }
};

enum class RewardKind {
  Bernoulli,       // reward in {0,1} with mean mu_i
  DegenerateMean,  // reward equals mu_i deterministically (useful in tests)
};

// Returns std::nullopt when the instance is well formed, otherwise a message
// naming the first violated constraint.
std::optional<std::string> validate_instance(const BanditInstance& inst);

// n arms with mu_i and c_i drawn i.i.d. uniform on [0,1]; costs clamped into
// [kMinCost, 1]. Pure function of its arguments.
BanditInstance gen_iid_uniform(int n, int horizon, double budget,
                               std::uint64_t seed);

// Four arms in separated quality tiers: mu_1,c_1 ~ U[0.9,1],
// mu_2,c_2 ~ U[0.6,0.8], mu_3,c_3 ~ U[0.2,0.4], mu_4,c_4 ~ U[0,0.1]
// (costs clamped into [kMinCost, 1]). Pure function of its arguments.
BanditInstance gen_tiered(int horizon, double budget, std::uint64_t seed);

// Flat key-value text record with fields n, T, B, mu, cost. Values round-trip
// exactly. Readers reject unknown keys and validate the result.
void write_instance(const BanditInstance& inst, std::ostream& out);
BanditInstance read_instance(std::istream& in);
void write_instance_file(const BanditInstance& inst, const std::string& path);
BanditInstance read_instance_file(const std::string& path);

}  // namespace cbwk
