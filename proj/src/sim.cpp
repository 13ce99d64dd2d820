#include "cbwk/sim.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cbwk/error.hpp"
#include "cbwk/offline.hpp"
#include "cbwk/rng.hpp"
#include "format.hpp"

namespace cbwk {

namespace {

double draw_reward(Rng& rng, RewardKind kind, double mu) {
  switch (kind) {
    case RewardKind::Bernoulli:
      return rng.bernoulli(mu) ? 1.0 : 0.0;
    case RewardKind::DegenerateMean:
      return mu;
  }
  throw std::invalid_argument("draw_reward: unknown reward kind");
}

}  // namespace

EpisodeTrace run_episode(const BanditInstance& inst, Policy& policy,
                         RewardKind reward_kind, std::uint64_t seed) {
  if (auto err = validate_instance(inst))
    throw std::invalid_argument("run_episode: " + *err);
  Rng rng(seed);
  EpisodeTrace trace;
  trace.pull_counts.assign(inst.arms(), 0);
  trace.rounds.reserve(inst.horizon);
  double remaining = inst.budget;
  for (int t = 1; t <= inst.horizon; ++t) {
    PolicyDecision decision = policy.select(t, remaining);
    RoundRecord rec;
    rec.round = t;
    rec.superarm = std::move(decision.superarm);
    rec.rewards.reserve(rec.superarm.size());
    for (int arm : rec.superarm) {
      double reward = draw_reward(rng, reward_kind, inst.mu[arm]);
      rec.rewards.push_back(reward);
      rec.expected += inst.mu[arm];
      rec.spend += inst.cost[arm];
      remaining -= inst.cost[arm];
      policy.observe(arm, reward);
      trace.pull_counts[arm] += 1;
      trace.total_realized += reward;
    }
    rec.budget_remaining = remaining;
    trace.total_expected += rec.expected;
    trace.total_spend += rec.spend;
    trace.rounds.push_back(std::move(rec));
  }
  trace.final_emp_mean.resize(inst.arms());
  for (int i = 0; i < inst.arms(); ++i)
    trace.final_emp_mean[i] = policy.state().emp_mean(i);
  return trace;
}

EpisodeTrace run_episode(const BanditInstance& inst, const PolicySpec& spec,
                         RewardKind reward_kind, std::uint64_t seed) {
  auto policy = make_policy(inst, spec);
  return run_episode(inst, *policy, reward_kind, seed);
}

double pseudo_regret(const EpisodeTrace& trace, const BanditInstance& inst) {
  if (auto err = validate_instance(inst))
    throw std::invalid_argument("pseudo_regret: " + *err);
  if (trace.pull_counts.size() != inst.mu.size() ||
      trace.rounds.size() != static_cast<std::size_t>(inst.horizon))
    throw std::invalid_argument(
        "pseudo_regret: trace shape does not match the instance");
  FractionalSolution opt =
      lp_opt_fractional(inst.mu, inst.cost, inst.budget, inst.horizon);
  return opt.opt_value - trace.total_expected;
}

void write_trace(const EpisodeTrace& trace, std::ostream& out) {
  out << "round,superarm,spend,budget_remaining,expected_reward\n";
  for (const RoundRecord& rec : trace.rounds) {
    out << rec.round << ',';
    for (std::size_t k = 0; k < rec.superarm.size(); ++k) {
      if (k) out << ';';
      out << rec.superarm[k] + 1;  // 1-based arm ids in text output
    }
    out << ',' << detail::real9(rec.spend) << ','
        << detail::real9(rec.budget_remaining) << ','
        << detail::real9(rec.expected) << "\n";
  }
}

void write_trace_file(const EpisodeTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_trace(trace, out);
  if (!out) throw IoError("failed while writing: " + path);
}

}  // namespace cbwk
