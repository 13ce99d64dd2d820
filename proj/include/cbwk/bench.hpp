#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbwk/instance.hpp"
#include "cbwk/online.hpp"

namespace cbwk {

enum class ExperimentKind { Exp1, Exp2, Exp3, Exp4, Custom };
enum class SweepVar { Budget, Horizon };
enum class Generator { IidUniform, Tiered };

// Raw configuration as parsed from a config file or set via overrides.
// Unset fields fall back to the selected experiment's defaults when the
// config is resolved.
struct ConfigInput {
  std::optional<ExperimentKind> experiment;
  std::optional<bool> full_scale;
  std::optional<int> n;
  std::optional<SweepVar> sweep_var;
  std::optional<std::vector<double>> sweep;
  std::optional<double> fixed_budget;
  std::optional<int> fixed_horizon;
  std::optional<double> ratio;  // budget / horizon
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<PolicyKind>> policies;
  std::optional<UcbConfig::Kind> ucb;
  std::optional<double> alpha;
  std::optional<double> kappa;
  std::optional<double> per_round_budget;  // -1 encodes "auto" (B / T)
  std::optional<RewardKind> reward_model;
  std::optional<Generator> generator;
};

// Fully resolved experiment description. Produced by resolve_config; every
// field is concrete and validated.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  bool full_scale = false;
  int n = 10;
  SweepVar sweep_var = SweepVar::Horizon;
  std::vector<double> sweep;
  double fixed_budget = -1.0;  // used when sweeping horizon without a ratio
  int fixed_horizon = -1;      // used when sweeping budget
  double ratio = -1.0;         // > 0: budget = ratio * horizon
  int replications = 50;
  std::uint64_t seed = 1;
  std::vector<PolicyKind> policies;
  UcbConfig::Kind ucb = UcbConfig::Kind::Alpha;
  double alpha = 5.0;
  double kappa = 1.0;
  double per_round_budget = -1.0;  // <= 0 means budget / horizon
  RewardKind reward_model = RewardKind::Bernoulli;
  Generator generator = Generator::IidUniform;
};

// Strict flat key = value text. Unknown keys are rejected; '#' starts a
// comment; list values accept comma or whitespace separators.
ConfigInput parse_config(std::istream& in);
ConfigInput load_config_file(const std::string& path);

// Applies one key/value pair (the same keys the file format accepts).
// Later assignments win, which is how command-line overrides are layered.
void config_set(ConfigInput& input, std::string_view key,
                std::string_view value);

// Fills experiment defaults (desk-scale grids by default, the large grids
// when full_scale is set), applies explicit overrides, validates.
ExperimentConfig resolve_config(const ConfigInput& input);

// Canonical text form of a resolved config: sorted "key = value" lines that
// parse back to the same resolved config.
std::string canonical_config(const ExperimentConfig& config);

// FNV-1a 64 over canonical_config, for run metadata.
std::uint64_t config_hash(const ExperimentConfig& config);

// One aggregated measurement: a policy at one sweep point.
struct ResultRow {
  std::string experiment;
  std::string policy;
  double sweep = 0.0;
  double mean_regret = 0.0;
  double std_regret = 0.0;  // sample standard deviation over replications
  double cov = 0.0;         // std / mean when mean > 0, else 0
  double mean_opt_lp = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // sorted by (policy, sweep)
};

// Runs every configured policy on the same generated instance and episode
// seed for each (sweep point, replication) pair, measures pseudo-regret
// against the fractional optimum on the true means, and aggregates.
// Replications may execute concurrently; results are identical regardless
// of scheduling and of replication execution order.
ResultTable run_experiment(const ExperimentConfig& config);

// CSV with a fixed header; reals carry 6 significant digits. Emission is
// byte-deterministic for a fixed table.
void emit_csv(const ResultTable& table, std::ostream& out);
void emit_csv_file(const ResultTable& table, const std::string& path);
ResultTable read_csv(std::istream& in);
ResultTable read_csv_file(const std::string& path);

// Per-policy (sweep, mean_regret) series sorted by sweep, in blocks a line
// plotter can consume. With normalize_to set, appends each point's ratio to
// that policy's mean at the same sweep value (the reference series is
// constantly 1); missing or non-positive reference means are an error.
void emit_plotdata(const ResultTable& table,
                   const std::optional<std::string>& normalize_to,
                   std::ostream& out);

// Reproducibility record: seed, config hash, and the regret benchmark
// convention used by this artifact.
void write_run_metadata(const ExperimentConfig& config, std::ostream& out);
void write_run_metadata_file(const ExperimentConfig& config,
                             const std::string& path);

const char* experiment_name(ExperimentKind kind);

}  // namespace cbwk
