#include "cbwk/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cbwk/error.hpp"
#include "cbwk/offline.hpp"
#include "cbwk/rng.hpp"
#include "cbwk/sim.hpp"
#include "format.hpp"

namespace cbwk {

namespace {

constexpr std::uint64_t kInstanceStream = 0xA11;
constexpr std::uint64_t kEpisodeStream = 0xE51;

const char* kCsvHeader =
    "experiment,policy,sweep,mean_regret,std_regret,cov,mean_opt_lp,"
    "replications,seed";

ExperimentKind experiment_from_name(std::string_view name) {
  if (name == "exp1") return ExperimentKind::Exp1;
  if (name == "exp2") return ExperimentKind::Exp2;
  if (name == "exp3") return ExperimentKind::Exp3;
  if (name == "exp4") return ExperimentKind::Exp4;
  if (name == "custom") return ExperimentKind::Custom;
  throw ParseError("unknown experiment '" + std::string(name) +
                   "' (expected exp1..exp4 or custom)");
}

bool parse_bool(std::string_view v, std::string_view key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError(std::string(key) + ": expected true or false, got '" +
                   std::string(v) + "'");
}

std::vector<double> parse_real_list(std::string_view v, std::string_view key) {
  std::vector<double> out;
  for (const std::string& tok : detail::split_list(v))
    out.push_back(detail::parse_real(tok, key));
  if (out.empty())
    throw ParseError(std::string(key) + ": list must not be empty");
  return out;
}

// Runs fn(0..count-1), possibly on several threads; each call writes only to
// its own result slot, so the outcome is independent of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn) {
  unsigned workers = std::min<unsigned>(
      {std::max(1u, std::thread::hardware_concurrency()), 16u,
       static_cast<unsigned>(std::max(count, 1))});
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SweepPoint {
  double value = 0.0;
  int horizon = 0;
  double budget = 0.0;
};

SweepPoint sweep_point(const ExperimentConfig& c, std::size_t idx) {
  SweepPoint p;
  p.value = c.sweep[idx];
  if (c.sweep_var == SweepVar::Horizon) {
    p.horizon = static_cast<int>(std::llround(p.value));
    p.budget = c.ratio > 0.0 ? c.ratio * p.horizon : c.fixed_budget;
  } else {
    p.horizon = c.fixed_horizon;
    p.budget = p.value;
  }
  return p;
}

std::string policy_list_string(const std::vector<PolicyKind>& policies) {
  std::string s;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (i) s += ',';
    s += policy_name(policies[i]);
  }
  return s;
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Exp1:
      return "exp1";
    case ExperimentKind::Exp2:
      return "exp2";
    case ExperimentKind::Exp3:
      return "exp3";
    case ExperimentKind::Exp4:
      return "exp4";
    case ExperimentKind::Custom:
      return "custom";
  }
  return "unknown";
}

void config_set(ConfigInput& input, std::string_view key,
                std::string_view value) {
  std::string v(detail::trim(value));
  if (key == "experiment") {
    input.experiment = experiment_from_name(v);
  } else if (key == "full_scale") {
    input.full_scale = parse_bool(v, key);
  } else if (key == "n") {
    input.n = static_cast<int>(detail::parse_int(v, key));
  } else if (key == "sweep_var") {
    if (v == "budget")
      input.sweep_var = SweepVar::Budget;
    else if (v == "horizon")
      input.sweep_var = SweepVar::Horizon;
    else
      throw ParseError("sweep_var: expected budget or horizon, got '" + v +
                       "'");
  } else if (key == "sweep") {
    input.sweep = parse_real_list(v, key);
  } else if (key == "budget") {
    input.fixed_budget = detail::parse_real(v, key);
  } else if (key == "horizon") {
    input.fixed_horizon = static_cast<int>(detail::parse_int(v, key));
  } else if (key == "ratio") {
    input.ratio = detail::parse_real(v, key);
  } else if (key == "replications") {
    input.replications = static_cast<int>(detail::parse_int(v, key));
  } else if (key == "seed") {
    input.seed = detail::parse_uint(v, key);
  } else if (key == "policies") {
    std::vector<PolicyKind> kinds;
    for (const std::string& tok : detail::split_list(v)) {
      try {
        kinds.push_back(policy_kind_from_name(tok));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
    }
    if (kinds.empty()) throw ParseError("policies: list must not be empty");
    input.policies = std::move(kinds);
  } else if (key == "ucb") {
    if (v == "alpha")
      input.ucb = UcbConfig::Kind::Alpha;
    else if (v == "rad")
      input.ucb = UcbConfig::Kind::Rad;
    else
      throw ParseError("ucb: expected alpha or rad, got '" + v + "'");
  } else if (key == "alpha") {
    input.alpha = detail::parse_real(v, key);
  } else if (key == "kappa") {
    input.kappa = detail::parse_real(v, key);
  } else if (key == "per_round_budget") {
    if (v == "auto")
      input.per_round_budget = -1.0;
    else
      input.per_round_budget = detail::parse_real(v, key);
  } else if (key == "reward_model") {
    if (v == "bernoulli")
      input.reward_model = RewardKind::Bernoulli;
    else if (v == "degenerate")
      input.reward_model = RewardKind::DegenerateMean;
    else
      throw ParseError("reward_model: expected bernoulli or degenerate, got '" +
                       v + "'");
  } else if (key == "generator") {
    if (v == "iid-uniform")
      input.generator = Generator::IidUniform;
    else if (v == "tiered")
      input.generator = Generator::Tiered;
    else
      throw ParseError("generator: expected iid-uniform or tiered, got '" + v +
                       "'");
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'");
  }
}

ConfigInput parse_config(std::istream& in) {
  ConfigInput input;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string_view t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    std::string key(detail::trim(t.substr(0, eq)));
    config_set(input, key, t.substr(eq + 1));
  }
  return input;
}

ConfigInput load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return parse_config(in);
}

namespace {

// Desk-scale grids keep every run to seconds-to-minutes on one machine;
// full_scale selects the original large grids.
void apply_experiment_defaults(ExperimentConfig& c) {
  const bool full = c.full_scale;
  switch (c.experiment) {
    case ExperimentKind::Exp1:
      c.n = 10;
      c.sweep_var = SweepVar::Budget;
      c.fixed_horizon = full ? 5000 : 1000;
      c.sweep = full ? std::vector<double>{100, 1000, 5000, 10000, 25000, 50000}
                     : std::vector<double>{100, 500, 1000, 2000, 4000};
      c.replications = full ? 100 : 50;
      break;
    case ExperimentKind::Exp2:
      c.n = 10;
      c.sweep_var = SweepVar::Horizon;
      c.fixed_budget = full ? 80000 : 6400;
      c.sweep = full ? std::vector<double>{1000, 5000, 10000, 25000, 50000}
                     : std::vector<double>{1000, 2000, 4000};
      c.replications = full ? 100 : 50;
      break;
    case ExperimentKind::Exp3:
      c.n = 10;
      c.sweep_var = SweepVar::Horizon;
      c.ratio = 1.575;
      c.sweep = full ? std::vector<double>{1000, 5000, 10000, 25000, 50000}
                     : std::vector<double>{500, 1000, 2000};
      c.replications = full ? 100 : 50;
      break;
    case ExperimentKind::Exp4:
      c.n = 4;
      c.sweep_var = SweepVar::Horizon;
      c.ratio = 1.575;
      c.generator = Generator::Tiered;
      c.sweep = full ? std::vector<double>{100, 500, 1000, 2000}
                     : std::vector<double>{100, 500, 1000};
      c.replications = full ? 100 : 50;
      break;
    case ExperimentKind::Custom:
      break;
  }
}

}  // namespace

ExperimentConfig resolve_config(const ConfigInput& in) {
  ExperimentConfig c;
  c.experiment = in.experiment.value_or(ExperimentKind::Custom);
  c.full_scale = in.full_scale.value_or(false);
  c.policies = {PolicyKind::GreedyUcb, PolicyKind::LpUcb,
                PolicyKind::FixedBudget};
  apply_experiment_defaults(c);

  if (in.n) c.n = *in.n;
  if (in.sweep_var) c.sweep_var = *in.sweep_var;
  if (in.sweep) c.sweep = *in.sweep;
  if (in.fixed_budget) c.fixed_budget = *in.fixed_budget;
  if (in.fixed_horizon) c.fixed_horizon = *in.fixed_horizon;
  if (in.ratio) c.ratio = *in.ratio;
  if (in.replications) c.replications = *in.replications;
  if (in.seed) c.seed = *in.seed;
  if (in.policies) c.policies = *in.policies;
  if (in.ucb) c.ucb = *in.ucb;
  if (in.alpha) c.alpha = *in.alpha;
  if (in.kappa) c.kappa = *in.kappa;
  if (in.per_round_budget) c.per_round_budget = *in.per_round_budget;
  if (in.reward_model) c.reward_model = *in.reward_model;
  if (in.generator) c.generator = *in.generator;

  // Validation.
  if (c.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (c.generator == Generator::Tiered && c.n != 4)
    throw std::invalid_argument("config: the tiered generator has n = 4");
  if (c.sweep.empty())
    throw std::invalid_argument("config: sweep grid must not be empty");
  if (c.replications < 1)
    throw std::invalid_argument("config: replications must be >= 1");
  if (c.policies.empty())
    throw std::invalid_argument("config: policies must not be empty");
  if (c.alpha < 0.0)
    throw std::invalid_argument("config: alpha must be >= 0");
  if (c.kappa <= 0.0 && c.ucb == UcbConfig::Kind::Rad)
    throw std::invalid_argument("config: kappa must be positive");
  if (c.sweep_var == SweepVar::Horizon) {
    for (double v : c.sweep) {
      double r = std::llround(v);
      if (!(v >= 1.0) || std::abs(v - r) > 1e-9)
        throw std::invalid_argument(
            "config: horizon sweep values must be positive integers");
    }
    if (!(c.ratio > 0.0) && !(c.fixed_budget >= 0.0))
      throw std::invalid_argument(
          "config: sweeping horizon needs ratio > 0 or budget >= 0");
  } else {
    if (c.fixed_horizon < 1)
      throw std::invalid_argument(
          "config: sweeping budget needs horizon >= 1");
    for (double v : c.sweep)
      if (!(v >= 0.0))
        throw std::invalid_argument("config: budget sweep values must be >= 0");
  }
  return c;
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "alpha = " << detail::real17(c.alpha) << "\n";
  if (c.sweep_var == SweepVar::Horizon && !(c.ratio > 0.0))
    out << "budget = " << detail::real17(c.fixed_budget) << "\n";
  out << "experiment = " << experiment_name(c.experiment) << "\n";
  out << "full_scale = " << (c.full_scale ? "true" : "false") << "\n";
  out << "generator = "
      << (c.generator == Generator::Tiered ? "tiered" : "iid-uniform") << "\n";
  if (c.sweep_var == SweepVar::Budget)
    out << "horizon = " << c.fixed_horizon << "\n";
  out << "kappa = " << detail::real17(c.kappa) << "\n";
  out << "n = " << c.n << "\n";
  if (c.per_round_budget > 0.0)
    out << "per_round_budget = " << detail::real17(c.per_round_budget) << "\n";
  else
    out << "per_round_budget = auto\n";
  out << "policies = " << policy_list_string(c.policies) << "\n";
  if (c.ratio > 0.0) out << "ratio = " << detail::real17(c.ratio) << "\n";
  out << "replications = " << c.replications << "\n";
  out << "reward_model = "
      << (c.reward_model == RewardKind::Bernoulli ? "bernoulli" : "degenerate")
      << "\n";
  out << "seed = " << c.seed << "\n";
  out << "sweep =";
  for (double v : c.sweep) out << ' ' << detail::real17(v);
  out << "\n";
  out << "sweep_var = "
      << (c.sweep_var == SweepVar::Budget ? "budget" : "horizon") << "\n";
  out << "ucb = " << (c.ucb == UcbConfig::Kind::Rad ? "rad" : "alpha") << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::string text = canonical_config(c);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char byte : text) {
    h ^= byte;
    h *= 1099511628211ULL;
  }
  return h;
}

ResultTable run_experiment(const ExperimentConfig& c) {
  const int reps = c.replications;
  const std::size_t points = c.sweep.size();
  const std::size_t npol = c.policies.size();

  std::vector<PolicySpec> specs(npol);
  for (std::size_t p = 0; p < npol; ++p) {
    specs[p].kind = c.policies[p];
    specs[p].ucb.kind = c.ucb;
    specs[p].ucb.alpha = c.alpha;
    specs[p].kappa = c.kappa;
    specs[p].per_round_budget = c.per_round_budget;
  }

  // regrets[point][policy][rep]; opts[point][rep]
  std::vector<std::vector<std::vector<double>>> regrets(
      points, std::vector<std::vector<double>>(npol,
                                               std::vector<double>(reps)));
  std::vector<std::vector<double>> opts(points, std::vector<double>(reps));

  for (std::size_t s = 0; s < points; ++s) {
    SweepPoint point = sweep_point(c, s);
    parallel_for(reps, [&](int rep) {
      std::uint64_t inst_seed =
          derive_seed(c.seed, {kInstanceStream, s, static_cast<std::uint64_t>(rep)});
      std::uint64_t ep_seed =
          derive_seed(c.seed, {kEpisodeStream, s, static_cast<std::uint64_t>(rep)});
      BanditInstance inst =
          c.generator == Generator::Tiered
              ? gen_tiered(point.horizon, point.budget, inst_seed)
              : gen_iid_uniform(c.n, point.horizon, point.budget, inst_seed);
      opts[s][rep] =
          lp_opt_fractional(inst.mu, inst.cost, inst.budget, inst.horizon)
              .opt_value;
      // Every policy sees the same instance and the same episode seed.
      for (std::size_t p = 0; p < npol; ++p) {
        EpisodeTrace trace =
            run_episode(inst, specs[p], c.reward_model, ep_seed);
        regrets[s][p][rep] = pseudo_regret(trace, inst);
      }
    });
  }

  ResultTable table;
  table.rows.reserve(points * npol);
  for (std::size_t p = 0; p < npol; ++p) {
    for (std::size_t s = 0; s < points; ++s) {
      const std::vector<double>& r = regrets[s][p];
      double mean = 0.0;
      for (double x : r) mean += x;
      mean /= reps;
      double var = 0.0;
      for (double x : r) var += (x - mean) * (x - mean);
      double stddev = reps > 1 ? std::sqrt(var / (reps - 1)) : 0.0;
      double opt_mean = 0.0;
      for (double x : opts[s]) opt_mean += x;
      opt_mean /= reps;

      ResultRow row;
      row.experiment = experiment_name(c.experiment);
      row.policy = policy_name(c.policies[p]);
      row.sweep = c.sweep[s];
      row.mean_regret = mean;
      row.std_regret = stddev;
      row.cov = mean > 0.0 ? stddev / mean : 0.0;
      row.mean_opt_lp = opt_mean;
      row.replications = reps;
      row.seed = c.seed;
      table.rows.push_back(std::move(row));
    }
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.policy != b.policy) return a.policy < b.policy;
              return a.sweep < b.sweep;
            });
  return table;
}

void emit_csv(const ResultTable& table, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const ResultRow& r : table.rows) {
    out << r.experiment << ',' << r.policy << ',' << detail::real6(r.sweep)
        << ',' << detail::real6(r.mean_regret) << ','
        << detail::real6(r.std_regret) << ',' << detail::real6(r.cov) << ','
        << detail::real6(r.mean_opt_lp) << ',' << r.replications << ','
        << r.seed << "\n";
  }
}

void emit_csv_file(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  emit_csv(table, out);
  if (!out) throw IoError("failed while writing: " + path);
}

ResultTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      std::string_view(detail::trim(line)) != kCsvHeader)
    throw ParseError("results csv: missing or unexpected header");
  ResultTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = detail::trim(line);
    if (t.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : t) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 9)
      throw ParseError("results csv line " + std::to_string(lineno) +
                       ": expected 9 fields, got " +
                       std::to_string(fields.size()));
    ResultRow row;
    row.experiment = fields[0];
    row.policy = fields[1];
    row.sweep = detail::parse_real(fields[2], "csv sweep");
    row.mean_regret = detail::parse_real(fields[3], "csv mean_regret");
    row.std_regret = detail::parse_real(fields[4], "csv std_regret");
    row.cov = detail::parse_real(fields[5], "csv cov");
    row.mean_opt_lp = detail::parse_real(fields[6], "csv mean_opt_lp");
    row.replications =
        static_cast<int>(detail::parse_int(fields[7], "csv replications"));
    row.seed = detail::parse_uint(fields[8], "csv seed");
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_csv(in);
}

void emit_plotdata(const ResultTable& table,
                   const std::optional<std::string>& normalize_to,
                   std::ostream& out) {
  // Group rows per policy, each series sorted by sweep value.
  std::map<std::string, std::vector<const ResultRow*>> series;
  for (const ResultRow& r : table.rows) series[r.policy].push_back(&r);
  for (auto& [policy, rows] : series)
    std::sort(rows.begin(), rows.end(),
              [](const ResultRow* a, const ResultRow* b) {
                return a->sweep < b->sweep;
              });

  std::map<double, double> reference;
  if (normalize_to) {
    auto it = series.find(*normalize_to);
    if (it == series.end())
      throw std::invalid_argument("plotdata: policy '" + *normalize_to +
                                  "' not present in the results");
    for (const ResultRow* r : it->second) {
      if (!(r->mean_regret > 0.0))
        throw std::invalid_argument(
            "plotdata: cannot normalize to '" + *normalize_to +
            "': non-positive mean regret at sweep " + detail::real6(r->sweep));
      reference[r->sweep] = r->mean_regret;
    }
  }

  out << "# budgeted-bandit benchmark plot data\n";
  out << "# columns: sweep mean_regret";
  if (normalize_to) out << " ratio_vs_" << *normalize_to;
  out << "\n";
  for (const auto& [policy, rows] : series) {
    out << "\n# series: " << policy << "\n";
    for (const ResultRow* r : rows) {
      out << detail::real6(r->sweep) << ' ' << detail::real6(r->mean_regret);
      if (normalize_to) {
        auto ref = reference.find(r->sweep);
        if (ref == reference.end())
          throw std::invalid_argument(
              "plotdata: policy '" + *normalize_to +
              "' has no row at sweep " + detail::real6(r->sweep));
        out << ' ' << detail::real6(r->mean_regret / ref->second);
      }
      out << "\n";
    }
  }
}

void write_run_metadata(const ExperimentConfig& c, std::ostream& out) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(c)));
  out << "seed = " << c.seed << "\n";
  out << "config_hash = " << hash << "\n";
  out << "experiment = " << experiment_name(c.experiment) << "\n";
  out << "policies = " << policy_list_string(c.policies) << "\n";
  out << "replications = " << c.replications << "\n";
  out << "regret_benchmark = OPT_LP(true_means)\n";
  out << "# regret is measured against the fractional-relaxation optimum\n";
  out << "# computed on the true means; that optimum upper-bounds the expected\n";
  out << "# reward of every feasible policy, so reported regret is conservative\n";
}

void write_run_metadata_file(const ExperimentConfig& config,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_run_metadata(config, out);
  if (!out) throw IoError("failed while writing: " + path);
}

}  // namespace cbwk
