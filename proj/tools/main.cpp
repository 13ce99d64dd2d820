// Command-line front end. Talks to the library exclusively through the
// C API in cbwk/cbwk.h, which keeps it an honest consumer of the public ABI.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbwk/cbwk.h"

namespace {

[[noreturn]] void die(cbwk_status status, const std::string& context) {
  std::fprintf(stderr, "error (%s): %s: %s\n", cbwk_status_name(status),
               context.c_str(), cbwk_last_error());
  std::exit(1);
}

void check(cbwk_status status, const std::string& context) {
  if (status != CBWK_OK) die(status, context);
}

struct ConfigHandle {
  cbwk_config* ptr = nullptr;
  ~ConfigHandle() { cbwk_config_free(ptr); }
};
struct ResultsHandle {
  cbwk_results* ptr = nullptr;
  ~ResultsHandle() { cbwk_results_free(ptr); }
};
struct InstanceHandle {
  cbwk_instance* ptr = nullptr;
  ~InstanceHandle() { cbwk_instance_free(ptr); }
};
struct AllocationHandle {
  cbwk_allocation* ptr = nullptr;
  ~AllocationHandle() { cbwk_allocation_free(ptr); }
};

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
  ConfigHandle config;
  check(cbwk_config_load(config_path.c_str(), &config.ptr),
        "loading " + config_path);
  for (const auto& [key, value] : overrides)
    check(cbwk_config_set(config.ptr, key.c_str(), value.c_str()),
          "setting " + key + " = " + value);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error (io): cannot create directory %s: %s\n",
                 out_dir.c_str(), ec.message().c_str());
    return 1;
  }

  uint64_t hash = 0;
  check(cbwk_config_hash(config.ptr, &hash), "resolving the configuration");
  std::fprintf(stderr, "running experiment (config hash %016llx)...\n",
               static_cast<unsigned long long>(hash));

  ResultsHandle results;
  check(cbwk_experiment_run(config.ptr, &results.ptr),
        "running the experiment");

  const std::string csv = out_dir + "/results.csv";
  const std::string plot = out_dir + "/plotdata.txt";
  const std::string meta = out_dir + "/run_meta.txt";
  check(cbwk_results_write_csv(results.ptr, csv.c_str()), "writing " + csv);
  check(cbwk_results_write_plotdata(results.ptr, nullptr, plot.c_str()),
        "writing " + plot);
  check(cbwk_write_run_metadata(config.ptr, meta.c_str()), "writing " + meta);
  std::printf("wrote %s\nwrote %s\nwrote %s\n", csv.c_str(), plot.c_str(),
              meta.c_str());
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& algo,
              int scale) {
  InstanceHandle inst;
  check(cbwk_instance_read_file(instance_path.c_str(), &inst.ptr),
        "reading " + instance_path);
  const int n = cbwk_instance_arms(inst.ptr);

  if (algo == "lp") {
    double opt = 0.0;
    std::vector<double> zeta(n);
    check(cbwk_solve_lp(inst.ptr, &opt, zeta.data(), n),
          "solving the fractional relaxation");
    std::printf("opt_value = %.17g\nzeta =", opt);
    for (double z : zeta) std::printf(" %.17g", z);
    std::printf("\n");
    return 0;
  }

  AllocationHandle alloc;
  if (algo == "greedy") {
    check(cbwk_solve_greedy(inst.ptr, &alloc.ptr), "running the greedy solver");
  } else if (algo == "greedy2") {
    check(cbwk_solve_greedy_2approx(inst.ptr, &alloc.ptr),
          "running the greedy 2-approximation");
  } else if (algo == "dp") {
    check(cbwk_solve_dp(inst.ptr, scale, &alloc.ptr),
          "running the exact dynamic program");
  } else {
    std::fprintf(stderr, "error: unknown algorithm '%s'\n", algo.c_str());
    return 1;
  }
  std::vector<int32_t> counts(n);
  check(cbwk_allocation_counts(alloc.ptr, counts.data(), n),
        "reading the allocation");
  std::printf("counts =");
  for (int32_t c : counts) std::printf(" %d", c);
  std::printf("\ntotal_value = %.17g\ntotal_cost = %.17g\n",
              cbwk_allocation_total_value(alloc.ptr),
              cbwk_allocation_total_cost(alloc.ptr));
  return 0;
}

int cmd_plotdata(const std::string& in_path, const std::string& normalize,
                 const std::string& out_path) {
  ResultsHandle results;
  check(cbwk_results_read_csv(in_path.c_str(), &results.ptr),
        "reading " + in_path);
  check(cbwk_results_write_plotdata(
            results.ptr, normalize.empty() ? nullptr : normalize.c_str(),
            out_path.c_str()),
        "writing plot data");
  if (out_path != "-") std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Benchmark driver for budgeted combinatorial bandit policies"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_dir = ".";
  std::string policies;
  std::string seed;
  std::string reps;
  bool full_scale = false;
  CLI::App* run = app.add_subcommand(
      "run", "Run a configured experiment and write results/plot data");
  run->add_option("--config", config_path, "Experiment config file")
      ->required();
  run->add_option("--out", out_dir, "Output directory (created if absent)")
      ->capture_default_str();
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--policies", policies,
                  "Override the policy list (comma separated)");
  run->add_option("--reps", reps, "Override the replication count");
  run->add_flag("--full-scale", full_scale,
                "Use the large sweep grids instead of the desk-scale ones");

  // solve
  std::string instance_path;
  std::string algo = "greedy";
  int scale = 100;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the offline allocation problem for an instance file");
  solve->add_option("--instance", instance_path, "Instance file")->required();
  solve
      ->add_option("--algo", algo,
                   "Solver: greedy, greedy2 (2-approximation), dp (exact), lp "
                   "(fractional relaxation)")
      ->capture_default_str()
      ->check(CLI::IsMember({"greedy", "greedy2", "dp", "lp"}));
  solve
      ->add_option("--scale", scale,
                   "Cost scale for dp (scale * cost must be integral)")
      ->capture_default_str();

  // plotdata
  std::string in_path;
  std::string normalize;
  std::string plot_out = "-";
  CLI::App* plot = app.add_subcommand(
      "plotdata", "Convert a results CSV into plottable series");
  plot->add_option("--in", in_path, "results.csv produced by 'run'")
      ->required();
  plot->add_option("--normalize", normalize,
                   "Append each series' ratio to this policy's mean regret");
  plot->add_option("--out", plot_out, "Output path ('-' for stdout)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::vector<std::pair<std::string, std::string>> overrides;
    if (!seed.empty()) overrides.emplace_back("seed", seed);
    if (!policies.empty()) overrides.emplace_back("policies", policies);
    if (!reps.empty()) overrides.emplace_back("replications", reps);
    if (full_scale) overrides.emplace_back("full_scale", "true");
    return cmd_run(config_path, out_dir, overrides);
  }
  if (solve->parsed()) return cmd_solve(instance_path, algo, scale);
  if (plot->parsed()) return cmd_plotdata(in_path, normalize, plot_out);
  return 1;
}
