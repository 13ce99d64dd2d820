// C ABI shim: every entry point validates its arguments, forwards into the
// C++ library, and maps exceptions to status codes with a thread-local
// message retrievable via cbwk_last_error().
#include "cbwk/cbwk.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbwk/bench.hpp"
#include "cbwk/error.hpp"
#include "cbwk/instance.hpp"
#include "cbwk/offline.hpp"
#include "cbwk/online.hpp"
#include "cbwk/sim.hpp"

struct cbwk_instance {
  cbwk::BanditInstance impl;
};
struct cbwk_allocation {
  cbwk::Allocation impl;
};
struct cbwk_trace {
  cbwk::EpisodeTrace impl;
};
struct cbwk_config {
  cbwk::ConfigInput input;
};
struct cbwk_results {
  cbwk::ResultTable impl;
};

namespace {

thread_local std::string g_last_error;

cbwk_status fail(cbwk_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes. `fn` returns a
// cbwk_status itself so argument checks inside can short-circuit.
template <typename Fn>
cbwk_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cbwk::ParseError& e) {
    return fail(CBWK_ERR_PARSE, e.what());
  } catch (const cbwk::IoError& e) {
    return fail(CBWK_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CBWK_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CBWK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CBWK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CBWK_ERR_INTERNAL, "unknown error");
  }
}

cbwk_status require(bool ok, const char* what) {
  if (ok) return CBWK_OK;
  return fail(CBWK_ERR_INVALID_ARGUMENT, what);
}

cbwk_status make_instance(cbwk::BanditInstance inst, cbwk_instance** out) {
  if (auto why = cbwk::validate_instance(inst))
    return fail(CBWK_ERR_VALIDATION, *why);
  *out = new cbwk_instance{std::move(inst)};
  return CBWK_OK;
}

}  // namespace

extern "C" {

const char* cbwk_status_name(cbwk_status status) {
  switch (status) {
    case CBWK_OK:
      return "ok";
    case CBWK_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case CBWK_ERR_VALIDATION:
      return "validation";
    case CBWK_ERR_PARSE:
      return "parse";
    case CBWK_ERR_IO:
      return "io";
    case CBWK_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* cbwk_last_error(void) { return g_last_error.c_str(); }

/* ---- problem instances ---- */

cbwk_status cbwk_instance_create(int32_t n_arms, const double* mu,
                                 const double* cost, double budget,
                                 int32_t horizon, cbwk_instance** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(out && mu && cost, "null pointer argument"); s) return s;
    if (auto s = require(n_arms >= 1, "n_arms must be >= 1"); s) return s;
    cbwk::BanditInstance inst;
    inst.mu.assign(mu, mu + n_arms);
    inst.cost.assign(cost, cost + n_arms);
    inst.budget = budget;
    inst.horizon = horizon;
    return make_instance(std::move(inst), out);
  });
}

cbwk_status cbwk_instance_gen_iid_uniform(int32_t n_arms, int32_t horizon,
                                          double budget, uint64_t seed,
                                          cbwk_instance** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(out != nullptr, "null pointer argument"); s) return s;
    return make_instance(cbwk::gen_iid_uniform(n_arms, horizon, budget, seed),
                         out);
  });
}

cbwk_status cbwk_instance_gen_tiered(int32_t horizon, double budget,
                                     uint64_t seed, cbwk_instance** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(out != nullptr, "null pointer argument"); s) return s;
    return make_instance(cbwk::gen_tiered(horizon, budget, seed), out);
  });
}

cbwk_status cbwk_instance_read_file(const char* path, cbwk_instance** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(path && out, "null pointer argument"); s) return s;
    return make_instance(cbwk::read_instance_file(path), out);
  });
}

cbwk_status cbwk_instance_write_file(const cbwk_instance* inst,
                                     const char* path) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && path, "null pointer argument"); s) return s;
    cbwk::write_instance_file(inst->impl, path);
    return CBWK_OK;
  });
}

int32_t cbwk_instance_arms(const cbwk_instance* inst) {
  return inst ? inst->impl.arms() : -1;
}

int32_t cbwk_instance_horizon(const cbwk_instance* inst) {
  return inst ? inst->impl.horizon : -1;
}

double cbwk_instance_budget(const cbwk_instance* inst) {
  return inst ? inst->impl.budget : -1.0;
}

cbwk_status cbwk_instance_means(const cbwk_instance* inst, double* out,
                                int32_t capacity) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    if (auto s = require(capacity >= inst->impl.arms(),
                         "buffer smaller than the number of arms");
        s)
      return s;
    std::memcpy(out, inst->impl.mu.data(),
                inst->impl.mu.size() * sizeof(double));
    return CBWK_OK;
  });
}

cbwk_status cbwk_instance_costs(const cbwk_instance* inst, double* out,
                                int32_t capacity) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    if (auto s = require(capacity >= inst->impl.arms(),
                         "buffer smaller than the number of arms");
        s)
      return s;
    std::memcpy(out, inst->impl.cost.data(),
                inst->impl.cost.size() * sizeof(double));
    return CBWK_OK;
  });
}

void cbwk_instance_free(cbwk_instance* inst) { delete inst; }

/* ---- offline solvers ---- */

cbwk_status cbwk_solve_greedy(const cbwk_instance* inst,
                              cbwk_allocation** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    *out = new cbwk_allocation{cbwk::cbwk_greedy(inst->impl.mu, inst->impl.cost,
                                                 inst->impl.budget,
                                                 inst->impl.horizon)};
    return CBWK_OK;
  });
}

cbwk_status cbwk_solve_greedy_2approx(const cbwk_instance* inst,
                                      cbwk_allocation** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    *out = new cbwk_allocation{
        cbwk::cbwk_greedy_2approx(inst->impl.mu, inst->impl.cost,
                                  inst->impl.budget, inst->impl.horizon)};
    return CBWK_OK;
  });
}

cbwk_status cbwk_solve_dp(const cbwk_instance* inst, int32_t scale,
                          cbwk_allocation** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    *out = new cbwk_allocation{cbwk::dp_exact(inst->impl.mu, inst->impl.cost,
                                              inst->impl.budget,
                                              inst->impl.horizon, scale)};
    return CBWK_OK;
  });
}

cbwk_status cbwk_solve_lp(const cbwk_instance* inst, double* opt_value,
                          double* zeta, int32_t zeta_capacity) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && opt_value, "null pointer argument"); s)
      return s;
    if (zeta) {
      if (auto s = require(zeta_capacity >= inst->impl.arms(),
                           "buffer smaller than the number of arms");
          s)
        return s;
    }
    cbwk::FractionalSolution sol =
        cbwk::lp_opt_fractional(inst->impl.mu, inst->impl.cost,
                                inst->impl.budget, inst->impl.horizon);
    *opt_value = sol.opt_value;
    if (zeta)
      std::memcpy(zeta, sol.zeta.data(), sol.zeta.size() * sizeof(double));
    return CBWK_OK;
  });
}

cbwk_status cbwk_allocation_counts(const cbwk_allocation* alloc, int32_t* out,
                                   int32_t capacity) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(alloc && out, "null pointer argument"); s) return s;
    if (auto s = require(
            capacity >= static_cast<int32_t>(alloc->impl.counts.size()),
            "buffer smaller than the number of arms");
        s)
      return s;
    for (std::size_t i = 0; i < alloc->impl.counts.size(); ++i)
      out[i] = alloc->impl.counts[i];
    return CBWK_OK;
  });
}

double cbwk_allocation_total_value(const cbwk_allocation* alloc) {
  return alloc ? alloc->impl.total_value : -1.0;
}

double cbwk_allocation_total_cost(const cbwk_allocation* alloc) {
  return alloc ? alloc->impl.total_cost : -1.0;
}

void cbwk_allocation_free(cbwk_allocation* alloc) { delete alloc; }

/* ---- online episodes ---- */

void cbwk_policy_params_init(cbwk_policy_params* params) {
  if (!params) return;
  params->alpha = 5.0;
  params->use_rad_ucb = 0;
  params->kappa = 1.0;
  params->per_round_budget = -1.0;
}

cbwk_status cbwk_run_episode(const cbwk_instance* inst, cbwk_policy policy,
                             const cbwk_policy_params* params,
                             cbwk_reward_model reward_model, uint64_t seed,
                             cbwk_trace** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(inst && out, "null pointer argument"); s) return s;
    cbwk::PolicySpec spec;
    switch (policy) {
      case CBWK_POLICY_GREEDY_UCB:
        spec.kind = cbwk::PolicyKind::GreedyUcb;
        break;
      case CBWK_POLICY_LP_UCB:
        spec.kind = cbwk::PolicyKind::LpUcb;
        break;
      case CBWK_POLICY_FIXED_BUDGET:
        spec.kind = cbwk::PolicyKind::FixedBudget;
        break;
      default:
        return fail(CBWK_ERR_INVALID_ARGUMENT, "unknown policy enum value");
    }
    cbwk_policy_params defaults;
    cbwk_policy_params_init(&defaults);
    const cbwk_policy_params& p = params ? *params : defaults;
    spec.ucb.kind = p.use_rad_ucb ? cbwk::UcbConfig::Kind::Rad
                                  : cbwk::UcbConfig::Kind::Alpha;
    spec.ucb.alpha = p.alpha;
    spec.kappa = p.kappa;
    spec.per_round_budget = p.per_round_budget;

    cbwk::RewardKind kind;
    switch (reward_model) {
      case CBWK_REWARD_BERNOULLI:
        kind = cbwk::RewardKind::Bernoulli;
        break;
      case CBWK_REWARD_DEGENERATE_MEAN:
        kind = cbwk::RewardKind::DegenerateMean;
        break;
      default:
        return fail(CBWK_ERR_INVALID_ARGUMENT,
                    "unknown reward model enum value");
    }
    *out = new cbwk_trace{cbwk::run_episode(inst->impl, spec, kind, seed)};
    return CBWK_OK;
  });
}

int32_t cbwk_trace_rounds(const cbwk_trace* trace) {
  return trace ? static_cast<int32_t>(trace->impl.rounds.size()) : -1;
}

double cbwk_trace_total_expected(const cbwk_trace* trace) {
  return trace ? trace->impl.total_expected : -1.0;
}

double cbwk_trace_total_realized(const cbwk_trace* trace) {
  return trace ? trace->impl.total_realized : -1.0;
}

double cbwk_trace_total_spend(const cbwk_trace* trace) {
  return trace ? trace->impl.total_spend : -1.0;
}

cbwk_status cbwk_trace_pull_counts(const cbwk_trace* trace, int32_t* out,
                                   int32_t capacity) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(trace && out, "null pointer argument"); s) return s;
    if (auto s = require(
            capacity >= static_cast<int32_t>(trace->impl.pull_counts.size()),
            "buffer smaller than the number of arms");
        s)
      return s;
    for (std::size_t i = 0; i < trace->impl.pull_counts.size(); ++i)
      out[i] = trace->impl.pull_counts[i];
    return CBWK_OK;
  });
}

cbwk_status cbwk_trace_write_file(const cbwk_trace* trace, const char* path) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(trace && path, "null pointer argument"); s) return s;
    cbwk::write_trace_file(trace->impl, path);
    return CBWK_OK;
  });
}

cbwk_status cbwk_pseudo_regret(const cbwk_trace* trace,
                               const cbwk_instance* inst, double* out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(trace && inst && out, "null pointer argument"); s)
      return s;
    *out = cbwk::pseudo_regret(trace->impl, inst->impl);
    return CBWK_OK;
  });
}

void cbwk_trace_free(cbwk_trace* trace) { delete trace; }

/* ---- experiments ---- */

cbwk_status cbwk_config_load(const char* path, cbwk_config** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(path && out, "null pointer argument"); s) return s;
    *out = new cbwk_config{cbwk::load_config_file(path)};
    return CBWK_OK;
  });
}

cbwk_status cbwk_config_set(cbwk_config* config, const char* key,
                            const char* value) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(config && key && value, "null pointer argument"); s)
      return s;
    cbwk::config_set(config->input, key, value);
    return CBWK_OK;
  });
}

cbwk_status cbwk_config_hash(const cbwk_config* config, uint64_t* out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(config && out, "null pointer argument"); s) return s;
    *out = cbwk::config_hash(cbwk::resolve_config(config->input));
    return CBWK_OK;
  });
}

void cbwk_config_free(cbwk_config* config) { delete config; }

cbwk_status cbwk_experiment_run(const cbwk_config* config, cbwk_results** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(config && out, "null pointer argument"); s) return s;
    *out = new cbwk_results{
        cbwk::run_experiment(cbwk::resolve_config(config->input))};
    return CBWK_OK;
  });
}

cbwk_status cbwk_results_write_csv(const cbwk_results* results,
                                   const char* path) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(results && path, "null pointer argument"); s) return s;
    cbwk::emit_csv_file(results->impl, path);
    return CBWK_OK;
  });
}

cbwk_status cbwk_results_read_csv(const char* path, cbwk_results** out) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(path && out, "null pointer argument"); s) return s;
    *out = new cbwk_results{cbwk::read_csv_file(path)};
    return CBWK_OK;
  });
}

cbwk_status cbwk_results_write_plotdata(const cbwk_results* results,
                                        const char* normalize_policy,
                                        const char* path) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(results && path, "null pointer argument"); s) return s;
    std::optional<std::string> normalize;
    if (normalize_policy) normalize = normalize_policy;
    if (std::string_view(path) == "-") {
      cbwk::emit_plotdata(results->impl, normalize, std::cout);
      std::cout.flush();
      return CBWK_OK;
    }
    std::ofstream out(path);
    if (!out) throw cbwk::IoError(std::string("cannot open for writing: ") + path);
    cbwk::emit_plotdata(results->impl, normalize, out);
    if (!out) throw cbwk::IoError(std::string("failed while writing: ") + path);
    return CBWK_OK;
  });
}

cbwk_status cbwk_write_run_metadata(const cbwk_config* config,
                                    const char* path) {
  return guarded([&]() -> cbwk_status {
    if (auto s = require(config && path, "null pointer argument"); s) return s;
    cbwk::write_run_metadata_file(cbwk::resolve_config(config->input), path);
    return CBWK_OK;
  });
}

void cbwk_results_free(cbwk_results* results) { delete results; }

} /* extern "C" */
