/* C interface to the budgeted combinatorial bandit library.
 *
 * Conventions:
 *   - Every object is an opaque handle created by a cbwk_*_ function and
 *     released by the matching cbwk_*_free.
 *   - Functions that can fail return cbwk_status; CBWK_OK is 0. On failure
 *     cbwk_last_error() returns a thread-local message with the details.
 *   - Output buffers are caller-allocated; their capacity (element count) is
 *     passed alongside and must cover the object, e.g. cbwk_instance_arms().
 */
#ifndef CBWK_CBWK_H
#define CBWK_CBWK_H

#include <stdint.h>

#if defined(_WIN32)
#define CBWK_API __declspec(dllexport)
#else
#define CBWK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbwk_status {
  CBWK_OK = 0,
  CBWK_ERR_INVALID_ARGUMENT = 1, /* null handle, bad enum, short buffer */
  CBWK_ERR_VALIDATION = 2,       /* domain constraint violated */
  CBWK_ERR_PARSE = 3,            /* malformed text input */
  CBWK_ERR_IO = 4,               /* file could not be read or written */
  CBWK_ERR_INTERNAL = 5
} cbwk_status;

CBWK_API const char* cbwk_status_name(cbwk_status status);

/* Message describing the most recent failure on this thread. */
CBWK_API const char* cbwk_last_error(void);

/* ---- problem instances ---- */

typedef struct cbwk_instance cbwk_instance;

CBWK_API cbwk_status cbwk_instance_create(int32_t n_arms, const double* mu,
                                          const double* cost, double budget,
                                          int32_t horizon, cbwk_instance** out);
/* Arms with means and costs i.i.d. uniform on [0,1] (costs floored at 1e-6). */
CBWK_API cbwk_status cbwk_instance_gen_iid_uniform(int32_t n_arms,
                                                   int32_t horizon,
                                                   double budget, uint64_t seed,
                                                   cbwk_instance** out);
/* Four arms in separated quality tiers (see library docs). */
CBWK_API cbwk_status cbwk_instance_gen_tiered(int32_t horizon, double budget,
                                              uint64_t seed,
                                              cbwk_instance** out);
CBWK_API cbwk_status cbwk_instance_read_file(const char* path,
                                             cbwk_instance** out);
CBWK_API cbwk_status cbwk_instance_write_file(const cbwk_instance* inst,
                                              const char* path);
CBWK_API int32_t cbwk_instance_arms(const cbwk_instance* inst);
CBWK_API int32_t cbwk_instance_horizon(const cbwk_instance* inst);
CBWK_API double cbwk_instance_budget(const cbwk_instance* inst);
CBWK_API cbwk_status cbwk_instance_means(const cbwk_instance* inst, double* out,
                                         int32_t capacity);
CBWK_API cbwk_status cbwk_instance_costs(const cbwk_instance* inst, double* out,
                                         int32_t capacity);
CBWK_API void cbwk_instance_free(cbwk_instance* inst);

/* ---- offline solvers ---- */

typedef struct cbwk_allocation cbwk_allocation;

/* Greedy bang-per-buck allocation. */
CBWK_API cbwk_status cbwk_solve_greedy(const cbwk_instance* inst,
                                       cbwk_allocation** out);
/* Greedy with best-single-arm fallback (2-approximation of the optimum). */
CBWK_API cbwk_status cbwk_solve_greedy_2approx(const cbwk_instance* inst,
                                               cbwk_allocation** out);
/* Exact optimum by DP; scale * cost[i] must be integral for every arm.
 * Intended for small instances (test oracles, spot checks). */
CBWK_API cbwk_status cbwk_solve_dp(const cbwk_instance* inst, int32_t scale,
                                   cbwk_allocation** out);
/* Fractional-relaxation optimum. zeta may be NULL if only the value is
 * wanted; otherwise it receives one entry per arm. */
CBWK_API cbwk_status cbwk_solve_lp(const cbwk_instance* inst, double* opt_value,
                                   double* zeta, int32_t zeta_capacity);
CBWK_API cbwk_status cbwk_allocation_counts(const cbwk_allocation* alloc,
                                            int32_t* out, int32_t capacity);
CBWK_API double cbwk_allocation_total_value(const cbwk_allocation* alloc);
CBWK_API double cbwk_allocation_total_cost(const cbwk_allocation* alloc);
CBWK_API void cbwk_allocation_free(cbwk_allocation* alloc);

/* ---- online episodes ---- */

typedef enum cbwk_policy {
  CBWK_POLICY_GREEDY_UCB = 0,
  CBWK_POLICY_LP_UCB = 1,
  CBWK_POLICY_FIXED_BUDGET = 2
} cbwk_policy;

typedef enum cbwk_reward_model {
  CBWK_REWARD_BERNOULLI = 0,
  CBWK_REWARD_DEGENERATE_MEAN = 1
} cbwk_reward_model;

typedef struct cbwk_policy_params {
  double alpha;            /* optimism coefficient, default 5 */
  int32_t use_rad_ucb;     /* nonzero selects the rad-based index */
  double kappa;            /* rad index scale, default 1 */
  double per_round_budget; /* fixed-budget baseline; <= 0 means B / T */
} cbwk_policy_params;

CBWK_API void cbwk_policy_params_init(cbwk_policy_params* params);

typedef struct cbwk_trace cbwk_trace;

CBWK_API cbwk_status cbwk_run_episode(const cbwk_instance* inst,
                                      cbwk_policy policy,
                                      const cbwk_policy_params* params,
                                      cbwk_reward_model reward_model,
                                      uint64_t seed, cbwk_trace** out);
CBWK_API int32_t cbwk_trace_rounds(const cbwk_trace* trace);
CBWK_API double cbwk_trace_total_expected(const cbwk_trace* trace);
CBWK_API double cbwk_trace_total_realized(const cbwk_trace* trace);
CBWK_API double cbwk_trace_total_spend(const cbwk_trace* trace);
CBWK_API cbwk_status cbwk_trace_pull_counts(const cbwk_trace* trace,
                                            int32_t* out, int32_t capacity);
CBWK_API cbwk_status cbwk_trace_write_file(const cbwk_trace* trace,
                                           const char* path);
/* Regret of the traced episode against the fractional optimum on the true
 * means of `inst` (the instance the episode was run on). */
CBWK_API cbwk_status cbwk_pseudo_regret(const cbwk_trace* trace,
                                        const cbwk_instance* inst, double* out);
CBWK_API void cbwk_trace_free(cbwk_trace* trace);

/* ---- experiments ---- */

typedef struct cbwk_config cbwk_config;
typedef struct cbwk_results cbwk_results;

CBWK_API cbwk_status cbwk_config_load(const char* path, cbwk_config** out);
/* Override one key (same keys as the config file); later settings win. */
CBWK_API cbwk_status cbwk_config_set(cbwk_config* config, const char* key,
                                     const char* value);
/* Hash of the fully resolved configuration (also recorded in metadata). */
CBWK_API cbwk_status cbwk_config_hash(const cbwk_config* config, uint64_t* out);
CBWK_API void cbwk_config_free(cbwk_config* config);

CBWK_API cbwk_status cbwk_experiment_run(const cbwk_config* config,
                                         cbwk_results** out);
CBWK_API cbwk_status cbwk_results_write_csv(const cbwk_results* results,
                                            const char* path);
CBWK_API cbwk_status cbwk_results_read_csv(const char* path,
                                           cbwk_results** out);
/* normalize_policy may be NULL for raw series. path "-" writes to stdout. */
CBWK_API cbwk_status cbwk_results_write_plotdata(const cbwk_results* results,
                                                 const char* normalize_policy,
                                                 const char* path);
CBWK_API cbwk_status cbwk_write_run_metadata(const cbwk_config* config,
                                             const char* path);
CBWK_API void cbwk_results_free(cbwk_results* results);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CBWK_CBWK_H */
