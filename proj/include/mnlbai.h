/* C interface to the MNL best-arm identification library.
 *
 * All functions return a status code; MNLBAI_OK is 0. On failure,
 * mnlbai_last_error() returns a thread-local message describing the problem.
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function. Strings returned through char**
 * out-parameters are heap-allocated; release them with mnlbai_string_free.
 */
#ifndef MNLBAI_H
#define MNLBAI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t mnlbai_status;

enum {
  MNLBAI_OK = 0,
  MNLBAI_ERR_INVALID_ARGUMENT = 1,
  MNLBAI_ERR_PARSE = 2,
  MNLBAI_ERR_IO = 3,
  MNLBAI_ERR_INTERNAL = 4
};

typedef struct mnlbai_instance mnlbai_instance;
typedef struct mnlbai_result mnlbai_result;

enum {
  MNLBAI_STRATEGY_STATIC = 0,
  MNLBAI_STRATEGY_ADAPTIVE = 1,
  MNLBAI_STRATEGY_RANDOM = 2
};

enum {
  MNLBAI_SELECTION_GAP_GREEDY = 0,
  MNLBAI_SELECTION_ARM_GREEDY = 1,
  MNLBAI_SELECTION_RANDOM = 2
};

enum {
  MNLBAI_FEEDBACK_MNL = 0,
  MNLBAI_FEEDBACK_GAUSSIAN_RUM = 1
};

typedef struct mnlbai_run_config {
  int32_t explore_steps;
  double lambda;
  double ridge;
  double kappa_alpha;
  double batch_alpha;
  uint64_t max_steps;
  int32_t selection_rule; /* MNLBAI_SELECTION_* */
  int32_t feedback;       /* MNLBAI_FEEDBACK_* */
  double rum_sigma;
  int32_t record_trajectory;
} mnlbai_run_config;

const char* mnlbai_status_name(mnlbai_status status);
const char* mnlbai_last_error(void);
void mnlbai_string_free(char* s);

/* Instance handling. JSON schema:
 * {"arms": [[f64...], ...], "theta_star": [f64...], "K": int, "delta": f64} */
mnlbai_status mnlbai_instance_parse_json(const char* json, mnlbai_instance** out);
mnlbai_status mnlbai_instance_standard(int32_t d, double omega, int32_t k, double delta,
                                       mnlbai_instance** out);
mnlbai_status mnlbai_instance_to_json(const mnlbai_instance* instance, char** out_json);
int32_t mnlbai_instance_arm_count(const mnlbai_instance* instance);
int32_t mnlbai_instance_dim(const mnlbai_instance* instance);
int32_t mnlbai_instance_best_arm(const mnlbai_instance* instance);
void mnlbai_instance_free(mnlbai_instance* instance);

/* Fills cfg with the library defaults. */
void mnlbai_run_config_init(mnlbai_run_config* cfg);

/* One simulated identification run with the given strategy and RNG seed. */
mnlbai_status mnlbai_run(const mnlbai_instance* instance, const mnlbai_run_config* cfg,
                         int32_t strategy, uint64_t seed, mnlbai_result** out);
int32_t mnlbai_result_returned_arm(const mnlbai_result* result);
uint64_t mnlbai_result_tau(const mnlbai_result* result);
int32_t mnlbai_result_correct(const mnlbai_result* result);
int32_t mnlbai_result_truncated(const mnlbai_result* result);
mnlbai_status mnlbai_result_to_json(const mnlbai_result* result, int32_t include_trajectory,
                                    char** out_json);
void mnlbai_result_free(mnlbai_result* result);

/* Evaluates the identification lower bound for the instance; delta comes from
 * the instance. Returns a JSON report. */
mnlbai_status mnlbai_lower_bound_json(const char* instance_json, double epsilon,
                                      char** out_report_json);

/* Runs an experiment described by a JSON spec into out_dir. jobs <= 0 picks
 * the hardware concurrency; full_scale != 0 switches to the paper-scale
 * instance angle. seed_override is applied when has_seed_override != 0.
 * Returns a JSON summary listing the emitted files and aggregate rows. */
mnlbai_status mnlbai_run_experiment(const char* spec_json, const char* out_dir, int32_t jobs,
                                    int32_t full_scale, int32_t has_seed_override,
                                    uint64_t seed_override, char** out_summary_json);

/* Runs the fast self-check subset. Writes the number of failed checks to
 * out_failed and a human-readable report to out_report. */
mnlbai_status mnlbai_verify(int32_t* out_failed, char** out_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MNLBAI_H */
