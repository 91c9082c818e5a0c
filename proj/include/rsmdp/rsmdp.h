#ifndef RSMDP_RSMDP_H
#define RSMDP_RSMDP_H

#include <stddef.h>
#include <stdint.h>

#if defined(RSMDP_BUILDING_LIBRARY)
#define RSMDP_API __attribute__((visibility("default")))
#else
#define RSMDP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsmdp_status {
    RSMDP_OK = 0,
    RSMDP_INVALID_ARGUMENT = 1,
    RSMDP_INVALID_START = 2,
    RSMDP_DEGENERATE_ALPHA = 3,
    RSMDP_UNSUPPORTED = 4,
    RSMDP_LP_INFEASIBLE = 5,
    RSMDP_LP_UNBOUNDED = 6,
    RSMDP_ITERATION_CAP_EXCEEDED = 7,
    RSMDP_NON_CONVERGENCE = 8,
    RSMDP_PARSE_ERROR = 9,
    RSMDP_SCHEMA_VIOLATION = 10,
    RSMDP_IO_ERROR = 11,
    RSMDP_CORRUPT_CHECKPOINT = 12,
    RSMDP_INTERNAL = 99
} rsmdp_status;

typedef enum rsmdp_risk_kind { RSMDP_RISK_MEAN = 0, RSMDP_RISK_CVAR = 1 } rsmdp_risk_kind;

/* Opaque handles. */
typedef struct rsmdp_config rsmdp_config;
typedef struct rsmdp_env rsmdp_env;
typedef struct rsmdp_checkpoint rsmdp_checkpoint;

RSMDP_API const char* rsmdp_version(void);
/* Message of the last failing call on this thread; never NULL. */
RSMDP_API const char* rsmdp_last_error(void);
/* Frees strings returned through char** out-parameters. */
RSMDP_API void rsmdp_string_free(char* s);

/* Experiment configuration. */
RSMDP_API rsmdp_status rsmdp_config_load(const char* path, rsmdp_config** out);
RSMDP_API rsmdp_status rsmdp_config_parse(const char* json_text, rsmdp_config** out);
/* preset: coin-mean, coin-cvar, inventory-mean or inventory-cvar. */
RSMDP_API rsmdp_status rsmdp_config_preset(const char* preset, int outer_cvar, rsmdp_config** out);
RSMDP_API void rsmdp_config_free(rsmdp_config* cfg);
RSMDP_API rsmdp_status rsmdp_config_set_seed(rsmdp_config* cfg, uint64_t seed);
RSMDP_API rsmdp_status rsmdp_config_set_runs(rsmdp_config* cfg, size_t runs);
RSMDP_API rsmdp_status rsmdp_config_set_out(rsmdp_config* cfg, const char* dir);
RSMDP_API rsmdp_status rsmdp_config_set_theta(rsmdp_config* cfg, double theta);
RSMDP_API rsmdp_status rsmdp_config_to_json(const rsmdp_config* cfg, char** out);

/* Environments. */
RSMDP_API rsmdp_status rsmdp_env_coin_toss(double p_head, rsmdp_env** out);
RSMDP_API rsmdp_status rsmdp_env_inventory(size_t n, double k, double h, double p, double tilt, rsmdp_env** out);
RSMDP_API rsmdp_status rsmdp_env_from_config(const rsmdp_config* cfg, rsmdp_env** out);
RSMDP_API void rsmdp_env_free(rsmdp_env* env);
RSMDP_API size_t rsmdp_env_n_states(const rsmdp_env* env);
RSMDP_API size_t rsmdp_env_n_actions(const rsmdp_env* env);
RSMDP_API int rsmdp_env_state_label(const rsmdp_env* env, size_t state);
RSMDP_API int rsmdp_env_action_label(const rsmdp_env* env, size_t action);

/*
 * Oracle solve. Writes n_states action labels and values; either output may be NULL.
 * alpha is ignored for RSMDP_RISK_MEAN.
 */
RSMDP_API rsmdp_status rsmdp_oracle_solve(const rsmdp_env* env, rsmdp_risk_kind inner, double alpha, double theta,
                                          int* action_labels, double* values, size_t n_states);

/* Human-readable oracle report for the config's environment and inner risk; theta <= 0 uses training.theta. */
RSMDP_API rsmdp_status rsmdp_solve_report(const rsmdp_config* cfg, double theta, char** out);

typedef struct rsmdp_run_options {
    size_t jobs;
    int timing; /* 0 writes wall_ms = 0 */
} rsmdp_run_options;

/* Runs and writes the experiment; *summary receives a short text summary. */
RSMDP_API rsmdp_status rsmdp_run_experiment(const rsmdp_config* cfg, const rsmdp_run_options* opts, char** summary);

/* Checkpoints. */
RSMDP_API rsmdp_status rsmdp_checkpoint_load(const char* path, rsmdp_checkpoint** out);
RSMDP_API rsmdp_status rsmdp_checkpoint_save(const rsmdp_checkpoint* ckpt, const char* path);
RSMDP_API void rsmdp_checkpoint_free(rsmdp_checkpoint* ckpt);
RSMDP_API size_t rsmdp_checkpoint_n_states(const rsmdp_checkpoint* ckpt);
RSMDP_API size_t rsmdp_checkpoint_n_actions(const rsmdp_checkpoint* ckpt);

/* Robustness sweep of the checkpoint's greedy policy over the config's deployment grid. */
RSMDP_API rsmdp_status rsmdp_eval_checkpoint(const rsmdp_config* cfg, const rsmdp_checkpoint* ckpt, char** report);

/* Bound calculators over a JSON parameter file; *report is a name/value table. */
RSMDP_API rsmdp_status rsmdp_bounds_report(const char* params_path, char** report);

#ifdef __cplusplus
}
#endif

#endif
