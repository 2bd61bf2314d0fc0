#ifndef PREDSYNC_H
#define PREDSYNC_H

#include <stddef.h>

#if defined(_WIN32)
#define PSYNC_API __declspec(dllexport)
#else
#define PSYNC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psync_status {
    PSYNC_OK = 0,
    PSYNC_E_INVALID_ARGUMENT,
    PSYNC_E_CYCLE_DETECTED,
    PSYNC_E_LEADER_HAS_IN_EDGE,
    PSYNC_E_EDGE_ABSENT,
    PSYNC_E_NON_SQUARE,
    PSYNC_E_NON_FINITE,
    PSYNC_E_SHAPE_MISMATCH,
    PSYNC_E_NO_SOLUTION,
    PSYNC_E_UNCONTROLLABLE,
    PSYNC_E_TARGETS_NOT_CONJUGATE_CLOSED,
    PSYNC_E_DUPLICATE_SEND,
    PSYNC_E_HORIZON_INSUFFICIENT,
    PSYNC_E_INSUFFICIENT_DATA,
    PSYNC_E_RANK_COLLAPSE,
    PSYNC_E_MISSING_INPUT,
    PSYNC_E_PARSE,
    PSYNC_E_VALIDATION,
    PSYNC_E_IO,
    PSYNC_E_INTERNAL
} psync_status;

typedef struct psync_scenario psync_scenario;
typedef struct psync_sim_result psync_sim_result;
typedef struct psync_sir_params psync_sir_params;

/* Message of the last failing call on this thread; "" after a success. */
PSYNC_API const char* psync_last_error(void);
PSYNC_API const char* psync_status_name(psync_status status);
/* Nonzero for statuses caused by the input (bad file, failed checks). */
PSYNC_API int psync_status_is_validation(psync_status status);

/* Strings returned through char** are owned by the caller. */
PSYNC_API void psync_string_free(char* s);

/* format: "toml", "json", or NULL to guess. */
PSYNC_API psync_status psync_scenario_load(const char* path, psync_scenario** out);
PSYNC_API psync_status psync_scenario_parse(const char* text, const char* format, psync_scenario** out);
PSYNC_API void psync_scenario_free(psync_scenario* sc);
PSYNC_API psync_status psync_scenario_set_mode(psync_scenario* sc, const char* mode);
PSYNC_API psync_status psync_scenario_set_horizon(psync_scenario* sc, int steps);
PSYNC_API psync_status psync_scenario_to_json(const psync_scenario* sc, char** out);
/* *ok is set to 1 when every check passes; the report is produced either way. */
PSYNC_API psync_status psync_scenario_check(const psync_scenario* sc, char** report_json, int* ok);

PSYNC_API psync_status psync_simulate(const psync_scenario* sc, psync_sim_result** out);
PSYNC_API void psync_sim_result_free(psync_sim_result* res);
/* format: "csv" or "json". */
PSYNC_API psync_status psync_sim_write_trace(const psync_sim_result* res, const char* path, const char* format);
PSYNC_API psync_status psync_sim_metrics_json(const psync_sim_result* res, char** out);
PSYNC_API int psync_sim_steps(const psync_sim_result* res);
PSYNC_API int psync_sim_agent_count(const psync_sim_result* res);
/* Copies y_node(k) / xi_node(k) into buf; *len receives the vector length. */
PSYNC_API psync_status psync_sim_output(const psync_sim_result* res, int node, int k, double* buf, size_t cap,
                                        size_t* len);
PSYNC_API psync_status psync_sim_observer_state(const psync_sim_result* res, int node, int k, double* buf,
                                                size_t cap, size_t* len);
/* s = 0 is the base predictor, s >= 1 the forecasts. */
PSYNC_API psync_status psync_sim_prediction(const psync_sim_result* res, int sender, int receiver, int k, int s,
                                            double* buf, size_t cap, size_t* len);

PSYNC_API psync_status psync_sir_load(const char* path, psync_sir_params** out);
PSYNC_API psync_status psync_sir_parse(const char* text, const char* format, psync_sir_params** out);
PSYNC_API void psync_sir_free(psync_sir_params* p);
/* mode: "baseline", "compensated" or "compare". trace_path may be NULL. */
PSYNC_API psync_status psync_sir_run(const psync_sir_params* p, const char* mode, const char* trace_path,
                                     char** report_json);
PSYNC_API psync_status psync_koopman_fit(const psync_sir_params* p, char** model_json);

#ifdef __cplusplus
}
#endif

#endif
