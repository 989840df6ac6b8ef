/*
 * leosim C API.
 *
 * Opaque handles over the simulator core. Every fallible call returns a
 * leosim_status; on failure leosim_last_error() describes the problem (the
 * message is thread-local and valid until the next failing call on the same
 * thread). Metrics that do not exist (no samples, nothing generated) are
 * reported as NaN.
 */
#ifndef LEOSIM_LEOSIM_H_
#define LEOSIM_LEOSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  if defined(LEOSIM_BUILD)
#    define LEOSIM_API __declspec(dllexport)
#  elif defined(LEOSIM_SHARED)
#    define LEOSIM_API __declspec(dllimport)
#  else
#    define LEOSIM_API
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define LEOSIM_API __attribute__((visibility("default")))
#else
#  define LEOSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum leosim_status {
  LEOSIM_OK = 0,
  LEOSIM_ERR_VALIDATION = 1,
  LEOSIM_ERR_AUDIT = 2,
  LEOSIM_ERR_IO = 3,
  LEOSIM_ERR_ARGUMENT = 4,
  LEOSIM_ERR_INTERNAL = 5
} leosim_status;

typedef enum leosim_class {
  LEOSIM_CLASS_A = 0,
  LEOSIM_CLASS_B2 = 1,
  LEOSIM_CLASS_B1 = 2,
  LEOSIM_CLASS_B0 = 3
} leosim_class;

typedef enum leosim_scope {
  LEOSIM_SCOPE_ALL = 0,  /* every packet */
  LEOSIM_SCOPE_FLOW = 1  /* tagged foreground flows only */
} leosim_scope;

typedef struct leosim_scenario leosim_scenario;
typedef struct leosim_report leosim_report;

typedef struct leosim_class_metrics {
  uint64_t generated;
  uint64_t delivered;
  uint64_t dropped;
  double throughput_ratio; /* delivered / generated */
  double mean_delay_ms;
  double p90_delay_ms;
  double mean_hops;
} leosim_class_metrics;

typedef struct leosim_counters {
  uint64_t events_processed;
  uint64_t state_changes;
  uint64_t backup_recomputations;
  uint64_t wait_for_route;
  uint64_t backup_forwards;
  uint64_t residual; /* packets still in the network at the horizon */
} leosim_counters;

LEOSIM_API const char* leosim_version(void);
LEOSIM_API const char* leosim_last_error(void);
LEOSIM_API const char* leosim_status_name(leosim_status status);

/* Scenarios */
LEOSIM_API leosim_status leosim_scenario_default(leosim_scenario** out);
LEOSIM_API leosim_status leosim_scenario_load(const char* path, leosim_scenario** out);
/* base_dir resolves relative grid/ratio paths; may be NULL. */
LEOSIM_API leosim_status leosim_scenario_parse(const char* text, const char* base_dir,
                                               leosim_scenario** out);
LEOSIM_API leosim_status leosim_scenario_set(leosim_scenario* scenario, const char* key,
                                             const char* value);
/* Copies the value of one key into buf. needed (optional) receives the size
 * including the terminator; a too-small buffer yields LEOSIM_ERR_ARGUMENT. */
LEOSIM_API leosim_status leosim_scenario_get(const leosim_scenario* scenario, const char* key,
                                             char* buf, size_t cap, size_t* needed);
LEOSIM_API leosim_status leosim_scenario_validate(const leosim_scenario* scenario);
LEOSIM_API leosim_status leosim_scenario_serialize(const leosim_scenario* scenario, char* buf,
                                                   size_t cap, size_t* needed);
LEOSIM_API void leosim_scenario_free(leosim_scenario* scenario);

/* Runs */
LEOSIM_API leosim_status leosim_run(const leosim_scenario* scenario, leosim_report** out);
/* Runs, exports into out_dir (the scenario's run.output_dir when NULL) and
 * enforces the conservation audit. */
LEOSIM_API leosim_status leosim_run_experiment(const leosim_scenario* scenario,
                                               const char* out_dir);

/* Reports */
LEOSIM_API leosim_status leosim_report_audit(const leosim_report* report);
LEOSIM_API leosim_status leosim_report_export(const leosim_report* report, const char* out_dir);
LEOSIM_API leosim_status leosim_report_class_metrics(const leosim_report* report,
                                                     leosim_scope scope, leosim_class cls,
                                                     leosim_class_metrics* out);
LEOSIM_API leosim_status leosim_report_counters(const leosim_report* report,
                                                leosim_counters* out);
LEOSIM_API void leosim_report_free(leosim_report* report);

/* Compares two exported report directories (b minus a) into a CSV table. */
LEOSIM_API leosim_status leosim_compare_dirs(const char* dir_a, const char* dir_b, char* buf,
                                             size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* LEOSIM_LEOSIM_H_ */
