/* C interface to the nslab experiment library. */
#ifndef NSLAB_NSLAB_H
#define NSLAB_NSLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(NSLAB_BUILDING_LIBRARY)
#define NSLAB_API __attribute__((visibility("default")))
#else
#define NSLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nslab_config nslab_config;
typedef struct nslab_run nslab_run;
typedef struct nslab_field nslab_field;

/* Status codes.  The first four coincide with the CLI exit codes. */
typedef enum {
    NSLAB_OK = 0,
    NSLAB_ERR_VERDICT = 1,
    NSLAB_ERR_CONFIG = 2,
    NSLAB_ERR_NUMERICAL = 3,
    NSLAB_ERR_ARGUMENT = 4,
    NSLAB_ERR_IO = 5,
    NSLAB_ERR_INTERNAL = 6
} nslab_status;

NSLAB_API const char* nslab_version(void);
/* Message of the last failed call on this thread; empty if none. */
NSLAB_API const char* nslab_last_error(void);

NSLAB_API int nslab_experiment_count(void);
NSLAB_API const char* nslab_experiment_name(int index);

/* Configuration. */
NSLAB_API int nslab_config_load(const char* path, nslab_config** out);
NSLAB_API int nslab_config_parse(const char* text, nslab_config** out);
/* Replaces or adds one key and revalidates; the handle is unchanged on failure. */
NSLAB_API int nslab_config_set(nslab_config* cfg, const char* key, const char* value);
NSLAB_API const char* nslab_config_experiment(const nslab_config* cfg);
NSLAB_API const char* nslab_config_output_dir(const nslab_config* cfg);
NSLAB_API void nslab_config_free(nslab_config* cfg);

/* Runs the configured experiment.  Returns NSLAB_OK when a manifest was
   produced, whatever the verdicts; the run's own status is nslab_run_exit_code. */
NSLAB_API int nslab_run_experiment(const nslab_config* cfg, nslab_run** out);
NSLAB_API int nslab_run_exit_code(const nslab_run* run);
NSLAB_API const char* nslab_run_error(const nslab_run* run);
NSLAB_API double nslab_run_wall_seconds(const nslab_run* run);
NSLAB_API size_t nslab_run_verdict_count(const nslab_run* run);
/* Borrowed strings stay valid until nslab_run_free. */
NSLAB_API int nslab_run_verdict(const nslab_run* run, size_t index, const char** label, int* pass, double* value,
                                double* bound, const char** detail);
NSLAB_API size_t nslab_run_file_count(const nslab_run* run);
NSLAB_API int nslab_run_file(const nslab_run* run, size_t index, const char** path, uint64_t* bytes);
NSLAB_API void nslab_run_free(nslab_run* run);

/* Velocity fields. */
NSLAB_API int nslab_field_generate(const char* kind, double L, int N, uint64_t seed, nslab_field** out);
NSLAB_API int nslab_field_load(const char* path, nslab_field** out);
NSLAB_API int nslab_field_save(const nslab_field* field, const char* path);
NSLAB_API int nslab_field_grid(const nslab_field* field, double* L, int* N);
/* Inhomogeneous Sobolev norm of order s. */
NSLAB_API int nslab_field_norm(const nslab_field* field, double s, double* out);
NSLAB_API int nslab_field_divergence(const nslab_field* field, double* out);
NSLAB_API void nslab_field_free(nslab_field* field);

#ifdef __cplusplus
}
#endif

#endif
