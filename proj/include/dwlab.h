/* dwlab — damped-wave scaling laboratory, C API.
 *
 * The core is a C++ library; this header is the stable boundary for language
 * bindings and the bundled CLI. All state lives behind opaque handles, all
 * functions return dwlab_status, and every char* output is owned by the
 * caller and released with dwlab_string_free().
 */
#ifndef DWLAB_H
#define DWLAB_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DWLAB_API __declspec(dllexport)
#else
#define DWLAB_API __attribute__((visibility("default")))
#endif

typedef enum dwlab_status {
    DWLAB_OK = 0,
    DWLAB_E_VALIDATION = 2, /* configuration rejected */
    DWLAB_E_BLOWUP = 3,     /* run ended in finite-time blow-up (summary still written) */
    DWLAB_E_INTERNAL = 4,   /* anything else */
    DWLAB_E_ARGUMENT = 5    /* null pointer or malformed argument */
} dwlab_status;

/* Opaque, immutable run configuration. */
typedef struct dwlab_config dwlab_config;

DWLAB_API const char* dwlab_version(void);

/* Build a configuration from a JSON file or an in-memory JSON string. */
DWLAB_API dwlab_status dwlab_config_from_file(const char* path, dwlab_config** out);
DWLAB_API dwlab_status dwlab_config_from_json(const char* json_text, dwlab_config** out);
DWLAB_API void dwlab_config_free(dwlab_config* cfg);

/* Validation report as JSON ({"runnable": bool, "issues": [...]}), always
 * produced; the status is DWLAB_E_VALIDATION when the config is not runnable. */
DWLAB_API dwlab_status dwlab_validate(const dwlab_config* cfg, char** report_json);

/* Simulate and persist under <out_root>/runs/<id>/. On DWLAB_E_BLOWUP the
 * summary records the blow-up time; other artifacts are kept. */
DWLAB_API dwlab_status dwlab_run(const dwlab_config* cfg, const char* out_root,
                                 char** run_dir_out);

/* Staged post-processing of a persisted run directory. */
DWLAB_API dwlab_status dwlab_decompose(const char* run_dir);
DWLAB_API dwlab_status dwlab_energy(const char* run_dir);
DWLAB_API dwlab_status dwlab_rates(const char* run_dir, char** ratefit_json);

/* Predicted rate constants {lambda0, lambda1, lambda, exponent}. */
DWLAB_API dwlab_status dwlab_rates_predict(const dwlab_config* cfg, char** json_out);

/* Cartesian parameter sweep from a sweep-config JSON file; aggregates
 * <out_root>/sweep.csv. `jobs` bounds the number of concurrent runs. */
DWLAB_API dwlab_status dwlab_sweep(const char* sweep_config_path, const char* out_root, int jobs);

/* Built-in invariant suite. Returns DWLAB_OK when every check passes. */
DWLAB_API dwlab_status dwlab_selftest(int verbose);

/* Message describing the most recent failure on this thread. */
DWLAB_API const char* dwlab_last_error(void);

DWLAB_API void dwlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DWLAB_H */
