#ifndef QNETSIM_H
#define QNETSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QNETSIM_API __declspec(dllexport)
#else
#define QNETSIM_API __attribute__((visibility("default")))
#endif

typedef enum qnetsim_status {
  QNETSIM_OK = 0,
  QNETSIM_ERR_PARSE = 1,
  QNETSIM_ERR_VALIDATION = 2,
  QNETSIM_ERR_NUMERICAL = 3, /* a tolerance or normalization check failed */
  QNETSIM_ERR_IO = 4,
  QNETSIM_ERR_ARGUMENT = 5,  /* bad handle, index or parameter */
  QNETSIM_ERR_MODEL = 6,     /* constraint violated, degenerate system, ... */
  QNETSIM_ERR_INTERNAL = 7
} qnetsim_status;

typedef struct qnetsim_config qnetsim_config;
typedef struct qnetsim_result qnetsim_result;

#define QNETSIM_ALL ((size_t)-1)

QNETSIM_API const char* qnetsim_version(void);

/* Message of the last failure on the calling thread ("" if none). */
QNETSIM_API const char* qnetsim_last_error(void);

QNETSIM_API const char* qnetsim_status_name(qnetsim_status status);

/* Scenario lists. */
QNETSIM_API qnetsim_status qnetsim_config_parse(const char* text, qnetsim_config** out);
QNETSIM_API qnetsim_status qnetsim_config_load(const char* path, qnetsim_config** out);
QNETSIM_API void qnetsim_config_free(qnetsim_config* config);

QNETSIM_API size_t qnetsim_config_count(const qnetsim_config* config);
QNETSIM_API qnetsim_status qnetsim_config_name(const qnetsim_config* config, size_t index,
                                               const char** name);
QNETSIM_API qnetsim_status qnetsim_config_operation(const qnetsim_config* config, size_t index,
                                                    const char** operation);

/* Overrides applied to every scenario. */
QNETSIM_API qnetsim_status qnetsim_config_set_seed(qnetsim_config* config, uint64_t seed);
QNETSIM_API qnetsim_status qnetsim_config_set_samples(qnetsim_config* config, int samples);

/* YAML text; release with qnetsim_string_free. */
QNETSIM_API qnetsim_status qnetsim_config_serialize(const qnetsim_config* config, char** text);
QNETSIM_API void qnetsim_string_free(char* text);

/* Runs every scenario whose operation is `operation` ("eig", "evolve", "fig3",
 * "protocol", "entropy"), at most `jobs` at a time. */
QNETSIM_API qnetsim_status qnetsim_run(const qnetsim_config* config, const char* operation,
                                       unsigned jobs, qnetsim_result** out);
QNETSIM_API void qnetsim_result_free(qnetsim_result* result);

QNETSIM_API size_t qnetsim_result_count(const qnetsim_result* result);
QNETSIM_API qnetsim_status qnetsim_result_scenario(const qnetsim_result* result, size_t index,
                                                   const char** name);
/* Per-scenario output path from the config ("" when unset). */
QNETSIM_API qnetsim_status qnetsim_result_output(const qnetsim_result* result, size_t index,
                                                 const char** path);
QNETSIM_API qnetsim_status qnetsim_result_rows(const qnetsim_result* result, size_t index,
                                               size_t* rows);
QNETSIM_API qnetsim_status qnetsim_result_seconds(const qnetsim_result* result, size_t index,
                                                  double* seconds);

/* CSV of one scenario, or of all of them (index QNETSIM_ALL, one header). */
QNETSIM_API qnetsim_status qnetsim_result_csv(const qnetsim_result* result, size_t index,
                                              char** text);
/* Same, written atomically to `path`. */
QNETSIM_API qnetsim_status qnetsim_result_write_csv(const qnetsim_result* result, size_t index,
                                                    const char* path);

/* Direct model entry points. */

/* Eigenvalues E1..E8 of the equally spaced two-qubit network. */
QNETSIM_API qnetsim_status qnetsim_network_eigenvalues(double e_g, double g1, double g2,
                                                       double values[8]);

/* Entanglement entropy (nats) of network eigenstate k (1..8) keeping
 * subsystem `keep` (0 cavity, 1 qubit A, 2 qubit B). */
QNETSIM_API qnetsim_status qnetsim_network_entropy(double e_g, double g1, double g2, int k,
                                                   int keep, double* entropy);

/* |U_32|^2 for a constant-parameter qubit-cavity system over [0, t]. */
QNETSIM_API qnetsim_status qnetsim_jc_transfer(double e_g, double e_e, double e_phi1,
                                               double e_phi2, double g, double t,
                                               double* coefficient);

#ifdef __cplusplus
}
#endif

#endif
