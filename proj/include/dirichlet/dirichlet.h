#ifndef DIRICHLET_H
#define DIRICHLET_H

/* C interface to the Dirichlet energy verification library. Every call
 * returns a status; on failure dirichlet_last_error() describes it (per
 * thread, valid until the next call on that thread). */

#include <stddef.h>

#if defined(DIRICHLET_BUILDING_LIBRARY)
#define DIRICHLET_API __attribute__((visibility("default")))
#else
#define DIRICHLET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dirichlet_status {
    DIRICHLET_OK = 0,
    DIRICHLET_TOLERANCE_FAILURE = 1,
    DIRICHLET_CONFIG_ERROR = 2,
    DIRICHLET_IO_ERROR = 3,
    DIRICHLET_INVALID_ARGUMENT = 4,
    DIRICHLET_NUMERICAL_ERROR = 5
} dirichlet_status;

typedef enum dirichlet_format { DIRICHLET_FORMAT_JSON = 0, DIRICHLET_FORMAT_CSV = 1 } dirichlet_format;

typedef struct dirichlet_suite dirichlet_suite;
typedef struct dirichlet_results dirichlet_results;

DIRICHLET_API const char* dirichlet_version(void);
DIRICHLET_API const char* dirichlet_last_error(void);

/* Suite from YAML text, a YAML file, or a single corpus case.
 * forms_csv may be NULL (corpus forms); level 0 keeps the defaults. */
DIRICHLET_API dirichlet_status dirichlet_suite_parse(const char* text, size_t length, dirichlet_suite** out);
DIRICHLET_API dirichlet_status dirichlet_suite_load(const char* path, dirichlet_suite** out);
DIRICHLET_API dirichlet_status dirichlet_suite_from_case(const char* case_id, const char* forms_csv, int level,
                                                         dirichlet_suite** out);
DIRICHLET_API dirichlet_status dirichlet_suite_set_workers(dirichlet_suite* suite, int workers);
/* Output settings from the config; path is "" for standard output. */
DIRICHLET_API dirichlet_status dirichlet_suite_output(const dirichlet_suite* suite, dirichlet_format* format,
                                                      const char** path, int* timings);
DIRICHLET_API dirichlet_status dirichlet_suite_set_output(dirichlet_suite* suite, dirichlet_format format,
                                                          const char* path);
DIRICHLET_API size_t dirichlet_suite_case_count(const dirichlet_suite* suite);
DIRICHLET_API void dirichlet_suite_destroy(dirichlet_suite* suite);

/* Runs every case. Per-case failures are recorded in the results. */
DIRICHLET_API dirichlet_status dirichlet_suite_run(const dirichlet_suite* suite, dirichlet_results** out);

DIRICHLET_API size_t dirichlet_results_count(const dirichlet_results* results);
/* DIRICHLET_OK if every case passed, DIRICHLET_TOLERANCE_FAILURE otherwise. */
DIRICHLET_API dirichlet_status dirichlet_results_status(const dirichlet_results* results);
/* Report text; release with dirichlet_string_free. */
DIRICHLET_API dirichlet_status dirichlet_results_emit(const dirichlet_results* results, dirichlet_format format,
                                                      int timings, char** text, size_t* length);
DIRICHLET_API dirichlet_status dirichlet_results_write(const dirichlet_results* results, dirichlet_format format,
                                                       int timings, const char* path);
DIRICHLET_API void dirichlet_results_destroy(dirichlet_results* results);

/* CSV "level,form,value,error_estimate" for a corpus case. */
DIRICHLET_API dirichlet_status dirichlet_convergence_csv(const char* case_id, const char* forms_csv,
                                                         const int* levels, size_t level_count, char** text,
                                                         size_t* length);

DIRICHLET_API void dirichlet_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
