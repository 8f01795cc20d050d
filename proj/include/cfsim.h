/*
 * cfsim - shared-library C API for the timelike Wigner's-Friend simulator
 * and polytope toolkit.
 *
 * All entry points return a cfs_status; on success the out parameter holds a
 * newly allocated opaque handle that the caller releases with the matching
 * _free function. Human-readable failure detail is written to the caller's
 * error buffer when one is supplied. Reports expose their full content as a
 * JSON document; the layout is documented in the project README.
 */

#ifndef CFSIM_H
#define CFSIM_H

#include <stddef.h>

#if defined(_WIN32)
#define CFS_API __declspec(dllexport)
#else
#define CFS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cfs_status {
  CFS_OK = 0,
  CFS_ERROR_PARSE = 1,     /* malformed scenario text or behavior JSON */
  CFS_ERROR_INVARIANT = 2, /* a numerical invariant was violated */
  CFS_ERROR_BAD_ARGUMENT = 3,
  CFS_ERROR_INTERNAL = 4
} cfs_status;

typedef struct cfs_scenario cfs_scenario; /* parsed scenario configuration */
typedef struct cfs_report cfs_report;     /* result of one command run */

CFS_API const char* cfs_version(void);

/* Parse a flat key=value scenario description. Parse failures name the
 * offending line in the error buffer. */
CFS_API cfs_status cfs_scenario_parse_text(const char* text,
                                           cfs_scenario** out, char* errbuf,
                                           size_t errcap);
CFS_API cfs_status cfs_scenario_parse_file(const char* path,
                                           cfs_scenario** out, char* errbuf,
                                           size_t errcap);
CFS_API void cfs_scenario_free(cfs_scenario* scenario);

/* Override the verdict tolerance carried by the scenario (defaults to the
 * file's tol key, else 1e-9). */
CFS_API cfs_status cfs_scenario_set_tol(cfs_scenario* scenario, double tol);

/* Run the sequential protocol (reverse nonzero: measurement stages in the
 * reversed order) and report correlators, S, the no-signalling-in-time and
 * time-symmetry verdicts, and the membership certificate. */
CFS_API cfs_status cfs_simulate(const cfs_scenario* scenario, int reverse,
                                cfs_report** out, char* errbuf, size_t errcap);

/* Decide membership of a behavior (JSON document, see README) in the convex
 * hull of the 16 deterministic strategies. */
CFS_API cfs_status cfs_membership(const char* behavior_json, double tol,
                                  cfs_report** out, char* errbuf,
                                  size_t errcap);

/* Property-test campaigns for the derived independence and screening
 * implications, plus the adversarial non-vacuity witness. */
CFS_API cfs_status cfs_lemmas(int samples, unsigned long long seed, double tol,
                              cfs_report** out, char* errbuf, size_t errcap);

/* The deterministic setting-tracking construction reaching S = 4. */
CFS_API cfs_status cfs_boxworld(cfs_report** out, char* errbuf, size_t errcap);

/* Grid-plus-refinement search for the maximal sequential value. scenario may
 * be NULL for the maximally mixed input. */
CFS_API cfs_status cfs_sweep(const cfs_scenario* scenario, int grid,
                             int refine, unsigned long long seed,
                             cfs_report** out, char* errbuf, size_t errcap);

/* Amplification-map demonstration: lab-state amplitudes and the reduced
 * system state. */
CFS_API cfs_status cfs_wigner_demo(cfs_report** out, char* errbuf,
                                   size_t errcap);

/* NUL-terminated JSON document owned by the report handle. */
CFS_API const char* cfs_report_json(const cfs_report* report);
CFS_API void cfs_report_free(cfs_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CFSIM_H */
