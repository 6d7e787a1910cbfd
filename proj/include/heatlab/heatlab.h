/* Public C interface of the heatlab library.
 *
 * Every function returning heatlab_status leaves a message retrievable with
 * heatlab_last_error() on the calling thread when it fails.  Strings returned
 * by a report stay valid until the report is destroyed. */
#ifndef HEATLAB_HEATLAB_H
#define HEATLAB_HEATLAB_H

#include <stdint.h>

#if defined(_WIN32)
#  define HEATLAB_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define HEATLAB_API __attribute__((visibility("default")))
#else
#  define HEATLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum heatlab_status {
    HEATLAB_OK = 0,
    HEATLAB_INVALID_ARGUMENT = 1,
    HEATLAB_RANGE_ERROR = 2,
    HEATLAB_NUMERICAL_FAILURE = 3,
    HEATLAB_IO_ERROR = 4,
    HEATLAB_INTERNAL_ERROR = 5
} heatlab_status;

typedef struct heatlab_manifold heatlab_manifold;
typedef struct heatlab_report heatlab_report;

HEATLAB_API const char* heatlab_version(void);
/* The JSON schema accepted by heatlab_run. */
HEATLAB_API const char* heatlab_config_schema(void);
HEATLAB_API const char* heatlab_status_name(heatlab_status status);

/* Message of the last failed call on this thread ("" if none). */
HEATLAB_API const char* heatlab_last_error(void);
/* The same failure as a JSON record {"error", "message", "status"}. */
HEATLAB_API const char* heatlab_last_error_json(void);

/* spec_json is the "manifold" object of a configuration. */
HEATLAB_API heatlab_status heatlab_manifold_create(const char* spec_json, heatlab_manifold** out);
HEATLAB_API void heatlab_manifold_destroy(heatlab_manifold* m);
HEATLAB_API heatlab_status heatlab_manifold_log_area(const heatlab_manifold* m, double r,
                                                     double* out);
HEATLAB_API heatlab_status heatlab_perimeter_ball(const heatlab_manifold* m, double r,
                                                  double* out);
HEATLAB_API heatlab_status heatlab_ball_volume(const heatlab_manifold* m, double r, double* out);

/* Runs one experiment.  `experiment` may be NULL to use the configuration's
 * own "experiment"; otherwise it fills a missing field and must match a
 * present one.  threads == 0 means one thread.  A non-NULL seed overrides the
 * configuration seed. */
HEATLAB_API heatlab_status heatlab_run(const char* config_json, const char* experiment,
                                       unsigned threads, const uint64_t* seed,
                                       heatlab_report** out);

HEATLAB_API const char* heatlab_report_experiment(const heatlab_report* r);
HEATLAB_API const char* heatlab_report_verdict(const heatlab_report* r);
/* 1 when the run succeeded with a refuting, failing or inconclusive verdict. */
HEATLAB_API int heatlab_report_flagged(const heatlab_report* r);
HEATLAB_API const char* heatlab_report_json(const heatlab_report* r);
HEATLAB_API const char* heatlab_report_csv(const heatlab_report* r);
HEATLAB_API const char* heatlab_report_timing_json(const heatlab_report* r);
HEATLAB_API double heatlab_report_wall_seconds(const heatlab_report* r);
HEATLAB_API void heatlab_report_destroy(heatlab_report* r);

#ifdef __cplusplus
}
#endif

#endif
