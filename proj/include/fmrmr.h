/* C interface to the fmrmr library.
 *
 * Every function returns an fmrmr_status; on failure the message of the
 * most recent error on the calling thread is available from
 * fmrmr_last_error(). Handles are opaque and must be released with the
 * matching *_free function. Grid indices are 1-based throughout.
 */
#ifndef FMRMR_H
#define FMRMR_H

#include <stddef.h>
#include <stdint.h>

#if defined(FMRMR_BUILDING_LIBRARY)
#define FMRMR_API __attribute__((visibility("default")))
#else
#define FMRMR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fmrmr_status {
    FMRMR_OK = 0,
    FMRMR_ERR_INDEX,
    FMRMR_ERR_SHAPE,
    FMRMR_ERR_DEGENERATE,
    FMRMR_ERR_CONFIG,
    FMRMR_ERR_NUMERICAL,
    FMRMR_ERR_CATALOG,
    FMRMR_ERR_PARSE,
    FMRMR_ERR_LABEL,
    FMRMR_ERR_IO,
    FMRMR_ERR_AGGREGATION,
    FMRMR_ERR_EMPTY_SET,
    FMRMR_ERR_INTERNAL
} fmrmr_status;

typedef struct fmrmr_dataset fmrmr_dataset;
typedef struct fmrmr_selection fmrmr_selection;

FMRMR_API const char* fmrmr_last_error(void);
FMRMR_API const char* fmrmr_status_name(fmrmr_status status);
FMRMR_API const char* fmrmr_version(void);

/* Datasets. values is row-major n_samples x n_points; labels are 0 or 1. */
FMRMR_API fmrmr_status fmrmr_dataset_create(const double* grid, size_t n_points, const double* values,
                                            size_t n_samples, const int32_t* labels, fmrmr_dataset** out);
FMRMR_API fmrmr_status fmrmr_dataset_load_csv(const char* path, fmrmr_dataset** out);
FMRMR_API fmrmr_status fmrmr_dataset_write_csv(const fmrmr_dataset* dataset, const char* path);
FMRMR_API fmrmr_status fmrmr_simulate(const char* model_id, size_t n, uint64_t seed, fmrmr_dataset** out);
FMRMR_API fmrmr_status fmrmr_differentiate(const fmrmr_dataset* dataset, int order, fmrmr_dataset** out);
FMRMR_API void fmrmr_dataset_free(fmrmr_dataset* dataset);

FMRMR_API size_t fmrmr_dataset_samples(const fmrmr_dataset* dataset);
FMRMR_API size_t fmrmr_dataset_points(const fmrmr_dataset* dataset);
FMRMR_API fmrmr_status fmrmr_dataset_grid(const fmrmr_dataset* dataset, double* out, size_t capacity);
FMRMR_API fmrmr_status fmrmr_dataset_labels(const fmrmr_dataset* dataset, int32_t* out, size_t capacity);
/* Copies variable j (1-based) across all samples. */
FMRMR_API fmrmr_status fmrmr_dataset_column(const fmrmr_dataset* dataset, size_t j, double* out, size_t capacity);

/* Association measures: "C", "MI", "FC", "V", "R". */
FMRMR_API fmrmr_status fmrmr_relevance(const char* measure, const double* x, const int32_t* labels, size_t n,
                                       double* out);
FMRMR_API fmrmr_status fmrmr_redundancy(const char* measure, const double* u, const double* v, size_t n,
                                        double* out);

/* Greedy selection; criterion is "D" (difference) or "Q" (quotient). */
FMRMR_API fmrmr_status fmrmr_select(const fmrmr_dataset* dataset, const char* measure, const char* criterion,
                                    size_t k, fmrmr_selection** out);
FMRMR_API fmrmr_status fmrmr_select_max_relevance(const fmrmr_dataset* dataset, const char* measure, size_t k,
                                                  fmrmr_selection** out);
FMRMR_API size_t fmrmr_selection_size(const fmrmr_selection* selection);
FMRMR_API fmrmr_status fmrmr_selection_get(const fmrmr_selection* selection, size_t step, size_t* index,
                                           double* score);
FMRMR_API void fmrmr_selection_free(fmrmr_selection* selection);

/* Model catalog; entries are numbered 0 .. size-1 in published order. The
 * returned strings stay valid for the life of the process. */
FMRMR_API size_t fmrmr_catalog_size(void);
FMRMR_API fmrmr_status fmrmr_catalog_entry(size_t position, const char** id, const char** description);

/* Simulation benchmark driven by a JSON config; writes runs.csv,
 * summary.csv, per_model.csv and rankings.csv into out_dir. failed_runs
 * (optional) receives the number of (method, classifier, run) cells that
 * raised and were skipped. */
FMRMR_API fmrmr_status fmrmr_bench(const char* config_json, const char* out_dir, unsigned threads,
                                   size_t* failed_runs);
/* Fills defaults and validates a config; *out receives the normalized JSON
 * and must be released with fmrmr_string_free. */
FMRMR_API fmrmr_status fmrmr_config_resolve(const char* config_json, char** out);
FMRMR_API void fmrmr_string_free(char* s);
/* Re-aggregates an existing runs.csv into the other three report files. */
FMRMR_API fmrmr_status fmrmr_rank(const char* runs_csv, const char* out_dir);

typedef struct fmrmr_cv_result {
    double accuracy;
    double mean_dim;
    size_t folds;
    size_t fits;
    size_t skipped;
} fmrmr_cv_result;

/* k_folds == 0 means leave-one-out. config_json may be NULL for defaults. */
FMRMR_API fmrmr_status fmrmr_cross_validate(const fmrmr_dataset* dataset, size_t k_folds, uint64_t seed,
                                            const char* method, const char* classifier, const char* config_json,
                                            unsigned threads, fmrmr_cv_result* out);

#ifdef __cplusplus
}
#endif

#endif
