/*
 * clsbm - community detection toolkit for labeled stochastic block models
 * with Gaussian node attributes.
 *
 * C API over the C++ core: opaque handles, status codes, and a thread-local
 * error message retrievable via clsbm_last_error(). Every *_free function
 * accepts NULL. Strings returned through char** outputs are owned by the
 * caller and released with clsbm_string_free().
 */
#ifndef CLSBM_H
#define CLSBM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef CLSBM_API
#define CLSBM_API __attribute__((visibility("default")))
#endif

typedef enum clsbm_status {
  CLSBM_OK = 0,
  CLSBM_ERR_INVALID = 1,  /* parameters, config or preconditions invalid */
  CLSBM_ERR_IO = 2,       /* file could not be read or written */
  CLSBM_ERR_NUMERIC = 3,  /* iterative solver failed to converge */
  CLSBM_ERR_INTERNAL = 4
} clsbm_status;

typedef struct clsbm_params_t clsbm_params_t;         /* model parameters */
typedef struct clsbm_dataset_t clsbm_dataset_t;       /* one sampled instance */
typedef struct clsbm_assignment_t clsbm_assignment_t; /* community labels */

CLSBM_API const char *clsbm_version(void);

/* Message for the most recent failure on this thread; never NULL. */
CLSBM_API const char *clsbm_last_error(void);

CLSBM_API void clsbm_string_free(char *s);

/* -- model parameters ---------------------------------------------------- */

/* JSON document with keys "n","K","L","d","alpha","P","mu"; see README. */
CLSBM_API clsbm_status clsbm_params_parse_json(const char *json_text,
                                               clsbm_params_t **out);
CLSBM_API clsbm_status clsbm_params_load(const char *path, clsbm_params_t **out);
CLSBM_API void clsbm_params_free(clsbm_params_t *params);

CLSBM_API int clsbm_params_n(const clsbm_params_t *params);
CLSBM_API int clsbm_params_k(const clsbm_params_t *params);
CLSBM_API int clsbm_params_l(const clsbm_params_t *params);
CLSBM_API int clsbm_params_d(const clsbm_params_t *params);

/* -- sampling ------------------------------------------------------------ */

CLSBM_API clsbm_status clsbm_sample(const clsbm_params_t *params, uint64_t seed,
                                    clsbm_dataset_t **out);
CLSBM_API void clsbm_dataset_free(clsbm_dataset_t *dataset);

/* Writes the three CSV files (graph "i,j,label", attributes, truth
 * "i,community"). Any path may be NULL to skip that file. */
CLSBM_API clsbm_status clsbm_dataset_save(const clsbm_dataset_t *dataset,
                                          const char *graph_csv,
                                          const char *attrs_csv,
                                          const char *truth_csv);

CLSBM_API size_t clsbm_dataset_size(const clsbm_dataset_t *dataset);

/* Copies the ground-truth labels (1-indexed) into out[0..n). cap must be at
 * least the dataset size. */
CLSBM_API clsbm_status clsbm_dataset_truth(const clsbm_dataset_t *dataset,
                                           int *out, size_t cap);

/* -- spectral detection --------------------------------------------------- */

/* weights may be NULL (Uniform[0,1] draw seeded from `seed`); restarts <= 0
 * uses the default of 25. dump_s_path, when non-NULL, receives a binary dump
 * of the aggregated matrix. */
CLSBM_API clsbm_status clsbm_detect_files(const char *graph_csv,
                                          const char *attrs_csv, int k,
                                          uint64_t seed, int restarts,
                                          const double *weights,
                                          size_t weights_len,
                                          const char *dump_s_path,
                                          clsbm_assignment_t **out);

CLSBM_API clsbm_status clsbm_detect_dataset(const clsbm_dataset_t *dataset, int k,
                                            uint64_t seed, int restarts,
                                            const double *weights,
                                            size_t weights_len,
                                            clsbm_assignment_t **out);

CLSBM_API void clsbm_assignment_free(clsbm_assignment_t *assignment);
CLSBM_API size_t clsbm_assignment_size(const clsbm_assignment_t *assignment);
/* 1-indexed community of a node (node is 0-based); <0 on bad input. */
CLSBM_API int clsbm_assignment_label(const clsbm_assignment_t *assignment,
                                     size_t node);
CLSBM_API clsbm_status clsbm_assignment_save(const clsbm_assignment_t *assignment,
                                             const char *csv_path);

/* -- scoring -------------------------------------------------------------- */

/* Permutation-matched misclassification of est against truth. Emits JSON
 * {"count","rate","perm","confusion"} with 1-indexed permutation. */
CLSBM_API clsbm_status clsbm_score_files(const char *truth_csv,
                                         const char *est_csv, char **json_out);

/* -- divergence ----------------------------------------------------------- */

/* method is "closed", "oracle" or "both". Emits the divergence report JSON
 * {"D","k1","k2","t_star","DA","DX_over_n","method"} (both methods nest two
 * such objects under "closed_form"/"numeric_oracle"). */
CLSBM_API clsbm_status clsbm_divergence_json(const clsbm_params_t *params, int n,
                                             const char *method, char **json_out);

/* -- experiments ----------------------------------------------------------- */

/* Loads an experiment config (JSON), runs it and writes the replication CSV;
 * plot_out may be NULL. threads <= 0 uses hardware concurrency. summary_json
 * (optional) receives per-point aggregates. */
CLSBM_API clsbm_status clsbm_experiment_run(const char *config_path,
                                            const char *csv_out,
                                            const char *plot_out, int threads,
                                            char **summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CLSBM_H */
