/* C interface to the heat-diffusion node classifier. */
#ifndef HEATCLF_H
#define HEATCLF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HC_API __declspec(dllexport)
#else
#define HC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status {
  HC_OK = 0,
  HC_ERR_INVALID = 1,   /* bad input, parameters or configuration */
  HC_ERR_NUMERICAL = 2, /* singular system or (strict) non-convergence */
  HC_ERR_IO = 3,        /* file could not be read or written */
  HC_ERR_INTERNAL = 4
} hc_status;

typedef struct hc_dataset hc_dataset;
typedef struct hc_seeds hc_seeds;
typedef struct hc_result hc_result;

HC_API const char* hc_version(void);

/* Message of the last failed call on this thread ("" if none). */
HC_API const char* hc_last_error(void);

/* Frees strings returned by this library. */
HC_API void hc_string_free(char* s);

/* ---- datasets ---- */

typedef struct hc_load_options {
  int directed;    /* lift to the bipartite source/destination graph */
  int weighted;    /* third column is the edge weight */
  int destination; /* directed only: labels and outputs on destination copies */
  int multi;       /* keep every label of a repeated node */
  char delimiter;  /* 0 = auto (tab, comma, spaces) */
} hc_load_options;

HC_API void hc_load_options_init(hc_load_options* opts);

HC_API hc_status hc_dataset_load(const char* edges_path, const hc_load_options* opts,
                                 hc_dataset** out);
HC_API hc_status hc_dataset_load_labels(hc_dataset* ds, const char* labels_path);
HC_API void hc_dataset_free(hc_dataset* ds);

/* Original (external) nodes, graph nodes after any lift, stored edges. */
HC_API size_t hc_dataset_node_count(const hc_dataset* ds);
HC_API size_t hc_dataset_graph_node_count(const hc_dataset* ds);
HC_API size_t hc_dataset_edge_count(const hc_dataset* ds);
/* Number of labels known so far (0 before labels or seeds are loaded). */
HC_API size_t hc_dataset_label_count(const hc_dataset* ds);

/* Writes the stored edges back as `src<TAB>dst<TAB>weight` lines. */
HC_API hc_status hc_dataset_write_edges(const hc_dataset* ds, const char* path);

/* ---- seeds ---- */

/* `node label` lines; may define the label set when no labels are loaded. */
HC_API hc_status hc_seeds_load(hc_dataset* ds, const char* path, hc_seeds** out);

/* policy: "uniform", "degree", "balanced". Needs loaded labels. */
HC_API hc_status hc_seeds_sample(const hc_dataset* ds, const char* policy, double fraction,
                                 uint64_t rng_seed, hc_seeds** out);
HC_API size_t hc_seeds_size(const hc_seeds* seeds);
HC_API void hc_seeds_free(hc_seeds* seeds);

/* ---- classification ---- */

typedef struct hc_classify_options {
  const char* variant; /* "vanilla", "weighted" or "centered" */
  size_t max_iterations;
  double tolerance;
  int exact;         /* dense direct solve instead of sweeps */
  int strict;        /* stopping at max_iterations is an error */
  int divide_weight; /* weighted variant divides by the seed share */
  size_t threads;    /* 0 = HEATCLF_THREADS or hardware concurrency */
} hc_classify_options;

HC_API void hc_classify_options_init(hc_classify_options* opts);

HC_API hc_status hc_classify(const hc_dataset* ds, const hc_seeds* seeds,
                             const hc_classify_options* opts, hc_result** out);
HC_API void hc_result_free(hc_result* r);

typedef struct hc_summary {
  size_t labels;
  size_t seeds;
  size_t predicted;       /* rows of the output table */
  size_t max_iterations;  /* largest sweep count over the diffusions */
  double max_residual;    /* largest harmonic residual over the diffusions */
  double max_change;      /* largest final sup-norm change */
  int converged;          /* every diffusion met the tolerance or was exact */
  double wall_ms;
} hc_summary;

HC_API hc_status hc_result_summary(const hc_result* r, hc_summary* out);

/* Non-seed nodes in input order. Strings stay valid while r lives. */
HC_API size_t hc_result_row_count(const hc_result* r);
HC_API hc_status hc_result_row(const hc_result* r, size_t row, const char** node_id,
                               const char** label, double* confidence);

/* CSV `node_id,label,confidence` with header; path "-" writes to stdout. */
HC_API hc_status hc_result_write_csv(const hc_result* r, const char* path);

/* ---- deterministic block model ---- */

/* Closed-form equilibrium of the diffusion with block `hot` seeds at 1.
 * per_block and deltas receive K values (deltas = T_k - mean). */
HC_API hc_status hc_block_temperatures(size_t K, const size_t* sizes, const size_t* seeds,
                                       double p, double q, int32_t hot, double* mean,
                                       double* per_block, double* deltas);

/* 1 when the interior of block `hot` scores label `hot` above label `other`
 * under the vanilla rule, else 0. */
HC_API hc_status hc_vanilla_condition(size_t K, const size_t* sizes, const size_t* seeds,
                                      double p, double q, int32_t hot, int32_t other,
                                      int* holds);

/* ---- experiments ---- */

/* Runs a key=value experiment config and writes CSVs into out_dir.
 * `config` is a file path or the name of a bundled config. *summary is
 * allocated (free with hc_string_free); *ok is 0 when grid checks or
 * repetitions failed. */
HC_API hc_status hc_bench_run(const char* config, const char* out_dir, char** summary,
                              int* ok);

/* Names of the bundled configs, NULL-terminated. */
HC_API const char* const* hc_bundled_configs(void);

#ifdef __cplusplus
}
#endif

#endif
