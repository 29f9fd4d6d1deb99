/* ottrack - multi-object tracking association engine.
 *
 * C API over the C++ core: opaque handles, status codes, UTF-8 paths.
 * All functions are thread-safe for distinct handles; a single ott_tracker
 * must not be stepped concurrently. ott_last_error() is thread-local.
 */
#ifndef OTTRACK_OTTRACK_H
#define OTTRACK_OTTRACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OTTRACK_API __declspec(dllexport)
#else
#define OTTRACK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ott_status {
  OTT_OK = 0,
  OTT_ERR_INVALID_ARGUMENT = 1,
  OTT_ERR_PARSE = 2,
  OTT_ERR_COUNT_MISMATCH = 3,
  OTT_ERR_DIMENSION_MISMATCH = 4,
  OTT_ERR_NUMERIC = 5,
  OTT_ERR_INFEASIBLE = 6,
  OTT_ERR_TOO_LARGE = 7,
  OTT_ERR_IO = 8,
  OTT_ERR_CHECK_FAILED = 9,
  OTT_ERR_UNKNOWN = 10
} ott_status;

OTTRACK_API const char* ott_status_name(ott_status status);

/* Detail message of the calling thread's most recent failure. */
OTTRACK_API const char* ott_last_error(void);

/* ------------------------------------------------------------------ config */

typedef struct ott_config ott_config;

/* Fresh config holding every engine default. */
OTTRACK_API ott_config* ott_config_new(void);
OTTRACK_API void ott_config_free(ott_config* config);

/* Flat key=value file; unknown keys are rejected. */
OTTRACK_API ott_status ott_config_load(ott_config* config, const char* path);
OTTRACK_API ott_status ott_config_save(const ott_config* config, const char* path);
OTTRACK_API ott_status ott_config_set(ott_config* config, const char* key,
                                      const char* value);
OTTRACK_API ott_status ott_config_get(const ott_config* config, const char* key,
                                      char* buffer, size_t buffer_size);

/* ----------------------------------------------------------------- tracker */

typedef struct ott_tracker ott_tracker;

/* config may be NULL for defaults. */
OTTRACK_API ott_tracker* ott_tracker_new(const ott_config* config);
OTTRACK_API void ott_tracker_free(ott_tracker* tracker);

/* Associate one frame.
 *   boxes       n*4 doubles, x1,y1,x2,y2 per detection
 *   embeddings  n*dim doubles, row-major, one row per detection
 *   track_ids_out  n entries, the id assigned to each detection
 * Frames must strictly increase across calls. */
OTTRACK_API ott_status ott_tracker_step(ott_tracker* tracker, int64_t frame,
                                        const double* boxes, size_t n,
                                        const double* embeddings, size_t dim,
                                        int64_t* track_ids_out);

/* -------------------------------------------------------------- primitives */

/* Intersection over union of two x1,y1,x2,y2 boxes; negative on error. */
OTTRACK_API double ott_box_iou(const double box_a[4], const double box_b[4]);

/* Exact min-cost assignment on an n1*n2 row-major cost matrix.
 * row_match_out: n1 entries, column index or -1. total_cost_out optional. */
OTTRACK_API ott_status ott_hungarian(const double* cost, size_t n1, size_t n2,
                                     int32_t* row_match_out, double* total_cost_out);

/* Entropic soft assignment with a gamma dustbin appended internally.
 *   plan_out        optional, (n1+1)*(n2+1) doubles row-major
 *   row_match_out   optional, n1 entries, decoded hard matches (-1 unmatched)
 *   violation_out   optional, max marginal violation of the plan
 *   iterations_out  optional, Sinkhorn sweeps performed */
OTTRACK_API ott_status ott_soft_assign(const double* cost, size_t n1, size_t n2,
                                       double gamma, double epsilon, int max_iters,
                                       double tol, double* plan_out,
                                       int32_t* row_match_out, double* violation_out,
                                       int32_t* iterations_out);

/* -------------------------------------------------------------- pipelines */

/* Detections + embeddings -> track file. */
OTTRACK_API ott_status ott_run_track(const char* dets_path, const char* embs_path,
                                     const ott_config* config, const char* out_path);

/* Reference/target detections + motion grid -> pseudo-label file.
 * out_report, occl_ref_path, occl_tgt_path may be NULL. */
OTTRACK_API ott_status ott_run_pseudolabel(const char* ref_path, const char* tgt_path,
                                           const char* grid_path,
                                           const ott_config* config,
                                           const char* out_labels,
                                           const char* out_report,
                                           const char* occl_ref_path,
                                           const char* occl_tgt_path);

/* Left/right disparity grids -> 0/1 occlusion-mask grids for both views. */
OTTRACK_API ott_status ott_run_occlusion(const char* left_path, const char* right_path,
                                         const ott_config* config,
                                         const char* out_left, const char* out_right);

typedef struct ott_metrics {
  double idf1;
  uint64_t id_switches;
  double assoc_precision;
  double assoc_recall;
  uint64_t tp;
  uint64_t fp;
  uint64_t fn;
} ott_metrics;

/* Predicted vs ground-truth track files. out_report and metrics_out optional. */
OTTRACK_API ott_status ott_run_eval(const char* pred_path, const char* gt_path,
                                    const ott_config* config, const char* out_report,
                                    ott_metrics* metrics_out);

typedef struct ott_synth_params {
  uint32_t objects;
  uint32_t frames;
  uint32_t dim;
  double separation;
  double noise_sigma;
  uint32_t image_width;
  uint32_t image_height;
  uint32_t occlusion_gap;
  int32_t staggered_entry;
  int32_t allow_overlap;
  int32_t pair_a;
  int32_t pair_b;
  int32_t stereo;
} ott_synth_params;

OTTRACK_API void ott_synth_params_init(ott_synth_params* params);

/* Emits dets.txt, embs.bin, gt.txt, ref_dets.txt, tgt_dets.txt, motion.grid
 * (and disp_left.grid/disp_right.grid with stereo set) under out_dir. */
OTTRACK_API ott_status ott_run_synth(const char* out_dir, uint64_t seed,
                                     const ott_synth_params* params);

/* Runs the oracle battery; one line per check on stdout when verbose != 0.
 * Returns OTT_OK iff every check passes; failures_out optional. */
OTTRACK_API ott_status ott_run_selfcheck(int verbose, int32_t* failures_out);

#ifdef __cplusplus
}
#endif

#endif /* OTTRACK_OTTRACK_H */
