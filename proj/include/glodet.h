/* glodet: C API for the circular-object detection library.
 *
 * Every function returns a glodet_status; on failure the thread-local message
 * from glodet_last_error() describes the problem. Out-parameters are written
 * only on GLODET_OK. Handles are opaque and must be released with the
 * matching *_free function (safe on NULL).
 */
#ifndef GLODET_H
#define GLODET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glodet_status {
    GLODET_OK = 0,
    GLODET_ERR_IO = 1,      /* missing/unreadable/unwritable files */
    GLODET_ERR_INVALID = 2, /* malformed inputs or argument validation */
    GLODET_ERR_RUNTIME = 3  /* internal failure */
} glodet_status;

typedef struct glodet_image glodet_image;
typedef struct glodet_model glodet_model;
typedef struct glodet_instance glodet_instance;

const char* glodet_version(void);

/* Message of the most recent failure on the calling thread ("" if none). */
const char* glodet_last_error(void);

/* ---- images (PGM or PNG) ---- */
glodet_status glodet_image_load(const char* path, glodet_image** out);
void glodet_image_free(glodet_image* img);
glodet_status glodet_image_size(const glodet_image* img, int* width, int* height);

/* ---- linear stage models (JSON) ---- */
glodet_status glodet_model_load(const char* path, glodet_model** out);
void glodet_model_free(glodet_model* model);
/* stage name: "prescreen", "boundary", or "classify"; dim 512/27/216. */
glodet_status glodet_model_info(const glodet_model* model, const char** stage, int* dim);

/* ---- boundary problem instances (JSON {"n","m","sigma","L"}) ---- */
glodet_status glodet_instance_load(const char* path, glodet_instance** out);
void glodet_instance_free(glodet_instance* inst);
glodet_status glodet_instance_shape(const glodet_instance* inst, int* n, int* m, int* sigma);

/* Exact solve. solver is "edp", "half", "max", or "adap". p_out must hold m
 * ints (1-based sample indices); objective/n_dp may be NULL. */
glodet_status glodet_solve(const glodet_instance* inst, const char* solver, int* p_out,
                           double* objective, int* n_dp);

/* Boundary segmentation around (cx, cy): 36 rays, radii_out must hold 36
 * doubles (pixel radii). n_dp may be NULL. */
glodet_status glodet_segment(const glodet_image* img, double cx, double cy,
                             const glodet_model* boundary_model, const char* solver,
                             double* radii_out, int* n_dp);

typedef struct glodet_detect_config {
    int stride;                 /* sliding-window step, default 10 */
    double prescreen_threshold; /* default 2.0 */
    double nms_radius;          /* default 100 */
    double theta;               /* classification threshold, default -1.5 */
    const char* solver;         /* "half"/"max"/"adap", default "adap" */
} glodet_detect_config;

glodet_detect_config glodet_detect_config_default(void);

/* Full three-stage detection; writes one JSON object per candidate to
 * out_jsonl_path and reports how many were accepted. */
glodet_status glodet_detect(const glodet_image* img, const glodet_model* prescreen_model,
                            const glodet_model* boundary_model,
                            const glodet_model* classify_model,
                            const glodet_detect_config* config, const char* out_jsonl_path,
                            int* accepted_count);

/* Trains one stage from a phantom-corpus manifest and saves the model JSON.
 * boundary_model is required for stage "classify" and ignored otherwise. */
glodet_status glodet_train(const char* manifest_path, const char* stage,
                           const glodet_model* boundary_model, double c, uint64_t seed,
                           const char* out_model_path);

typedef struct glodet_phantom_config {
    int width, height;      /* default 1024 x 1024 */
    int object_count;       /* default 2 */
    int distractor_count;   /* default 2 */
    double radius_min;      /* default 25 */
    double radius_max;      /* default 90 */
    double capsule_probability; /* default 0.7 */
    double perturb_max;     /* default 0.10 */
    uint64_t seed;          /* default 1 */
} glodet_phantom_config;

glodet_phantom_config glodet_phantom_config_default(void);

/* Generates `count` phantoms into out_dir and writes manifest.json there.
 * manifest_path_out (may be NULL) receives the manifest path, truncated to
 * manifest_path_cap bytes including the terminator. */
glodet_status glodet_gen_phantoms(const char* out_dir, int count,
                                  const glodet_phantom_config* config,
                                  char* manifest_path_out, size_t manifest_path_cap);

/* Benchmarks all four solvers over instance JSON files; writes the CSV. */
glodet_status glodet_bench_solvers(const char* const* instance_paths, int path_count,
                                   int repetitions, const char* out_csv_path);

typedef struct glodet_eval_result {
    int true_positives, false_positives, false_negatives;
    double precision, recall, f_measure;
} glodet_eval_result;

/* Matches accepted detections (JSON-lines file) against the truth centers
 * (truth JSON) greedily by ascending distance within match_radius. */
glodet_status glodet_eval(const char* detections_path, const char* truth_path,
                          double match_radius, glodet_eval_result* out);

#ifdef __cplusplus
}
#endif

#endif /* GLODET_H */
