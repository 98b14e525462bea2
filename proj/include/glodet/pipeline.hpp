#ifndef GLODET_PIPELINE_HPP
#define GLODET_PIPELINE_HPP

#include <string>
#include <vector>

#include "glodet/contour.hpp"
#include "glodet/hog.hpp"
#include "glodet/image.hpp"
#include "glodet/linear_model.hpp"
#include "glodet/solver.hpp"

namespace glodet::pipeline {

/// Ray layout of the segmentation stage: 36 rays, 22 samples each, the first
/// sample 17 px from the center, 3 px apart (last sample at 80 px).
struct RayGeometry {
    int rays = 36;
    int samples = 22;
    double inner_offset = 17.0;
    double spacing = 3.0;

    double radius(int pos_1based) const { return inner_offset + (pos_1based - 1) * spacing; }
    double angle(int ray_0based) const;
};

/// Stage defaults from one place: window/stride/thresholds and the
/// classification threshold theta.
struct PipelineConfig {
    int stride = 10;
    double prescreen_threshold = 2.0;
    double nms_radius = 100.0;
    double theta = -1.5;
    double match_radius = 100.0;
    int sigma = 1;
    solver::SplitScheme scheme = solver::SplitScheme::Adap;
};

struct Candidate {
    int cx = 0;
    int cy = 0;
    double prescreen_score = 0.0;
};

struct Detection {
    Candidate candidate;
    std::vector<double> radii;  ///< boundary polygon, one radius per ray
    double classify_score = 0.0;
    bool accepted = false;
};

/// Greedy non-maximal suppression: repeatedly keep the best remaining window
/// and drop everything within `radius` of it. Ties: score desc, then (y, x).
std::vector<Candidate> nms(std::vector<Candidate> scored, double radius);

/// Slides a 200x200 window at `stride`, keeps windows scoring above the
/// threshold, and applies nms. Windows that would exit the image are skipped;
/// an image smaller than the window yields an empty list.
std::vector<Candidate> prescreen(const GrayImage& img, const model::LinearModel& m,
                                 const PipelineConfig& config = {});

/// Scores a boundary descriptor at each of the rays x samples positions and
/// assembles the likeliness table.
contour::ContourInstance build_likeliness_table(const GrayImage& img, double cx, double cy,
                                                const model::LinearModel& m,
                                                const RayGeometry& geom = {}, int sigma = 1);

/// Solves the boundary problem and maps vertex indices back to pixel radii.
std::vector<double> segment(const GrayImage& img, double cx, double cy,
                            const model::LinearModel& m, const RayGeometry& geom = {},
                            solver::SplitScheme scheme = solver::SplitScheme::Adap,
                            solver::SolveStats* stats = nullptr, int sigma = 1);

/// Scores the segmentation-adapted descriptor of each candidate and labels it
/// accepted when the score exceeds theta.
std::vector<Detection> classify(const GrayImage& img,
                                const std::vector<Candidate>& candidates,
                                const std::vector<std::vector<double>>& polygons,
                                const model::LinearModel& m, double theta);

/// Full three-stage run.
std::vector<Detection> detect(const GrayImage& img, const model::LinearModel& prescreen_model,
                              const model::LinearModel& boundary_model,
                              const model::LinearModel& classify_model,
                              const PipelineConfig& config = {});

struct DetectionMetrics {
    int true_positives = 0;
    int false_positives = 0;
    int false_negatives = 0;
    double precision = 0.0;  ///< 0 when there are no detections
    double recall = 0.0;
    double f_measure = 0.0;
};

struct SegMetrics {
    long true_area = 0;
    long false_area = 0;
    long missed_area = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Greedy one-to-one matching by ascending distance within `match_radius`.
DetectionMetrics eval_detection(const std::vector<Point>& detections,
                                const std::vector<Point>& truths, double match_radius);

/// Rasterizes the polygon (center + per-ray radii) and counts pixel overlap
/// with the truth mask (nonzero = inside).
SegMetrics eval_segmentation(double cx, double cy, const std::vector<double>& radii,
                             const GrayImage& truth_mask);

/// Polygon rasterization used by eval_segmentation, exposed for tests: 255
/// inside, 0 outside.
GrayImage rasterize_polygon(double cx, double cy, const std::vector<double>& radii, int width,
                            int height);

/// Detections JSON-lines: {"cx":int,"cy":int,"prescreen":real,"classify":real,
/// "accepted":bool,"radii":[real]}.
void write_detections(const std::vector<Detection>& detections, const std::string& path);
std::vector<Detection> read_detections(const std::string& path);

/// Ground truth JSON loader ({"centers": [[x,y]], "masks": optional paths}).
struct GroundTruth {
    std::vector<Point> centers;
    std::vector<std::string> mask_paths;
    std::vector<std::vector<double>> radii36;     ///< optional, empty if absent
    std::vector<double> base_radius;              ///< optional
};

GroundTruth load_truth(const std::string& path);

}  // namespace glodet::pipeline

#endif
