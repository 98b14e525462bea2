#ifndef GLODET_LINEAR_MODEL_HPP
#define GLODET_LINEAR_MODEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glodet/hog.hpp"

namespace glodet::model {

enum class Stage { PreScreen, Boundary, Classify };

Stage parse_stage(const std::string& name);
std::string stage_name(Stage stage);

/// Expected descriptor length for each stage's model.
int stage_dim(Stage stage);

struct LinearModel {
    Stage stage = Stage::PreScreen;
    int dim = 0;
    double bias = 0.0;
    std::vector<double> weights;
    double c = 10.0;  ///< regularization trade-off used at training time
};

double score(const LinearModel& model, std::span<const double> values);
double score(const LinearModel& model, const hog::Descriptor& d);

struct TrainOptions {
    double c = 10.0;
    int epochs = 300;
    int restarts = 10;
    std::uint64_t seed = 0x9e3779b9;
    /// When positive, rescale (w, b) after training so the 10th-percentile
    /// positive training score equals this value. The separator is unchanged;
    /// this pins the score scale for stages with a fixed score threshold.
    double positive_target = 0.0;
};

/// Score calibration used for the pre-screening stage, whose candidate
/// threshold (2) is fixed above the hinge margin of 1.
inline constexpr double kPrescreenPositiveTarget = 3.0;

/// L2-regularized hinge loss minimized by deterministic epoch-based
/// subgradient descent; the best of `restarts` fixed-seed restarts is kept.
LinearModel train(Stage stage, const std::vector<std::vector<double>>& positives,
                  const std::vector<std::vector<double>>& negatives,
                  const TrainOptions& options = {});

/// Training objective: 0.5*|w|^2 + C * sum_i max(0, 1 - y_i * (w.x_i + b)).
double hinge_objective(const LinearModel& model, const std::vector<std::vector<double>>& positives,
                       const std::vector<std::vector<double>>& negatives);

/// JSON model format: {"stage": string, "dim": int, "bias": real,
/// "weights": [real], "c": real}.
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace glodet::model

#endif
