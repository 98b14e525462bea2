#ifndef GLODET_TRAIN_DATA_HPP
#define GLODET_TRAIN_DATA_HPP

#include <cstdint>
#include <vector>

#include "glodet/linear_model.hpp"
#include "glodet/pipeline.hpp"
#include "glodet/synth.hpp"

namespace glodet::train_data {

struct StageData {
    std::vector<std::vector<double>> positives;
    std::vector<std::vector<double>> negatives;
};

/// Objects with diameters under this bound are excluded from the truth used
/// for training and evaluation.
inline constexpr double kMinObjectDiameter = 50.0;

/// Pre-screening sets: positive windows centered on annotated objects,
/// negative windows at random locations away from every object.
StageData build_prescreen_data(const std::vector<synth::CorpusEntry>& entries,
                               std::uint64_t seed = 17, int negatives_per_image = 3);

/// Boundary sets from the positive sub-images: a ray sample is positive when
/// it lies within half a sample spacing of the annotated boundary radius.
/// Negatives are deterministically subsampled to keep the sets balanced.
StageData build_boundary_data(const std::vector<synth::CorpusEntry>& entries,
                              const pipeline::RayGeometry& geom = {});

/// Classification sets: run segmentation with the boundary model on both the
/// positive and the negative window centers, then extract the zone/sector
/// descriptor around the estimated polygon.
StageData build_classify_data(const std::vector<synth::CorpusEntry>& entries,
                              const model::LinearModel& boundary_model,
                              const pipeline::RayGeometry& geom = {},
                              solver::SplitScheme scheme = solver::SplitScheme::Adap,
                              std::uint64_t seed = 17, int negatives_per_image = 3);

/// Deterministic negative window centers for an image: inside the borders by
/// the segmentation reach, at least `clearance` away from every truth center.
std::vector<pipeline::Point> negative_centers(int width, int height,
                                              const std::vector<pipeline::Point>& truths,
                                              int count, std::uint64_t seed);

}  // namespace glodet::train_data

#endif
