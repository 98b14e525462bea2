#ifndef GLODET_HOG_HPP
#define GLODET_HOG_HPP

#include <span>
#include <vector>

#include "glodet/image.hpp"

namespace glodet::hog {

inline constexpr int kOrientationBins = 9;    ///< unsigned bins over [0, 180)
inline constexpr int kWindowSize = 200;       ///< pre-screening window side
inline constexpr int kRhogGrid = 8;           ///< 8x8 blocks of 25x25 px
inline constexpr int kRhogBins = 8;           ///< 8 bins of 22.5 degrees
inline constexpr int kRhogDim = kRhogGrid * kRhogGrid * kRhogBins;  // 512
inline constexpr int kBoundaryDim = 3 * kOrientationBins;           // 27
inline constexpr int kShogZones = 3;
inline constexpr int kShogSectors = 8;
inline constexpr int kShogDim = kShogZones * kShogSectors * kOrientationBins;  // 216

/// Zone boundaries of the segmentation-adapted descriptor, as fractions of
/// the interpolated boundary radius.
inline constexpr double kShogInnerFraction = 0.6;
inline constexpr double kShogMiddleFraction = 1.1;
inline constexpr double kShogOuterFraction = 1.4;

enum class DescriptorKind { Rhog, Boundary, Shog };

struct Descriptor {
    DescriptorKind kind;
    std::vector<double> values;
};

int descriptor_dim(DescriptorKind kind);

/// Per-pixel gradient magnitude and hard-assigned unsigned orientation bin
/// (9 bins of 20 degrees). Central differences with replicated borders.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<float> magnitude;
    std::vector<float> theta;  ///< folded orientation in [0, pi)
    std::vector<std::uint8_t> bin;
};

GradientField gradient_field(const GrayImage& img);

/// Rectangular grid descriptor of the 200x200 window whose top-left corner is
/// (x0, y0): 8x8 blocks of 25x25 px, 8-bin magnitude-weighted orientation
/// histograms, per-block L2 normalization. Length 512.
Descriptor rhog(const GradientField& field, int x0, int y0);
Descriptor rhog(const GrayImage& img, int x0, int y0);

/// Boundary-window descriptor: a 30x15 window centered `radius` pixels from
/// (cx, cy) along direction `angle`, long axis along the ray, split into three
/// 10x15 blocks (inner/capsule/outer). Orientations are measured relative to
/// the ray so the descriptor is rotation-covariant. Length 27.
Descriptor boundary_descriptor(const GrayImage& img, double cx, double cy, double angle,
                               double radius);

/// Segmentation-adapted descriptor: 3 radial zones x 8 sectors around the
/// estimated boundary polygon (radii at equally spaced angles), 9-bin
/// histograms per block. Pixels outside the image are skipped. Length 216.
Descriptor shog(const GradientField& field, double cx, double cy, std::span<const double> radii);

}  // namespace glodet::hog

#endif
