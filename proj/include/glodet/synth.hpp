#ifndef GLODET_SYNTH_HPP
#define GLODET_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "glodet/image.hpp"

namespace glodet::synth {

struct PhantomSpec {
    int width = 1024;
    int height = 1024;
    int object_count = 2;
    double radius_min = 25.0;
    double radius_max = 90.0;
    double capsule_probability = 0.7;
    int distractor_count = 2;
    double intensity_offset_range = 15.0;  ///< low-frequency background drift
    double noise_sigma = 2.0;
    double perturb_max = 0.10;  ///< max radial deviation, fraction of radius
    std::uint64_t seed = 1;
    double min_separation = 220.0;  ///< center-to-center distance
    double margin = 110.0;          ///< center distance from image borders

    void validate() const;
};

/// One generated object with its exact analytic boundary.
struct PhantomObject {
    double cx = 0.0;
    double cy = 0.0;
    double base_radius = 0.0;
    bool capsule = false;
    // Radial perturbation r(phi) = r0 * (1 + a1*sin(k1*phi+p1) + a2*sin(k2*phi+p2)).
    double amp1 = 0.0, amp2 = 0.0;
    int freq1 = 2, freq2 = 3;
    double phase1 = 0.0, phase2 = 0.0;

    double radius_at(double phi) const;
};

struct Phantom {
    GrayImage image;
    std::vector<PhantomObject> objects;
    std::vector<GrayImage> masks;  ///< exact rasterizations, 255 inside
};

/// Deterministic given the spec (including seed). Throws when the requested
/// object count cannot be placed under the separation/margin constraints.
Phantom generate_phantom(const PhantomSpec& spec);

/// Writes the phantom image (PGM), per-object masks, and a truth JSON
/// {"centers": [[x,y]], "masks": [path], "radii36": [[...]], "base_radius": [r]}.
/// Returns the truth JSON path.
std::string write_phantom(const Phantom& phantom, const std::string& dir,
                          const std::string& stem);

struct CorpusEntry {
    std::string image_path;
    std::string truth_path;
    std::uint64_t seed = 0;
};

/// Generates `count` phantoms from the base spec with seeds base.seed + index
/// and writes a manifest JSON listing all entries. Returns the manifest path.
std::string generate_corpus(const PhantomSpec& base, int count, const std::string& dir);

std::vector<CorpusEntry> load_manifest(const std::string& path);

}  // namespace glodet::synth

#endif
