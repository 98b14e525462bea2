#include "glodet/train_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace glodet::train_data {

namespace {

struct TruthObject {
    pipeline::Point center;
    std::vector<double> radii36;
};

struct LoadedImage {
    GrayImage image;
    std::vector<TruthObject> objects;  ///< large enough to train on
    std::vector<pipeline::Point> all_centers;
};

LoadedImage load_entry(const synth::CorpusEntry& entry) {
    LoadedImage out;
    out.image = load_image(entry.image_path);
    const auto truth = pipeline::load_truth(entry.truth_path);
    for (std::size_t k = 0; k < truth.centers.size(); ++k) {
        out.all_centers.push_back(truth.centers[k]);
        if (k < truth.base_radius.size() && 2 * truth.base_radius[k] < kMinObjectDiameter)
            continue;
        TruthObject obj;
        obj.center = truth.centers[k];
        if (k < truth.radii36.size()) obj.radii36 = truth.radii36[k];
        out.objects.push_back(std::move(obj));
    }
    return out;
}

bool window_fits(const GrayImage& img, double cx, double cy) {
    const int half = hog::kWindowSize / 2;
    return cx - half >= 0 && cy - half >= 0 && cx + half <= img.width && cy + half <= img.height;
}

}  // namespace

std::vector<pipeline::Point> negative_centers(int width, int height,
                                              const std::vector<pipeline::Point>& truths,
                                              int count, std::uint64_t seed) {
    const double border = hog::kWindowSize / 2.0;
    if (width <= 2 * border || height <= 2 * border) return {};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(border, width - border);
    std::uniform_real_distribution<double> uy(border, height - border);
    const double clearance = 120.0;
    std::vector<pipeline::Point> centers;
    for (int attempt = 0; attempt < 10000 && static_cast<int>(centers.size()) < count;
         ++attempt) {
        pipeline::Point p{std::floor(ux(rng)), std::floor(uy(rng))};
        bool ok = true;
        for (const auto& t : truths)
            if (std::hypot(p.x - t.x, p.y - t.y) < clearance) ok = false;
        for (const auto& c : centers)
            if (std::hypot(p.x - c.x, p.y - c.y) < clearance) ok = false;
        if (ok) centers.push_back(p);
    }
    return centers;
}

StageData build_prescreen_data(const std::vector<synth::CorpusEntry>& entries,
                               std::uint64_t seed, int negatives_per_image) {
    StageData data;
    for (const auto& entry : entries) {
        const auto loaded = load_entry(entry);
        const auto field = hog::gradient_field(loaded.image);
        const int half = hog::kWindowSize / 2;
        for (const auto& obj : loaded.objects) {
            if (!window_fits(loaded.image, obj.center.x, obj.center.y)) continue;
            const int x0 = static_cast<int>(std::lround(obj.center.x)) - half;
            const int y0 = static_cast<int>(std::lround(obj.center.y)) - half;
            // Centered window plus small jitter: the sliding window rarely
            // lands exactly on the object center.
            constexpr int offsets[][2] = {{0, 0}, {6, 0}, {-6, 0}, {0, 6}, {0, -6}};
            for (const auto& off : offsets) {
                const int jx = x0 + off[0], jy = y0 + off[1];
                if (jx < 0 || jy < 0 || jx + hog::kWindowSize > loaded.image.width ||
                    jy + hog::kWindowSize > loaded.image.height)
                    continue;
                data.positives.push_back(hog::rhog(field, jx, jy).values);
            }
        }
        for (const auto& p : negative_centers(loaded.image.width, loaded.image.height,
                                              loaded.all_centers, negatives_per_image,
                                              seed ^ entry.seed)) {
            const int x0 = static_cast<int>(p.x) - half;
            const int y0 = static_cast<int>(p.y) - half;
            data.negatives.push_back(hog::rhog(field, x0, y0).values);
        }
    }
    return data;
}

StageData build_boundary_data(const std::vector<synth::CorpusEntry>& entries,
                              const pipeline::RayGeometry& geom) {
    StageData data;
    for (const auto& entry : entries) {
        const auto loaded = load_entry(entry);
        for (const auto& obj : loaded.objects) {
            if (obj.radii36.empty()) continue;
            if (!window_fits(loaded.image, obj.center.x, obj.center.y)) continue;
            int skip = 0;
            for (int i = 0; i < geom.rays; ++i) {
                const double angle = geom.angle(i);
                const double true_r =
                    obj.radii36[static_cast<std::size_t>(i) % obj.radii36.size()];
                for (int p = 1; p <= geom.samples; ++p) {
                    const double r = geom.radius(p);
                    const double diff = std::abs(r - true_r);
                    const bool positive = diff <= geom.spacing / 2.0;
                    // Keep every positive; thin the negatives, and drop the
                    // near-boundary band that is neither clearly on nor off.
                    if (!positive) {
                        if (diff < 1.5 * geom.spacing) continue;
                        if (++skip % 3 != 0) continue;
                    }
                    const auto d =
                        hog::boundary_descriptor(loaded.image, obj.center.x, obj.center.y,
                                                 angle, r);
                    (positive ? data.positives : data.negatives).push_back(d.values);
                }
            }
        }
    }
    return data;
}

StageData build_classify_data(const std::vector<synth::CorpusEntry>& entries,
                              const model::LinearModel& boundary_model,
                              const pipeline::RayGeometry& geom, solver::SplitScheme scheme,
                              std::uint64_t seed, int negatives_per_image) {
    if (boundary_model.stage != model::Stage::Boundary)
        throw std::invalid_argument("classification data needs a boundary-stage model");
    StageData data;
    for (const auto& entry : entries) {
        const auto loaded = load_entry(entry);
        const auto field = hog::gradient_field(loaded.image);
        auto add = [&](double cx, double cy, bool positive) {
            const auto radii = pipeline::segment(loaded.image, cx, cy, boundary_model, geom,
                                                 scheme, nullptr);
            const auto d = hog::shog(field, cx, cy, radii);
            (positive ? data.positives : data.negatives).push_back(d.values);
        };
        for (const auto& obj : loaded.objects) {
            if (!window_fits(loaded.image, obj.center.x, obj.center.y)) continue;
            add(obj.center.x, obj.center.y, true);
        }
        for (const auto& p : negative_centers(loaded.image.width, loaded.image.height,
                                              loaded.all_centers, negatives_per_image,
                                              seed ^ entry.seed))
            add(p.x, p.y, false);
    }
    return data;
}

}  // namespace glodet::train_data
