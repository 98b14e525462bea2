#include "glodet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace glodet::synth {

namespace {

constexpr double kPi = std::numbers::pi;

// Intensity palette: bright background, darker cell-packed interior, bright
// capsule ring, dark vessel-like distractors.
constexpr double kBackground = 200.0;
constexpr double kInterior = 130.0;
constexpr double kCapsule = 240.0;
constexpr double kVessel = 95.0;
constexpr double kCellAmplitude = 35.0;
constexpr double kCellScale = 3.0;
constexpr double kCapsuleWidth = 4.0;

std::uint8_t to_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

/// Deterministic lattice value noise in [-1, 1].
struct ValueNoise {
    std::uint64_t salt;
    double lattice(int x, int y) const {
        std::uint64_t h = salt;
        h ^= static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<double>(h % 2000003) / 1000001.0 - 1.0;
    }
    double at(double x, double y) const {
        const int x0 = static_cast<int>(std::floor(x));
        const int y0 = static_cast<int>(std::floor(y));
        const double fx = x - x0;
        const double fy = y - y0;
        const double v00 = lattice(x0, y0), v10 = lattice(x0 + 1, y0);
        const double v01 = lattice(x0, y0 + 1), v11 = lattice(x0 + 1, y0 + 1);
        return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
    }
};

struct Segment {
    double x0, y0, x1, y1, width;
    double distance(double px, double py) const {
        const double dx = x1 - x0, dy = y1 - y0;
        const double len_sq = dx * dx + dy * dy;
        double t = len_sq > 0 ? ((px - x0) * dx + (py - y0) * dy) / len_sq : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(px - (x0 + t * dx), py - (y0 + t * dy));
    }
};

}  // namespace

void PhantomSpec::validate() const {
    if (width < 16 || height < 16) throw std::invalid_argument("phantom image too small");
    if (object_count < 0 || distractor_count < 0)
        throw std::invalid_argument("negative object counts");
    if (radius_min < 1.0 || radius_max < radius_min ||
        radius_max > std::min(width, height) / 4.0)
        throw std::invalid_argument("phantom radius range out of bounds");
    if (capsule_probability < 0.0 || capsule_probability > 1.0)
        throw std::invalid_argument("capsule probability must be in [0,1]");
    if (perturb_max < 0.0 || perturb_max > 0.5)
        throw std::invalid_argument("perturbation fraction out of range");
    if (noise_sigma < 0.0) throw std::invalid_argument("negative noise sigma");
}

double PhantomObject::radius_at(double phi) const {
    return base_radius *
           (1.0 + amp1 * std::sin(freq1 * phi + phase1) + amp2 * std::sin(freq2 * phi + phase2));
}

Phantom generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Phantom out;
    // Object placement: rejection sampling under margin + separation.
    std::uniform_real_distribution<double> px(spec.margin, spec.width - spec.margin);
    std::uniform_real_distribution<double> py(spec.margin, spec.height - spec.margin);
    std::uniform_real_distribution<double> pr(spec.radius_min, spec.radius_max);
    if (spec.object_count > 0 && (spec.width - 2 * spec.margin < 0 || spec.height - 2 * spec.margin < 0))
        throw std::invalid_argument("image too small for the requested margin");
    for (int k = 0; k < spec.object_count; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            PhantomObject obj;
            obj.cx = px(rng);
            obj.cy = py(rng);
            obj.base_radius = pr(rng);
            bool ok = true;
            for (const auto& other : out.objects)
                if (std::hypot(obj.cx - other.cx, obj.cy - other.cy) < spec.min_separation)
                    ok = false;
            if (!ok) continue;
            obj.capsule = unit(rng) < spec.capsule_probability;
            const double total = spec.perturb_max * unit(rng);
            const double split = unit(rng);
            obj.amp1 = total * split;
            obj.amp2 = total * (1.0 - split);
            obj.freq1 = 2 + static_cast<int>(unit(rng) * 3);  // 2..4
            obj.freq2 = 5 + static_cast<int>(unit(rng) * 3);  // 5..7
            obj.phase1 = 2 * kPi * unit(rng);
            obj.phase2 = 2 * kPi * unit(rng);
            out.objects.push_back(obj);
            placed = true;
        }
        if (!placed)
            throw std::runtime_error("cannot place phantom objects under separation constraints");
    }

    // Distractors: thick vessel-like segments kept clear of every object.
    std::vector<Segment> vessels;
    std::uniform_real_distribution<double> vx(20.0, spec.width - 20.0);
    std::uniform_real_distribution<double> vy(20.0, spec.height - 20.0);
    for (int k = 0; k < spec.distractor_count; ++k) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Segment seg;
            seg.x0 = vx(rng);
            seg.y0 = vy(rng);
            const double angle = 2 * kPi * unit(rng);
            const double len = 150.0 + 200.0 * unit(rng);
            seg.x1 = std::clamp(seg.x0 + len * std::cos(angle), 5.0, spec.width - 5.0);
            seg.y1 = std::clamp(seg.y0 + len * std::sin(angle), 5.0, spec.height - 5.0);
            seg.width = 14.0 + 12.0 * unit(rng);
            bool ok = true;
            for (const auto& obj : out.objects) {
                const double clearance =
                    obj.base_radius * (1.0 + spec.perturb_max) + seg.width + 25.0;
                if (seg.distance(obj.cx, obj.cy) < clearance) ok = false;
            }
            if (!ok) continue;
            vessels.push_back(seg);
            break;
        }
    }

    // Render. Low-frequency drift + per-pixel noise over the palette.
    ValueNoise cells{spec.seed ^ 0xa5a5a5a5ULL};
    ValueNoise drift{spec.seed ^ 0x5a5a5a5aULL};
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    out.image = GrayImage(spec.width, spec.height);
    for (const auto& obj : out.objects) {
        (void)obj;
        out.masks.emplace_back(spec.width, spec.height, 0);
    }

    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            double v = kBackground +
                       spec.intensity_offset_range * drift.at(x / 160.0, y / 160.0);

            for (const auto& seg : vessels) {
                const double d = seg.distance(x, y);
                if (d <= seg.width) {
                    // Dark core with a soft shoulder: strong edges, low interior detail.
                    const double t = d / seg.width;
                    v = kVessel + (v - kVessel) * t * t;
                }
            }

            for (std::size_t k = 0; k < out.objects.size(); ++k) {
                const auto& obj = out.objects[k];
                const double dx = x - obj.cx;
                const double dy = y - obj.cy;
                const double rho = std::hypot(dx, dy);
                if (rho > obj.base_radius * 1.5 + kCapsuleWidth + 2) continue;
                const double r_phi = obj.radius_at(std::atan2(dy, dx));
                if (rho <= r_phi) {
                    out.masks[k].at(x, y) = 255;
                    v = kInterior + kCellAmplitude * cells.at(x / kCellScale, y / kCellScale);
                } else if (obj.capsule && rho <= r_phi + kCapsuleWidth) {
                    v = kCapsule;
                }
            }

            if (spec.noise_sigma > 0) v += noise(rng);
            out.image.at(x, y) = to_u8(v);
        }
    }
    return out;
}

std::string write_phantom(const Phantom& phantom, const std::string& dir,
                          const std::string& stem) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string image_path = (fs::path(dir) / (stem + ".pgm")).string();
    save_pgm(phantom.image, image_path);

    nlohmann::json centers = nlohmann::json::array();
    nlohmann::json masks = nlohmann::json::array();
    nlohmann::json radii36 = nlohmann::json::array();
    nlohmann::json base_radius = nlohmann::json::array();
    for (std::size_t k = 0; k < phantom.objects.size(); ++k) {
        const auto& obj = phantom.objects[k];
        centers.push_back({obj.cx, obj.cy});
        const std::string mask_path =
            (fs::path(dir) / (stem + "_mask" + std::to_string(k) + ".pgm")).string();
        save_pgm(phantom.masks[k], mask_path);
        masks.push_back(mask_path);
        nlohmann::json radii = nlohmann::json::array();
        for (int i = 0; i < 36; ++i) radii.push_back(obj.radius_at(2 * kPi * i / 36.0));
        radii36.push_back(std::move(radii));
        base_radius.push_back(obj.base_radius);
    }
    nlohmann::json truth{{"image", image_path},
                         {"centers", std::move(centers)},
                         {"masks", std::move(masks)},
                         {"radii36", std::move(radii36)},
                         {"base_radius", std::move(base_radius)}};
    const std::string truth_path = (fs::path(dir) / (stem + "_truth.json")).string();
    std::ofstream out(truth_path);
    if (!out) throw std::runtime_error("cannot write " + truth_path);
    out << truth.dump(2) << "\n";
    return truth_path;
}

std::string generate_corpus(const PhantomSpec& base, int count, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < count; ++i) {
        PhantomSpec spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(i);
        Phantom phantom = generate_phantom(spec);
        std::ostringstream stem;
        stem << "phantom_" << std::setw(4) << std::setfill('0') << i;
        const std::string truth_path = write_phantom(phantom, dir, stem.str());
        entries.push_back({{"image", (fs::path(dir) / (stem.str() + ".pgm")).string()},
                           {"truth", truth_path},
                           {"seed", spec.seed}});
    }
    nlohmann::json manifest{{"images", std::move(entries)}};
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("cannot write " + manifest_path);
    out << manifest.dump(2) << "\n";
    return manifest_path;
}

std::vector<CorpusEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    std::vector<CorpusEntry> entries;
    for (const auto& e : j.at("images")) {
        CorpusEntry entry;
        entry.image_path = e.at("image").get<std::string>();
        entry.truth_path = e.at("truth").get<std::string>();
        entry.seed = e.value("seed", 0ULL);
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace glodet::synth
