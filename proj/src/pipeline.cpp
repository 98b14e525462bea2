#include "glodet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace glodet::pipeline {

namespace {
constexpr double kPi = std::numbers::pi;
}

double RayGeometry::angle(int ray_0based) const { return 2 * kPi * ray_0based / rays; }

std::vector<Candidate> nms(std::vector<Candidate> scored, double radius) {
    if (radius <= 0) throw std::invalid_argument("nms radius must be positive");
    std::sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
        if (a.prescreen_score != b.prescreen_score) return a.prescreen_score > b.prescreen_score;
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.cx < b.cx;
    });
    std::vector<Candidate> kept;
    for (const auto& c : scored) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (std::hypot(c.cx - k.cx, c.cy - k.cy) < radius) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(c);
    }
    return kept;
}

std::vector<Candidate> prescreen(const GrayImage& img, const model::LinearModel& m,
                                 const PipelineConfig& config) {
    if (m.stage != model::Stage::PreScreen)
        throw std::invalid_argument("prescreen needs a prescreen-stage model");
    if (img.width < hog::kWindowSize || img.height < hog::kWindowSize) return {};

    const auto field = hog::gradient_field(img);
    std::vector<Candidate> scored;
    for (int y0 = 0; y0 + hog::kWindowSize <= img.height; y0 += config.stride) {
        for (int x0 = 0; x0 + hog::kWindowSize <= img.width; x0 += config.stride) {
            const auto d = hog::rhog(field, x0, y0);
            const double s = model::score(m, d);
            if (s > config.prescreen_threshold)
                scored.push_back({x0 + hog::kWindowSize / 2, y0 + hog::kWindowSize / 2, s});
        }
    }
    return nms(std::move(scored), config.nms_radius);
}

contour::ContourInstance build_likeliness_table(const GrayImage& img, double cx, double cy,
                                                const model::LinearModel& m,
                                                const RayGeometry& geom, int sigma) {
    if (m.stage != model::Stage::Boundary)
        throw std::invalid_argument("likeliness table needs a boundary-stage model");
    contour::ContourInstance inst;
    inst.n = geom.samples;
    inst.m = geom.rays;
    inst.sigma = sigma;
    inst.table.resize(static_cast<std::size_t>(inst.n) * inst.m);
    for (int i = 0; i < geom.rays; ++i) {
        const double angle = geom.angle(i);
        for (int p = 1; p <= geom.samples; ++p) {
            const auto d = hog::boundary_descriptor(img, cx, cy, angle, geom.radius(p));
            inst.likeliness(i, p) = model::score(m, d);
        }
    }
    return inst;
}

std::vector<double> segment(const GrayImage& img, double cx, double cy,
                            const model::LinearModel& m, const RayGeometry& geom,
                            solver::SplitScheme scheme, solver::SolveStats* stats, int sigma) {
    const auto inst = build_likeliness_table(img, cx, cy, m, geom, sigma);
    auto [sol, solve_stats] = solver::dcdp_solve(inst, scheme);
    if (stats) *stats = solve_stats;
    std::vector<double> radii(geom.rays);
    for (int i = 0; i < geom.rays; ++i) radii[i] = geom.radius(sol.p[i]);
    return radii;
}

std::vector<Detection> classify(const GrayImage& img, const std::vector<Candidate>& candidates,
                                const std::vector<std::vector<double>>& polygons,
                                const model::LinearModel& m, double theta) {
    if (m.stage != model::Stage::Classify)
        throw std::invalid_argument("classification needs a classify-stage model");
    if (candidates.size() != polygons.size())
        throw std::invalid_argument("one polygon required per candidate");
    const auto field = hog::gradient_field(img);
    std::vector<Detection> detections;
    detections.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto d = hog::shog(field, candidates[i].cx, candidates[i].cy, polygons[i]);
        Detection det;
        det.candidate = candidates[i];
        det.radii = polygons[i];
        det.classify_score = model::score(m, d);
        det.accepted = det.classify_score > theta;
        detections.push_back(std::move(det));
    }
    return detections;
}

std::vector<Detection> detect(const GrayImage& img, const model::LinearModel& prescreen_model,
                              const model::LinearModel& boundary_model,
                              const model::LinearModel& classify_model,
                              const PipelineConfig& config) {
    auto candidates = prescreen(img, prescreen_model, config);
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::pair(a.cy, a.cx) < std::pair(b.cy, b.cx);
    });
    std::vector<std::vector<double>> polygons;
    polygons.reserve(candidates.size());
    for (const auto& c : candidates)
        polygons.push_back(segment(img, c.cx, c.cy, boundary_model, RayGeometry{}, config.scheme,
                                   nullptr, config.sigma));
    return classify(img, candidates, polygons, classify_model, config.theta);
}

DetectionMetrics eval_detection(const std::vector<Point>& detections,
                                const std::vector<Point>& truths, double match_radius) {
    if (match_radius <= 0) throw std::invalid_argument("match radius must be positive");
    struct Pair {
        double dist;
        std::size_t det, truth;
    };
    std::vector<Pair> pairs;
    for (std::size_t d = 0; d < detections.size(); ++d)
        for (std::size_t t = 0; t < truths.size(); ++t) {
            const double dist = std::hypot(detections[d].x - truths[t].x,
                                           detections[d].y - truths[t].y);
            if (dist <= match_radius) pairs.push_back({dist, d, t});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(a.dist, a.det, a.truth) < std::tie(b.dist, b.det, b.truth);
    });
    std::vector<bool> det_used(detections.size(), false), truth_used(truths.size(), false);
    DetectionMetrics metrics;
    for (const auto& p : pairs) {
        if (det_used[p.det] || truth_used[p.truth]) continue;
        det_used[p.det] = truth_used[p.truth] = true;
        ++metrics.true_positives;
    }
    metrics.false_positives = static_cast<int>(detections.size()) - metrics.true_positives;
    metrics.false_negatives = static_cast<int>(truths.size()) - metrics.true_positives;
    const int tp = metrics.true_positives;
    metrics.precision = detections.empty() ? 0.0 : static_cast<double>(tp) / detections.size();
    metrics.recall = truths.empty() ? 0.0 : static_cast<double>(tp) / truths.size();
    metrics.f_measure = (metrics.precision + metrics.recall) > 0
                            ? 2 * metrics.precision * metrics.recall /
                                  (metrics.precision + metrics.recall)
                            : 0.0;
    return metrics;
}

GrayImage rasterize_polygon(double cx, double cy, const std::vector<double>& radii, int width,
                            int height) {
    const int m = static_cast<int>(radii.size());
    if (m < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (double r : radii)
        if (r <= 0) throw std::invalid_argument("polygon radius must be positive");
    std::vector<double> vx(m), vy(m);
    for (int i = 0; i < m; ++i) {
        const double a = 2 * kPi * i / m;
        vx[i] = cx + radii[i] * std::cos(a);
        vy[i] = cy + radii[i] * std::sin(a);
    }
    GrayImage mask(width, height, 0);
    // Scanline even-odd fill at pixel centers.
    for (int y = 0; y < height; ++y) {
        std::vector<double> crossings;
        for (int i = 0; i < m; ++i) {
            const int j = (i + 1) % m;
            const double y0 = vy[i], y1 = vy[j];
            if ((y0 <= y && y1 > y) || (y1 <= y && y0 > y)) {
                const double t = (y - y0) / (y1 - y0);
                crossings.push_back(vx[i] + t * (vx[j] - vx[i]));
            }
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            const int x_lo = std::max(0, static_cast<int>(std::ceil(crossings[k])));
            const int x_hi = std::min(width - 1, static_cast<int>(std::floor(crossings[k + 1])));
            for (int x = x_lo; x <= x_hi; ++x) mask.at(x, y) = 255;
        }
    }
    return mask;
}

SegMetrics eval_segmentation(double cx, double cy, const std::vector<double>& radii,
                             const GrayImage& truth_mask) {
    const GrayImage est = rasterize_polygon(cx, cy, radii, truth_mask.width, truth_mask.height);
    SegMetrics m;
    for (int y = 0; y < truth_mask.height; ++y) {
        for (int x = 0; x < truth_mask.width; ++x) {
            const bool in_truth = truth_mask.at(x, y) != 0;
            const bool in_est = est.at(x, y) != 0;
            if (in_truth && in_est) ++m.true_area;
            else if (in_est) ++m.false_area;
            else if (in_truth) ++m.missed_area;
        }
    }
    const long est_total = m.true_area + m.false_area;
    const long truth_total = m.true_area + m.missed_area;
    m.precision = est_total > 0 ? static_cast<double>(m.true_area) / est_total : 0.0;
    m.recall = truth_total > 0 ? static_cast<double>(m.true_area) / truth_total : 0.0;
    m.f_measure =
        (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

void write_detections(const std::vector<Detection>& detections, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& d : detections) {
        nlohmann::json j{{"cx", d.candidate.cx},
                         {"cy", d.candidate.cy},
                         {"prescreen", d.candidate.prescreen_score},
                         {"classify", d.classify_score},
                         {"accepted", d.accepted},
                         {"radii", d.radii}};
        out << j.dump() << "\n";
    }
}

std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Detection> detections;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        Detection d;
        d.candidate.cx = j.at("cx").get<int>();
        d.candidate.cy = j.at("cy").get<int>();
        d.candidate.prescreen_score = j.at("prescreen").get<double>();
        d.classify_score = j.at("classify").get<double>();
        d.accepted = j.at("accepted").get<bool>();
        d.radii = j.at("radii").get<std::vector<double>>();
        detections.push_back(std::move(d));
    }
    return detections;
}

GroundTruth load_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    GroundTruth truth;
    for (const auto& c : j.at("centers"))
        truth.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    if (j.contains("masks"))
        truth.mask_paths = j.at("masks").get<std::vector<std::string>>();
    if (j.contains("radii36"))
        truth.radii36 = j.at("radii36").get<std::vector<std::vector<double>>>();
    if (j.contains("base_radius"))
        truth.base_radius = j.at("base_radius").get<std::vector<double>>();
    return truth;
}

}  // namespace glodet::pipeline
