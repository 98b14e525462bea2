#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "glodet/pipeline.hpp"
#include "glodet/synth.hpp"
#include "glodet/train_data.hpp"

using namespace glodet;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

model::LinearModel zero_model(model::Stage stage) {
    model::LinearModel m;
    m.stage = stage;
    m.dim = model::stage_dim(stage);
    m.weights.assign(m.dim, 0.0);
    return m;
}

/// Shared fixture: a small phantom corpus with prescreen and boundary models
/// trained on it, built once for the whole binary.
struct TrainedFixture {
    std::string dir;
    std::vector<synth::CorpusEntry> entries;
    model::LinearModel prescreen_model;
    model::LinearModel boundary_model;

    TrainedFixture() {
        dir = (fs::temp_directory_path() / "glodet_pipeline_fixture").string();
        fs::remove_all(dir);
        synth::PhantomSpec spec;
        spec.width = 420;
        spec.height = 420;
        spec.object_count = 1;
        spec.distractor_count = 1;
        spec.radius_min = 40.0;
        spec.radius_max = 70.0;
        spec.seed = 100;
        const auto manifest = synth::generate_corpus(spec, 8, dir);
        entries = synth::load_manifest(manifest);

        const auto pre = train_data::build_prescreen_data(entries);
        model::TrainOptions pre_options;
        pre_options.positive_target = model::kPrescreenPositiveTarget;
        prescreen_model =
            model::train(model::Stage::PreScreen, pre.positives, pre.negatives, pre_options);
        const auto bnd = train_data::build_boundary_data(entries);
        boundary_model = model::train(model::Stage::Boundary, bnd.positives, bnd.negatives);
    }
    ~TrainedFixture() { fs::remove_all(dir); }
};

const TrainedFixture& fixture() {
    static TrainedFixture f;
    return f;
}

}  // namespace

TEST_CASE("ray geometry spans 17..80 px") {
    const pipeline::RayGeometry geom;
    CHECK(geom.rays == 36);
    CHECK(geom.samples == 22);
    CHECK(geom.radius(1) == 17.0);
    CHECK(geom.radius(22) == 80.0);
    CHECK(geom.angle(0) == 0.0);
    CHECK(geom.angle(9) == doctest::Approx(kPi / 2));
}

TEST_CASE("nms basics") {
    CHECK(pipeline::nms({}, 100.0).empty());
    CHECK_THROWS_AS(pipeline::nms({{10, 10, 1.0}}, 0.0), std::invalid_argument);

    const auto single = pipeline::nms({{10, 10, 1.0}}, 100.0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].cx == 10);

    // Two windows 50 px apart, scores 3 and 2: only the score-3 one survives.
    const auto two = pipeline::nms({{0, 0, 2.0}, {50, 0, 3.0}}, 100.0);
    REQUIRE(two.size() == 1);
    CHECK(two[0].cx == 50);
    CHECK(two[0].prescreen_score == 3.0);

    // Far apart: both survive.
    CHECK(pipeline::nms({{0, 0, 2.0}, {150, 0, 3.0}}, 100.0).size() == 2);

    // Equal scores: deterministic (y, x) tie-break keeps the smaller (y, x).
    const auto tie = pipeline::nms({{50, 0, 1.0}, {0, 0, 1.0}}, 100.0);
    REQUIRE(tie.size() == 1);
    CHECK(tie[0].cx == 0);
}

TEST_CASE("nms output centers are pairwise separated") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> upos(0, 500);
    std::uniform_real_distribution<double> uscore(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<pipeline::Candidate> scored;
        for (int i = 0; i < 40; ++i) scored.push_back({upos(rng), upos(rng), uscore(rng)});
        const auto kept = pipeline::nms(scored, 80.0);
        for (std::size_t a = 0; a < kept.size(); ++a)
            for (std::size_t b = a + 1; b < kept.size(); ++b)
                CHECK(std::hypot(kept[a].cx - kept[b].cx, kept[a].cy - kept[b].cy) >= 80.0);
        // Every suppressed window is within the radius of some kept window.
        for (const auto& c : scored) {
            bool covered = false;
            for (const auto& k : kept)
                if (std::hypot(c.cx - k.cx, c.cy - k.cy) < 80.0) covered = true;
            CHECK(covered);
        }
    }
}

TEST_CASE("prescreen trivial cases") {
    auto m = zero_model(model::Stage::PreScreen);
    m.bias = 0.0;  // below the default threshold of 2
    const GrayImage blank(300, 300, 128);
    CHECK(pipeline::prescreen(blank, m).empty());

    // Image smaller than the window: empty.
    CHECK(pipeline::prescreen(GrayImage(150, 150, 128), m).empty());

    // Threshold effectively +infinity: empty even with a huge bias.
    m.bias = 100.0;
    pipeline::PipelineConfig config;
    config.prescreen_threshold = 1e18;
    CHECK(pipeline::prescreen(blank, m, config).empty());

    CHECK_THROWS_AS(pipeline::prescreen(blank, zero_model(model::Stage::Boundary)),
                    std::invalid_argument);
}

TEST_CASE("prescreen finds the phantom disc near its center") {
    const auto& f = fixture();
    int hits = 0, images = 0;
    for (const auto& entry : f.entries) {
        const auto img = load_image(entry.image_path);
        const auto truth = pipeline::load_truth(entry.truth_path);
        REQUIRE(truth.centers.size() == 1);
        const auto candidates = pipeline::prescreen(img, f.prescreen_model);
        ++images;
        if (candidates.size() == 1 &&
            std::hypot(candidates[0].cx - truth.centers[0].x,
                       candidates[0].cy - truth.centers[0].y) <= 15.0)
            ++hits;
    }
    // Allow one miss across the corpus; the trained model is data-dependent.
    CHECK(hits >= images - 1);
}

TEST_CASE("likeliness table shape and elementwise recomputation") {
    const GrayImage flat(300, 300, 128);
    auto m = zero_model(model::Stage::Boundary);
    const auto inst = pipeline::build_likeliness_table(flat, 150, 150, m);
    CHECK(inst.m == 36);
    CHECK(inst.n == 22);
    CHECK(inst.sigma == 1);
    for (double v : inst.table) CHECK(v == 0.0);

    // Nonzero model on a textured image: every entry equals a direct score.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& w : m.weights) w = u(rng);
    m.bias = 0.3;
    GrayImage img(300, 300);
    std::uniform_int_distribution<int> pix(0, 255);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(pix(rng));
    const auto inst2 = pipeline::build_likeliness_table(img, 150, 150, m);
    const pipeline::RayGeometry geom;
    for (int i = 0; i < 36; i += 7) {
        for (int p = 1; p <= 22; p += 5) {
            const auto d =
                hog::boundary_descriptor(img, 150, 150, geom.angle(i), geom.radius(p));
            CHECK(inst2.likeliness(i, p) == model::score(m, d));
        }
    }
}

TEST_CASE("segmentation satisfies all cyclic constraints") {
    const auto& f = fixture();
    const auto img = load_image(f.entries[0].image_path);
    const auto truth = pipeline::load_truth(f.entries[0].truth_path);
    const auto radii = pipeline::segment(img, truth.centers[0].x, truth.centers[0].y,
                                         f.boundary_model);
    REQUIRE(radii.size() == 36);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        CHECK(radii[i] >= 17.0);
        CHECK(radii[i] <= 80.0);
        const double next = radii[(i + 1) % radii.size()];
        CHECK(std::abs(radii[i] - next) <= 3.0 + 1e-9);  // sigma * spacing
    }
}

TEST_CASE("segmentation radius error is small on phantom objects") {
    const auto& f = fixture();
    double total_err = 0.0;
    int count = 0;
    for (const auto& entry : f.entries) {
        const auto img = load_image(entry.image_path);
        const auto truth = pipeline::load_truth(entry.truth_path);
        const auto radii = pipeline::segment(img, truth.centers[0].x, truth.centers[0].y,
                                             f.boundary_model);
        for (int i = 0; i < 36; ++i) {
            total_err += std::abs(radii[i] - truth.radii36[0][i]);
            ++count;
        }
    }
    CHECK(total_err / count <= 3.0);
}

TEST_CASE("split scheme never changes the segmentation objective") {
    const auto& f = fixture();
    const auto img = load_image(f.entries[1].image_path);
    const auto truth = pipeline::load_truth(f.entries[1].truth_path);
    const auto inst = pipeline::build_likeliness_table(img, truth.centers[0].x,
                                                       truth.centers[0].y, f.boundary_model);
    const auto [edp, edp_stats] = solver::edp_solve(inst);
    for (auto scheme :
         {solver::SplitScheme::Half, solver::SplitScheme::Max, solver::SplitScheme::Adap}) {
        solver::SolveStats stats;
        const auto radii = pipeline::segment(img, truth.centers[0].x, truth.centers[0].y,
                                             f.boundary_model, {}, scheme, &stats);
        const pipeline::RayGeometry geom;
        std::vector<int> p(36);
        for (int i = 0; i < 36; ++i)
            p[i] = static_cast<int>(std::lround((radii[i] - geom.inner_offset) / geom.spacing)) + 1;
        CHECK(contour::objective(inst, p) == doctest::Approx(edp.objective).epsilon(1e-12));
        CHECK(stats.n_dp >= 1);
    }
}

TEST_CASE("classify threshold extremes") {
    const GrayImage img(300, 300, 100);
    auto m = zero_model(model::Stage::Classify);
    m.bias = 0.25;
    const std::vector<pipeline::Candidate> candidates{{150, 150, 5.0}};
    const std::vector<std::vector<double>> polygons{std::vector<double>(36, 40.0)};

    const auto none = pipeline::classify(img, candidates, polygons, m, 1e18);
    REQUIRE(none.size() == 1);
    CHECK(!none[0].accepted);
    CHECK(none[0].classify_score == doctest::Approx(0.25));

    const auto all = pipeline::classify(img, candidates, polygons, m, -1e18);
    CHECK(all[0].accepted);

    CHECK_THROWS_AS(pipeline::classify(img, candidates, {}, m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(
        pipeline::classify(img, candidates, polygons, zero_model(model::Stage::Boundary), 0.0),
        std::invalid_argument);
}

namespace {

/// Exhaustive maximum bipartite matching (augmenting paths) as an oracle.
int max_matching(const std::vector<pipeline::Point>& dets,
                 const std::vector<pipeline::Point>& truths, double radius) {
    std::vector<std::vector<int>> adj(dets.size());
    for (std::size_t d = 0; d < dets.size(); ++d)
        for (std::size_t t = 0; t < truths.size(); ++t)
            if (std::hypot(dets[d].x - truths[t].x, dets[d].y - truths[t].y) <= radius)
                adj[d].push_back(static_cast<int>(t));
    std::vector<int> match_of_truth(truths.size(), -1);
    std::vector<bool> visited;
    std::function<bool(int)> augment = [&](int d) -> bool {
        for (int t : adj[d]) {
            if (visited[t]) continue;
            visited[t] = true;
            if (match_of_truth[t] < 0 || augment(match_of_truth[t])) {
                match_of_truth[t] = d;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (std::size_t d = 0; d < dets.size(); ++d) {
        visited.assign(truths.size(), false);
        if (augment(static_cast<int>(d))) ++matched;
    }
    return matched;
}

}  // namespace

TEST_CASE("detection metrics identities and conventions") {
    // Perfect detections.
    const std::vector<pipeline::Point> truths{{10, 10}, {300, 300}};
    auto m = pipeline::eval_detection(truths, truths, 100.0);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f_measure == 1.0);

    // No detections: precision reported as 0 by convention.
    m = pipeline::eval_detection({}, truths, 100.0);
    CHECK(m.true_positives == 0);
    CHECK(m.false_negatives == 2);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);

    CHECK_THROWS_AS(pipeline::eval_detection({}, truths, 0.0), std::invalid_argument);

    // Randomized fixtures: counting identities always hold.
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<pipeline::Point> dets, tr;
        std::uniform_int_distribution<int> nd(0, 8);
        for (int i = nd(rng); i > 0; --i) dets.push_back({u(rng), u(rng)});
        for (int i = nd(rng); i > 0; --i) tr.push_back({u(rng), u(rng)});
        const auto metrics = pipeline::eval_detection(dets, tr, 100.0);
        CHECK(metrics.true_positives + metrics.false_negatives == static_cast<int>(tr.size()));
        CHECK(metrics.true_positives + metrics.false_positives == static_cast<int>(dets.size()));
        CHECK(metrics.true_positives <= max_matching(dets, tr, 100.0));
    }
}

TEST_CASE("greedy matching equals the bipartite optimum on separated scenes") {
    // Clusters far apart relative to the match radius: greedy cannot lose.
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> jitter(-30.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<pipeline::Point> dets, truths;
        for (int k = 0; k < 5; ++k) {
            const double cx = 400.0 * k, cy = 150.0 * (k % 2);
            truths.push_back({cx, cy});
            if (k % 3 != 2) dets.push_back({cx + jitter(rng), cy + jitter(rng)});
        }
        const auto metrics = pipeline::eval_detection(dets, truths, 100.0);
        CHECK(metrics.true_positives == max_matching(dets, truths, 100.0));
    }
}

TEST_CASE("polygon rasterizer validation and area") {
    CHECK_THROWS_AS(pipeline::rasterize_polygon(50, 50, {10.0, 12.0}, 100, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS(pipeline::rasterize_polygon(50, 50, std::vector<double>(36, -1.0), 100, 100),
                    std::invalid_argument);
    const auto mask = pipeline::rasterize_polygon(100, 100, std::vector<double>(36, 50.0), 200, 200);
    long area = 0;
    for (auto v : mask.data) area += v != 0 ? 1 : 0;
    // 36-gon area = 0.5 * m * r^2 * sin(2*pi/m).
    const double expected = 0.5 * 36 * 50.0 * 50.0 * std::sin(2 * kPi / 36);
    CHECK(std::abs(area - expected) / expected < 0.02);
}

TEST_CASE("segmentation metrics: self, containment, concentric discs") {
    // Truth mask: exact disc of radius 50.
    GrayImage truth(240, 240, 0);
    for (int y = 0; y < 240; ++y)
        for (int x = 0; x < 240; ++x)
            if (std::hypot(x - 120.0, y - 120.0) <= 50.0) truth.at(x, y) = 255;

    // Matching polygon: F close to 1 (polygon chord vs circle arc).
    auto self = pipeline::eval_segmentation(120, 120, std::vector<double>(36, 50.0), truth);
    CHECK(self.f_measure >= 0.99);

    // Polygon fully inside: precision 1, recall < 1.
    auto inside = pipeline::eval_segmentation(120, 120, std::vector<double>(36, 30.0), truth);
    CHECK(inside.precision == 1.0);
    CHECK(inside.recall < 1.0);
    CHECK(inside.false_area == 0);

    // Concentric discs 40 vs 50: recall = 0.64 within rasterization tolerance.
    auto concentric = pipeline::eval_segmentation(120, 120, std::vector<double>(36, 40.0), truth);
    CHECK(concentric.precision == 1.0);
    CHECK(concentric.recall == doctest::Approx(0.64).epsilon(0.016));
}

TEST_CASE("detections JSON-lines round trip") {
    std::vector<pipeline::Detection> detections(2);
    detections[0].candidate = {150, 210, 3.5};
    detections[0].radii.assign(36, 42.0);
    detections[0].classify_score = 0.75;
    detections[0].accepted = true;
    detections[1].candidate = {400, 90, 2.25};
    detections[1].radii.assign(36, 18.0);
    detections[1].classify_score = -2.0;
    detections[1].accepted = false;

    const auto path = (fs::temp_directory_path() / "glodet_detections.jsonl").string();
    pipeline::write_detections(detections, path);
    const auto loaded = pipeline::read_detections(path);
    REQUIRE(loaded.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(loaded[i].candidate.cx == detections[i].candidate.cx);
        CHECK(loaded[i].candidate.cy == detections[i].candidate.cy);
        CHECK(loaded[i].candidate.prescreen_score == detections[i].candidate.prescreen_score);
        CHECK(loaded[i].classify_score == detections[i].classify_score);
        CHECK(loaded[i].accepted == detections[i].accepted);
        CHECK(loaded[i].radii == detections[i].radii);
    }
    fs::remove(path);
}
