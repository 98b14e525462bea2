// glodet command-line tool. Talks to the library exclusively through the C
// API in glodet.h. Exit codes: 0 success, 2 missing/invalid input files or
// bad arguments, 1 anything else.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glodet.h"

namespace {

int status_to_exit(glodet_status s) {
    if (s == GLODET_OK) return 0;
    std::fprintf(stderr, "error: %s\n", glodet_last_error());
    return (s == GLODET_ERR_IO || s == GLODET_ERR_INVALID) ? 2 : 1;
}

struct ImageHandle {
    glodet_image* ptr = nullptr;
    ~ImageHandle() { glodet_image_free(ptr); }
};
struct ModelHandle {
    glodet_model* ptr = nullptr;
    ~ModelHandle() { glodet_model_free(ptr); }
};

int run_detect(const std::string& image_path, const std::string& prescreen_path,
               const std::string& boundary_path, const std::string& classify_path,
               const std::string& out_path, const glodet_detect_config& config) {
    ImageHandle image;
    ModelHandle prescreen, boundary, classify;
    glodet_status s = glodet_image_load(image_path.c_str(), &image.ptr);
    if (s == GLODET_OK) s = glodet_model_load(prescreen_path.c_str(), &prescreen.ptr);
    if (s == GLODET_OK) s = glodet_model_load(boundary_path.c_str(), &boundary.ptr);
    if (s == GLODET_OK) s = glodet_model_load(classify_path.c_str(), &classify.ptr);
    if (s != GLODET_OK) return status_to_exit(s);
    int accepted = 0;
    s = glodet_detect(image.ptr, prescreen.ptr, boundary.ptr, classify.ptr, &config,
                      out_path.c_str(), &accepted);
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf("accepted %d detection(s), written to %s\n", accepted, out_path.c_str());
    return 0;
}

int run_train(const std::string& manifest, const std::string& stage,
              const std::string& boundary_path, double c, std::uint64_t seed,
              const std::string& out_path) {
    ModelHandle boundary;
    if (!boundary_path.empty()) {
        const glodet_status s = glodet_model_load(boundary_path.c_str(), &boundary.ptr);
        if (s != GLODET_OK) return status_to_exit(s);
    }
    const glodet_status s =
        glodet_train(manifest.c_str(), stage.c_str(), boundary.ptr, c, seed, out_path.c_str());
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf("trained %s model written to %s\n", stage.c_str(), out_path.c_str());
    return 0;
}

int run_segment(const std::string& image_path, const std::string& boundary_path, double cx,
                double cy, const std::string& scheme) {
    ImageHandle image;
    ModelHandle boundary;
    glodet_status s = glodet_image_load(image_path.c_str(), &image.ptr);
    if (s == GLODET_OK) s = glodet_model_load(boundary_path.c_str(), &boundary.ptr);
    if (s != GLODET_OK) return status_to_exit(s);
    double radii[36];
    int n_dp = 0;
    s = glodet_segment(image.ptr, cx, cy, boundary.ptr, scheme.c_str(), radii, &n_dp);
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf("{\"cx\": %g, \"cy\": %g, \"n_dp\": %d, \"radii\": [", cx, cy, n_dp);
    for (int i = 0; i < 36; ++i) std::printf(i ? ", %g" : "%g", radii[i]);
    std::printf("]}\n");
    return 0;
}

int run_gen_phantoms(const std::string& out_dir, int count,
                     const glodet_phantom_config& config) {
    char manifest[4096] = {0};
    const glodet_status s =
        glodet_gen_phantoms(out_dir.c_str(), count, &config, manifest, sizeof(manifest));
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf("%s\n", manifest);
    return 0;
}

int run_bench(std::vector<std::string> instances, const std::string& dir, int repetitions,
              const std::string& out_csv) {
    namespace fs = std::filesystem;
    if (!dir.empty()) {
        if (!fs::is_directory(dir)) {
            std::fprintf(stderr, "error: not a directory: %s\n", dir.c_str());
            return 2;
        }
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") instances.push_back(e.path().string());
        std::sort(instances.begin(), instances.end());
    }
    if (instances.empty()) {
        std::fprintf(stderr, "error: benchmark corpus is empty\n");
        return 2;
    }
    std::vector<const char*> paths;
    for (const auto& p : instances) paths.push_back(p.c_str());
    const glodet_status s = glodet_bench_solvers(paths.data(), static_cast<int>(paths.size()),
                                                 repetitions, out_csv.c_str());
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf("benchmarked %zu instance(s), CSV written to %s\n", paths.size(),
                out_csv.c_str());
    return 0;
}

int run_eval(const std::string& detections, const std::string& truth, double match_radius) {
    glodet_eval_result r;
    const glodet_status s =
        glodet_eval(detections.c_str(), truth.c_str(), match_radius, &r);
    if (s != GLODET_OK) return status_to_exit(s);
    std::printf(
        "{\"tp\": %d, \"fp\": %d, \"fn\": %d, \"precision\": %.6f, \"recall\": %.6f, "
        "\"f_measure\": %.6f}\n",
        r.true_positives, r.false_positives, r.false_negatives, r.precision, r.recall,
        r.f_measure);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circular-object detector: sliding-window detection with exact "
                 "divide-and-conquer boundary segmentation"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // detect
    std::string image_path, prescreen_path, boundary_path, classify_path, out_path;
    glodet_detect_config detect_cfg = glodet_detect_config_default();
    std::string scheme = "adap";
    auto* detect = app.add_subcommand("detect", "Run the full three-stage detection pipeline");
    detect->add_option("--image", image_path, "Input image (PGM or PNG)")->required();
    detect->add_option("--prescreen-model", prescreen_path, "Pre-screening model JSON")
        ->required();
    detect->add_option("--boundary-model", boundary_path, "Boundary model JSON")->required();
    detect->add_option("--classify-model", classify_path, "Classification model JSON")
        ->required();
    detect->add_option("--out", out_path, "Output detections JSON-lines")->required();
    detect->add_option("--theta", detect_cfg.theta, "Classification threshold");
    detect->add_option("--stride", detect_cfg.stride, "Sliding-window stride");
    detect->add_option("--prescreen-threshold", detect_cfg.prescreen_threshold,
                       "Pre-screening score threshold");
    detect->add_option("--nms-radius", detect_cfg.nms_radius, "Non-max suppression radius");
    detect->add_option("--scheme", scheme, "Split scheme: half, max, or adap");

    // train
    std::string manifest, stage, train_out, train_boundary;
    double c = 10.0;
    std::uint64_t seed = 17;
    auto* train = app.add_subcommand("train", "Train a stage model from a phantom corpus");
    train->add_option("--manifest", manifest, "Corpus manifest JSON")->required();
    train->add_option("--stage", stage, "prescreen, boundary, or classify")->required();
    train->add_option("--out", train_out, "Output model JSON")->required();
    train->add_option("--boundary-model", train_boundary,
                      "Trained boundary model (required for stage classify)");
    train->add_option("--c", c, "Regularization trade-off C");
    train->add_option("--seed", seed, "Training seed");

    // segment
    double cx = 0, cy = 0;
    auto* segment =
        app.add_subcommand("segment", "Segment one candidate and print the polygon");
    segment->add_option("--image", image_path, "Input image")->required();
    segment->add_option("--boundary-model", boundary_path, "Boundary model JSON")->required();
    segment->add_option("--cx", cx, "Candidate center x")->required();
    segment->add_option("--cy", cy, "Candidate center y")->required();
    segment->add_option("--scheme", scheme, "Split scheme: half, max, or adap");

    // gen-phantoms
    std::string out_dir;
    int count = 1;
    glodet_phantom_config phantom_cfg = glodet_phantom_config_default();
    auto* gen = app.add_subcommand("gen-phantoms", "Generate a synthetic phantom corpus");
    gen->add_option("--out-dir", out_dir, "Output directory")->required();
    gen->add_option("--count", count, "Number of phantom images");
    gen->add_option("--seed", phantom_cfg.seed, "Base seed (image i uses seed + i)");
    gen->add_option("--width", phantom_cfg.width, "Image width");
    gen->add_option("--height", phantom_cfg.height, "Image height");
    gen->add_option("--objects", phantom_cfg.object_count, "Objects per image");
    gen->add_option("--distractors", phantom_cfg.distractor_count, "Distractors per image");
    gen->add_option("--radius-min", phantom_cfg.radius_min, "Minimum object radius");
    gen->add_option("--radius-max", phantom_cfg.radius_max, "Maximum object radius");
    gen->add_option("--capsule-prob", phantom_cfg.capsule_probability,
                    "Probability of a bright capsule ring");
    gen->add_option("--perturb", phantom_cfg.perturb_max,
                    "Maximum radial perturbation (fraction of radius)");

    // bench-solvers
    std::vector<std::string> instance_files;
    std::string instance_dir, csv_out = "bench.csv";
    int repetitions = 5;
    auto* bench = app.add_subcommand("bench-solvers", "Benchmark the boundary solvers");
    bench->add_option("instances", instance_files, "Instance JSON files");
    bench->add_option("--dir", instance_dir, "Directory of instance JSON files");
    bench->add_option("--repetitions", repetitions, "Timed repetitions per instance");
    bench->add_option("--out", csv_out, "Output CSV path");

    // eval
    std::string detections_path, truth_path;
    double match_radius = 100.0;
    auto* eval = app.add_subcommand("eval", "Match detections against ground truth");
    eval->add_option("--detections", detections_path, "Detections JSON-lines")->required();
    eval->add_option("--truth", truth_path, "Ground-truth JSON")->required();
    eval->add_option("--match-radius", match_radius, "Matching radius in pixels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    detect_cfg.solver = scheme.c_str();
    if (detect->parsed())
        return run_detect(image_path, prescreen_path, boundary_path, classify_path, out_path,
                          detect_cfg);
    if (train->parsed()) return run_train(manifest, stage, train_boundary, c, seed, train_out);
    if (segment->parsed()) return run_segment(image_path, boundary_path, cx, cy, scheme);
    if (gen->parsed()) return run_gen_phantoms(out_dir, count, phantom_cfg);
    if (bench->parsed()) return run_bench(instance_files, instance_dir, repetitions, csv_out);
    if (eval->parsed()) return run_eval(detections_path, truth_path, match_radius);
    return 2;
}
