#include "glodet.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "glodet/bench.hpp"
#include "glodet/contour.hpp"
#include "glodet/image.hpp"
#include "glodet/linear_model.hpp"
#include "glodet/pipeline.hpp"
#include "glodet/solver.hpp"
#include "glodet/synth.hpp"
#include "glodet/train_data.hpp"

using namespace glodet;

struct glodet_image {
    GrayImage image;
};
struct glodet_model {
    model::LinearModel model;
    std::string stage_name;
};
struct glodet_instance {
    contour::ContourInstance inst;
};

namespace {

thread_local std::string g_last_error;

glodet_status fail(glodet_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

/// Maps exceptions to status codes: filesystem/stream problems -> IO,
/// validation -> INVALID, everything else -> RUNTIME.
template <typename Fn>
glodet_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return GLODET_OK;
    } catch (const std::invalid_argument& e) {
        return fail(GLODET_ERR_INVALID, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(GLODET_ERR_IO, e.what());
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.rfind("cannot open", 0) == 0 || what.rfind("cannot write", 0) == 0 ||
            what.rfind("cannot read", 0) == 0)
            return fail(GLODET_ERR_IO, what);
        return fail(GLODET_ERR_RUNTIME, what);
    } catch (const std::exception& e) {
        return fail(GLODET_ERR_RUNTIME, e.what());
    }
}

glodet_status require(bool condition, const char* message) {
    return condition ? GLODET_OK : fail(GLODET_ERR_INVALID, message);
}

std::pair<contour::PolygonSolution, solver::SolveStats> run_solver(
    const contour::ContourInstance& inst, const std::string& name) {
    if (name == "edp") return solver::edp_solve(inst);
    return solver::dcdp_solve(inst, solver::parse_scheme(name));
}

}  // namespace

extern "C" {

const char* glodet_version(void) { return "1.0.0"; }

const char* glodet_last_error(void) { return g_last_error.c_str(); }

glodet_status glodet_image_load(const char* path, glodet_image** out) {
    if (require(path && out, "null argument") != GLODET_OK) return GLODET_ERR_INVALID;
    return guarded([&] { *out = new glodet_image{load_image(path)}; });
}

void glodet_image_free(glodet_image* img) { delete img; }

glodet_status glodet_image_size(const glodet_image* img, int* width, int* height) {
    if (require(img != nullptr, "null image") != GLODET_OK) return GLODET_ERR_INVALID;
    if (width) *width = img->image.width;
    if (height) *height = img->image.height;
    g_last_error.clear();
    return GLODET_OK;
}

glodet_status glodet_model_load(const char* path, glodet_model** out) {
    if (require(path && out, "null argument") != GLODET_OK) return GLODET_ERR_INVALID;
    return guarded([&] {
        auto m = model::load_model(path);
        *out = new glodet_model{m, model::stage_name(m.stage)};
    });
}

void glodet_model_free(glodet_model* model) { delete model; }

glodet_status glodet_model_info(const glodet_model* model, const char** stage, int* dim) {
    if (require(model != nullptr, "null model") != GLODET_OK) return GLODET_ERR_INVALID;
    if (stage) *stage = model->stage_name.c_str();
    if (dim) *dim = model->model.dim;
    g_last_error.clear();
    return GLODET_OK;
}

glodet_status glodet_instance_load(const char* path, glodet_instance** out) {
    if (require(path && out, "null argument") != GLODET_OK) return GLODET_ERR_INVALID;
    return guarded([&] { *out = new glodet_instance{contour::load_instance(path)}; });
}

void glodet_instance_free(glodet_instance* inst) { delete inst; }

glodet_status glodet_instance_shape(const glodet_instance* inst, int* n, int* m, int* sigma) {
    if (require(inst != nullptr, "null instance") != GLODET_OK) return GLODET_ERR_INVALID;
    if (n) *n = inst->inst.n;
    if (m) *m = inst->inst.m;
    if (sigma) *sigma = inst->inst.sigma;
    g_last_error.clear();
    return GLODET_OK;
}

glodet_status glodet_solve(const glodet_instance* inst, const char* solver, int* p_out,
                           double* objective, int* n_dp) {
    if (require(inst && solver && p_out, "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        auto [sol, stats] = run_solver(inst->inst, solver);
        for (std::size_t i = 0; i < sol.p.size(); ++i) p_out[i] = sol.p[i];
        if (objective) *objective = sol.objective;
        if (n_dp) *n_dp = stats.n_dp;
    });
}

glodet_status glodet_segment(const glodet_image* img, double cx, double cy,
                             const glodet_model* boundary_model, const char* solver,
                             double* radii_out, int* n_dp) {
    if (require(img && boundary_model && solver && radii_out, "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        solver::SolveStats stats;
        const auto radii = pipeline::segment(img->image, cx, cy, boundary_model->model, {},
                                             solver::parse_scheme(solver), &stats);
        for (std::size_t i = 0; i < radii.size(); ++i) radii_out[i] = radii[i];
        if (n_dp) *n_dp = stats.n_dp;
    });
}

glodet_detect_config glodet_detect_config_default(void) {
    pipeline::PipelineConfig d;
    return {d.stride, d.prescreen_threshold, d.nms_radius, d.theta, "adap"};
}

glodet_status glodet_detect(const glodet_image* img, const glodet_model* prescreen_model,
                            const glodet_model* boundary_model,
                            const glodet_model* classify_model,
                            const glodet_detect_config* config, const char* out_jsonl_path,
                            int* accepted_count) {
    if (require(img && prescreen_model && boundary_model && classify_model && out_jsonl_path,
                "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        const glodet_detect_config c = config ? *config : glodet_detect_config_default();
        pipeline::PipelineConfig pc;
        pc.stride = c.stride;
        pc.prescreen_threshold = c.prescreen_threshold;
        pc.nms_radius = c.nms_radius;
        pc.theta = c.theta;
        pc.scheme = solver::parse_scheme(c.solver ? c.solver : "adap");
        const auto detections = pipeline::detect(img->image, prescreen_model->model,
                                                 boundary_model->model, classify_model->model,
                                                 pc);
        pipeline::write_detections(detections, out_jsonl_path);
        if (accepted_count) {
            int accepted = 0;
            for (const auto& d : detections) accepted += d.accepted ? 1 : 0;
            *accepted_count = accepted;
        }
    });
}

glodet_status glodet_train(const char* manifest_path, const char* stage,
                           const glodet_model* boundary_model, double c, uint64_t seed,
                           const char* out_model_path) {
    if (require(manifest_path && stage && out_model_path, "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        const auto entries = synth::load_manifest(manifest_path);
        const model::Stage st = model::parse_stage(stage);
        train_data::StageData data;
        switch (st) {
            case model::Stage::PreScreen:
                data = train_data::build_prescreen_data(entries, seed);
                break;
            case model::Stage::Boundary:
                data = train_data::build_boundary_data(entries);
                break;
            case model::Stage::Classify:
                if (!boundary_model)
                    throw std::invalid_argument(
                        "training the classify stage needs a boundary model");
                data = train_data::build_classify_data(entries, boundary_model->model, {},
                                                       solver::SplitScheme::Adap, seed);
                break;
        }
        if (data.positives.empty() || data.negatives.empty())
            throw std::runtime_error("training data extraction yielded an empty class");
        model::TrainOptions options;
        options.c = c;
        options.seed = seed;
        if (st == model::Stage::PreScreen)
            options.positive_target = model::kPrescreenPositiveTarget;
        const auto trained = model::train(st, data.positives, data.negatives, options);
        model::save_model(trained, out_model_path);
    });
}

glodet_phantom_config glodet_phantom_config_default(void) {
    synth::PhantomSpec d;
    return {d.width,          d.height,      d.object_count,       d.distractor_count,
            d.radius_min,     d.radius_max,  d.capsule_probability, d.perturb_max,
            d.seed};
}

glodet_status glodet_gen_phantoms(const char* out_dir, int count,
                                  const glodet_phantom_config* config,
                                  char* manifest_path_out, size_t manifest_path_cap) {
    if (require(out_dir != nullptr, "null output directory") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        const glodet_phantom_config c =
            config ? *config : glodet_phantom_config_default();
        synth::PhantomSpec spec;
        spec.width = c.width;
        spec.height = c.height;
        spec.object_count = c.object_count;
        spec.distractor_count = c.distractor_count;
        spec.radius_min = c.radius_min;
        spec.radius_max = c.radius_max;
        spec.capsule_probability = c.capsule_probability;
        spec.perturb_max = c.perturb_max;
        spec.seed = c.seed;
        const std::string manifest = synth::generate_corpus(spec, count, out_dir);
        if (manifest_path_out && manifest_path_cap > 0) {
            const std::size_t len = std::min(manifest.size(), manifest_path_cap - 1);
            std::memcpy(manifest_path_out, manifest.c_str(), len);
            manifest_path_out[len] = '\0';
        }
    });
}

glodet_status glodet_bench_solvers(const char* const* instance_paths, int path_count,
                                   int repetitions, const char* out_csv_path) {
    if (require(instance_paths && out_csv_path, "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    if (require(path_count > 0, "benchmark corpus is empty") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        std::vector<std::string> paths(instance_paths, instance_paths + path_count);
        const auto report = bench::run_bench(paths, repetitions);
        bench::write_csv(report, out_csv_path);
    });
}

glodet_status glodet_eval(const char* detections_path, const char* truth_path,
                          double match_radius, glodet_eval_result* out) {
    if (require(detections_path && truth_path && out, "null argument") != GLODET_OK)
        return GLODET_ERR_INVALID;
    return guarded([&] {
        const auto detections = pipeline::read_detections(detections_path);
        const auto truth = pipeline::load_truth(truth_path);
        std::vector<pipeline::Point> accepted;
        for (const auto& d : detections)
            if (d.accepted)
                accepted.push_back({static_cast<double>(d.candidate.cx),
                                    static_cast<double>(d.candidate.cy)});
        const auto m = pipeline::eval_detection(accepted, truth.centers, match_radius);
        out->true_positives = m.true_positives;
        out->false_positives = m.false_positives;
        out->false_negatives = m.false_negatives;
        out->precision = m.precision;
        out->recall = m.recall;
        out->f_measure = m.f_measure;
    });
}

}  // extern "C"
