#include "glodet/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace glodet::model {

Stage parse_stage(const std::string& name) {
    if (name == "prescreen") return Stage::PreScreen;
    if (name == "boundary") return Stage::Boundary;
    if (name == "classify") return Stage::Classify;
    throw std::invalid_argument("unknown stage: " + name);
}

std::string stage_name(Stage stage) {
    switch (stage) {
        case Stage::PreScreen: return "prescreen";
        case Stage::Boundary: return "boundary";
        case Stage::Classify: return "classify";
    }
    return "?";
}

int stage_dim(Stage stage) {
    switch (stage) {
        case Stage::PreScreen: return hog::kRhogDim;
        case Stage::Boundary: return hog::kBoundaryDim;
        case Stage::Classify: return hog::kShogDim;
    }
    return 0;
}

double score(const LinearModel& model, std::span<const double> values) {
    if (static_cast<int>(values.size()) != model.dim)
        throw std::invalid_argument("descriptor length does not match model dimension");
    double sum = model.bias;
    for (int i = 0; i < model.dim; ++i) sum += model.weights[i] * values[i];
    return sum;
}

double score(const LinearModel& model, const hog::Descriptor& d) {
    return score(model, std::span<const double>(d.values));
}

double hinge_objective(const LinearModel& model, const std::vector<std::vector<double>>& positives,
                       const std::vector<std::vector<double>>& negatives) {
    double obj = 0.0;
    for (double w : model.weights) obj += 0.5 * w * w;
    for (const auto& x : positives) obj += model.c * std::max(0.0, 1.0 - score(model, x));
    for (const auto& x : negatives) obj += model.c * std::max(0.0, 1.0 + score(model, x));
    return obj;
}

namespace {

LinearModel train_once(Stage stage, const std::vector<std::vector<double>>& positives,
                       const std::vector<std::vector<double>>& negatives, const TrainOptions& opt,
                       std::uint64_t seed) {
    const int dim = static_cast<int>(positives.front().size());
    LinearModel model;
    model.stage = stage;
    model.dim = dim;
    model.c = opt.c;
    model.weights.assign(dim, 0.0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> init(-0.01, 0.01);
    for (auto& w : model.weights) w = init(rng);
    model.bias = init(rng);

    const std::size_t total = positives.size() + negatives.size();
    std::vector<std::pair<const std::vector<double>*, double>> samples;
    samples.reserve(total);
    for (const auto& x : positives) samples.emplace_back(&x, 1.0);
    for (const auto& x : negatives) samples.emplace_back(&x, -1.0);

    for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
        std::shuffle(samples.begin(), samples.end(), rng);
        const double step = 1.0 / (1.0 + 0.1 * epoch);
        for (const auto& [x, y] : samples) {
            const double margin = y * score(model, *x);
            // Per-sample subgradient of 0.5|w|^2/N + C*hinge.
            const double decay = step / static_cast<double>(total);
            for (int i = 0; i < dim; ++i) model.weights[i] *= (1.0 - decay);
            if (margin < 1.0) {
                const double g = step * opt.c * y;
                const auto& v = *x;
                for (int i = 0; i < dim; ++i) model.weights[i] += g * v[i];
                model.bias += g;
            }
        }
    }
    return model;
}

}  // namespace

LinearModel train(Stage stage, const std::vector<std::vector<double>>& positives,
                  const std::vector<std::vector<double>>& negatives, const TrainOptions& options) {
    if (positives.empty() || negatives.empty())
        throw std::invalid_argument("training requires both positive and negative examples");
    if (options.c <= 0) throw std::invalid_argument("C must be positive");
    const std::size_t dim = positives.front().size();
    for (const auto& x : positives)
        if (x.size() != dim) throw std::invalid_argument("inconsistent descriptor dimensions");
    for (const auto& x : negatives)
        if (x.size() != dim) throw std::invalid_argument("inconsistent descriptor dimensions");

    LinearModel best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.restarts; ++r) {
        LinearModel candidate =
            train_once(stage, positives, negatives, options, options.seed + 7919 * r);
        const double obj = hinge_objective(candidate, positives, negatives);
        if (obj < best_obj) {
            best_obj = obj;
            best = std::move(candidate);
        }
    }
    if (options.positive_target > 0.0) {
        std::vector<double> scores;
        scores.reserve(positives.size());
        for (const auto& x : positives) scores.push_back(score(best, x));
        std::sort(scores.begin(), scores.end());
        const double anchor = scores[scores.size() / 10];
        if (anchor > 1e-9) {
            const double scale = options.positive_target / anchor;
            for (auto& w : best.weights) w *= scale;
            best.bias *= scale;
        }
    }
    return best;
}

void save_model(const LinearModel& model, const std::string& path) {
    nlohmann::json j{{"stage", stage_name(model.stage)},
                     {"dim", model.dim},
                     {"bias", model.bias},
                     {"weights", model.weights},
                     {"c", model.c}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << "\n";
}

LinearModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("model parse error in " + path + ": " + e.what());
    }
    LinearModel model;
    model.stage = parse_stage(j.at("stage").get<std::string>());
    model.dim = j.at("dim").get<int>();
    model.bias = j.at("bias").get<double>();
    model.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("c")) model.c = j.at("c").get<double>();
    if (static_cast<int>(model.weights.size()) != model.dim)
        throw std::runtime_error("model weight count does not match declared dim in " + path);
    if (model.dim != stage_dim(model.stage))
        throw std::runtime_error("model dim does not match its stage in " + path);
    return model;
}

}  // namespace glodet::model
