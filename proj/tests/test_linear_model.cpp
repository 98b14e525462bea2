#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "glodet/linear_model.hpp"

using namespace glodet;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

model::LinearModel make_model(model::Stage stage, std::vector<double> w, double bias) {
    model::LinearModel m;
    m.stage = stage;
    m.dim = static_cast<int>(w.size());
    m.weights = std::move(w);
    m.bias = bias;
    return m;
}

}  // namespace

TEST_CASE("stage names and dimensions") {
    CHECK(model::stage_dim(model::Stage::PreScreen) == 512);
    CHECK(model::stage_dim(model::Stage::Boundary) == 27);
    CHECK(model::stage_dim(model::Stage::Classify) == 216);
    for (auto s : {model::Stage::PreScreen, model::Stage::Boundary, model::Stage::Classify})
        CHECK(model::parse_stage(model::stage_name(s)) == s);
    CHECK_THROWS_AS(model::parse_stage("bogus"), std::invalid_argument);
}

TEST_CASE("score equals the dot product plus bias") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w(27), x(27);
        for (auto& v : w) v = u(rng);
        for (auto& v : x) v = u(rng);
        const double bias = u(rng);
        const auto m = make_model(model::Stage::Boundary, w, bias);
        double expected = bias;
        for (int i = 0; i < 27; ++i) expected += w[i] * x[i];
        CHECK(model::score(m, x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("score is linear in the input") {
    const auto m = make_model(model::Stage::Boundary, std::vector<double>(27, 0.5), 1.0);
    std::vector<double> x(27, 2.0), y(27, -1.0), sum(27);
    for (int i = 0; i < 27; ++i) sum[i] = x[i] + y[i];
    // score(x + y) - bias == (score(x) - bias) + (score(y) - bias)
    CHECK(model::score(m, sum) - m.bias ==
          doctest::Approx((model::score(m, x) - m.bias) + (model::score(m, y) - m.bias)));
}

TEST_CASE("score validates the descriptor length") {
    const auto m = make_model(model::Stage::Boundary, std::vector<double>(27, 0.1), 0.0);
    CHECK_THROWS_AS(model::score(m, std::vector<double>(26, 0.0)), std::invalid_argument);
}

TEST_CASE("training separates a linearly separable pair") {
    // Two clusters along the first coordinate.
    std::vector<std::vector<double>> pos, neg;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> p(27, 0.0), n(27, 0.0);
        p[0] = 1.0 + u(rng);
        p[3] = u(rng);
        n[0] = -1.0 + u(rng);
        n[3] = u(rng);
        pos.push_back(p);
        neg.push_back(n);
    }
    const auto m = model::train(model::Stage::Boundary, pos, neg);
    CHECK(m.dim == 27);
    for (const auto& p : pos) CHECK(model::score(m, p) > 0.0);
    for (const auto& n : neg) CHECK(model::score(m, n) < 0.0);
}

TEST_CASE("training is deterministic") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> pos, neg;
    for (int i = 0; i < 15; ++i) {
        std::vector<double> p(27), n(27);
        for (auto& v : p) v = u(rng) + 0.4;
        for (auto& v : n) v = u(rng) - 0.4;
        pos.push_back(p);
        neg.push_back(n);
    }
    const auto a = model::train(model::Stage::Boundary, pos, neg);
    const auto b = model::train(model::Stage::Boundary, pos, neg);
    CHECK(a.bias == b.bias);
    REQUIRE(a.weights.size() == b.weights.size());
    for (std::size_t i = 0; i < a.weights.size(); ++i) CHECK(a.weights[i] == b.weights[i]);
}

TEST_CASE("training rejects an empty class") {
    std::vector<std::vector<double>> pos{std::vector<double>(27, 1.0)}, empty;
    CHECK_THROWS_AS(model::train(model::Stage::Boundary, pos, empty), std::invalid_argument);
    CHECK_THROWS_AS(model::train(model::Stage::Boundary, empty, pos), std::invalid_argument);
}

TEST_CASE("trained objective is near a 2-D grid-search optimum") {
    // One informative coordinate keeps the exact problem 2-dimensional
    // (weight on that coordinate + bias), so a dense grid search provides an
    // independent lower bound on solution quality.
    std::vector<std::vector<double>> pos, neg;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 25; ++i) {
        std::vector<double> p(27, 0.0), n(27, 0.0);
        p[5] = 0.8 + u(rng);
        n[5] = -0.6 + u(rng);
        pos.push_back(p);
        neg.push_back(n);
    }
    model::TrainOptions options;
    options.c = 10.0;
    const auto trained = model::train(model::Stage::Boundary, pos, neg, options);
    const double trained_objective = model::hinge_objective(trained, pos, neg);

    double best_grid = 1e300;
    for (double w = -10.0; w <= 10.0; w += 0.02) {
        for (double b = -10.0; b <= 10.0; b += 0.02) {
            auto m = make_model(model::Stage::Boundary, std::vector<double>(27, 0.0), b);
            m.weights[5] = w;
            m.c = options.c;
            best_grid = std::min(best_grid, model::hinge_objective(m, pos, neg));
        }
    }
    // The subgradient solution may use other coordinates, but it must not be
    // much worse than the best axis-aligned model.
    CHECK(trained_objective <= best_grid * 1.1 + 1e-6);
}

TEST_CASE("model JSON round trip") {
    auto m = make_model(model::Stage::Classify, std::vector<double>(216), -0.75);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (auto& w : m.weights) w = u(rng);
    m.c = 5.0;
    const std::string path = temp_path("glodet_model_roundtrip.json");
    model::save_model(m, path);
    const auto loaded = model::load_model(path);
    CHECK(loaded.stage == m.stage);
    CHECK(loaded.dim == m.dim);
    CHECK(loaded.bias == m.bias);
    CHECK(loaded.c == m.c);
    REQUIRE(loaded.weights.size() == m.weights.size());
    for (std::size_t i = 0; i < m.weights.size(); ++i) CHECK(loaded.weights[i] == m.weights[i]);
    fs::remove(path);
}

TEST_CASE("saving the same model twice is byte-stable") {
    auto m = make_model(model::Stage::Boundary, std::vector<double>(27, 0.25), 0.1);
    const std::string p1 = temp_path("glodet_model_a.json");
    const std::string p2 = temp_path("glodet_model_b.json");
    model::save_model(m, p1);
    model::save_model(m, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("loading rejects a dim/weights mismatch") {
    const std::string path = temp_path("glodet_model_bad.json");
    {
        std::ofstream out(path);
        out << R"({"stage":"boundary","dim":27,"bias":0.0,"weights":[1.0,2.0],"c":10.0})";
    }
    CHECK_THROWS(model::load_model(path));
    fs::remove(path);
}

TEST_CASE("loading rejects a stage/dim mismatch") {
    const std::string path = temp_path("glodet_model_bad2.json");
    {
        std::ofstream out(path);
        out << R"({"stage":"prescreen","dim":2,"bias":0.0,"weights":[1.0,2.0],"c":10.0})";
    }
    CHECK_THROWS(model::load_model(path));
    fs::remove(path);
}
