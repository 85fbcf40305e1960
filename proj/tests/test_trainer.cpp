// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fourierqml/analysis.hpp"
#include "fourierqml/errors.hpp"
#include "fourierqml/qfflm.hpp"
#include "fourierqml/trainer.hpp"
#include "support/oracles.hpp"

using namespace fourierqml;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path write_temp(const std::string &name, const std::string &text) {
    const auto dir = std::filesystem::temp_directory_path() / "fourierqml_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path;
}

double brute_max(const RandomFourierTarget &t, int points) {
    double best = 0.0;
    for (int j = 0; j < points; ++j) {
        best = std::max(best, std::abs(t(-kPi + 2.0 * kPi * j / points)));
    }
    return best;
}

} // namespace

TEST_CASE("Step dataset", "[trainer][data]") {
    CHECK(step_function(kPi / 2) == 0.5);
    CHECK(step_function(-kPi / 2) == -0.5);
    CHECK(step_function(0.0) == 0.5);
    CHECK(step_function(kPi) == 0.5);

    const auto d = make_step_dataset(8);
    REQUIRE(d.size() == 8);
    CHECK(d.inputs[0][0] == -kPi);
    CHECK_THAT(d.inputs[4][0], WithinAbs(0.0, 1e-15));
    CHECK(d.outputs[0] == -0.5);
    CHECK(d.outputs[4] == 0.5);
    CHECK(d.inputs.back()[0] < kPi);
    CHECK_THROWS_AS(make_step_dataset(1), ArgumentError);
}

TEST_CASE("Random Fourier targets", "[trainer][data]") {
    for (const double r : {0.05, 1.6, 55.5}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto t = make_random_fourier_target(81, 64, r, seed);
            REQUIRE(t.coefficients.size() == 81);
            CHECK_THAT(t.realized_ratio(), WithinRel(r, 1e-9));
            // Same 4096-point grid as the construction.
            CHECK_THAT(brute_max(t, 4096), WithinAbs(0.95, 1e-6));
            // A denser probe still stays inside [-1, 1].
            CHECK(brute_max(t, 50'000) <= 1.0);
        }
    }
    const auto limit = make_random_fourier_target(81, 64, 1e9, 3);
    double low = 0.0;
    double high = 0.0;
    for (std::size_t i = 0; i < 81; ++i) {
        (i < 64 ? low : high) += limit.coefficients[i] * limit.coefficients[i];
    }
    CHECK(high < 1e-17 * (low + high));

    const auto a = make_random_fourier_target(81, 64, 1.6, 11);
    const auto b = make_random_fourier_target(81, 64, 1.6, 11);
    CHECK(a.coefficients == b.coefficients);

    CHECK_THROWS_AS(make_random_fourier_target(81, 64, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(make_random_fourier_target(80, 64, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(make_random_fourier_target(81, 81, 1.0, 1), ArgumentError);

    // The 200-point grid resolves every frequency of a degree-40 series.
    const auto data = dataset_from_target(a, 200);
    CHECK(data.size() >= 2 * 40 + 1);
    CHECK(data.outputs[17] == a(data.inputs[17][0]));
}

TEST_CASE("Mean squared error", "[trainer]") {
    const std::vector<double> t{0.1, -0.4, 0.9};
    CHECK(mse_loss(t, t) == 0.0);
    const std::vector<double> shifted{1.1, 0.6, 1.9};
    CHECK_THAT(mse_loss(shifted, t), WithinAbs(1.0, 1e-15));
    const std::vector<double> p{0.0, 1.0};
    const std::vector<double> y{1.0, 1.0};
    CHECK(mse_loss(p, y) == 0.5);
    CHECK_THROWS_AS(mse_loss(std::vector<double>{}, std::vector<double>{}), ArgumentError);
    CHECK_THROWS_AS(mse_loss(p, t), ArgumentError);
}

TEST_CASE("Optimizer steps", "[trainer][optimizer]") {
    SECTION("zero gradient leaves Adam parameters unchanged") {
        Optimizer opt({}, 3);
        std::vector<double> params{0.1, 0.2, 0.3};
        const std::vector<double> grads(3, 0.0);
        opt.step(params, grads);
        CHECK(params == std::vector<double>{0.1, 0.2, 0.3});
    }
    SECTION("first Adam step has magnitude lr") {
        OptimizerConfig cfg;
        cfg.lr = 0.05;
        Optimizer opt(cfg, 3);
        std::vector<double> params(3, 1.0);
        const std::vector<double> grads{2.0, -0.5, 1e-3};
        opt.step(params, grads);
        for (std::size_t i = 0; i < 3; ++i) {
            const double g = grads[i];
            const double expected = 1.0 - cfg.lr * g / (std::abs(g) + cfg.eps);
            CHECK_THAT(params[i], WithinAbs(expected, 1e-15));
        }
        CHECK(opt.steps_taken() == 1);
    }
    SECTION("second Adam step follows the moment recursions") {
        OptimizerConfig cfg;
        Optimizer opt(cfg, 1);
        std::vector<double> params{0.0};
        const std::vector<double> g1{1.0};
        const std::vector<double> g2{-3.0};
        opt.step(params, g1);
        opt.step(params, g2);
        const double m = (0.9 * 0.1 * 1.0 + 0.1 * -3.0) / (1 - 0.81);
        const double v = (0.999 * 0.001 * 1.0 + 0.001 * 9.0) / (1 - 0.999 * 0.999);
        const double first = -cfg.lr / (1.0 + cfg.eps);
        const double expected = first - cfg.lr * m / (std::sqrt(v) + cfg.eps);
        CHECK_THAT(params[0], WithinAbs(expected, 1e-14));
    }
    SECTION("gradient descent") {
        OptimizerConfig cfg;
        cfg.kind = OptimizerKind::GradientDescent;
        cfg.lr = 0.5;
        Optimizer opt(cfg, 2);
        std::vector<double> params{1.0, 1.0};
        const std::vector<double> grads{0.2, -0.4};
        opt.step(params, grads);
        CHECK(params == std::vector<double>{0.9, 1.2});
    }
    SECTION("non-finite gradients are reported") {
        Optimizer opt({}, 2);
        std::vector<double> params{0.0, 0.0};
        const std::vector<double> grads{0.0, std::nan("")};
        CHECK_THROWS_AS(opt.step(params, grads), TrainingError);
        CHECK_THROWS_WITH(opt.step(params, grads), Catch::Matchers::ContainsSubstring("step 1"));
    }
    SECTION("invalid settings") {
        OptimizerConfig cfg;
        cfg.lr = 0.0;
        CHECK_THROWS_AS(Optimizer(cfg, 1), ArgumentError);
        Optimizer opt({}, 2);
        std::vector<double> params{0.0};
        const std::vector<double> grads{0.0};
        CHECK_THROWS_AS(opt.step(params, grads), ArgumentError);
    }
}

TEST_CASE("Loss gradients match finite differences", "[trainer][property]") {
    Rng rng(15);
    SECTION("quantum") {
        const auto spec = make_parallel_exponential(2, 2, 1);
        Dataset data;
        for (int j = 0; j < 12; ++j) {
            data.inputs.push_back({rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)});
            data.outputs.push_back(rng.uniform(-1.0, 1.0));
        }
        const auto theta = random_parameters(spec, rng);
        std::vector<double> grad;
        const double loss = quantum_loss_and_gradient(spec, theta, data, &grad);
        const auto loss_of = [&](const std::vector<double> &th) {
            std::vector<double> preds;
            for (const auto &x : data.inputs) {
                preds.push_back(oracle::evaluate(spec, th, x));
            }
            return mse_loss(preds, data.outputs);
        };
        CHECK_THAT(loss, WithinAbs(loss_of(theta), 1e-12));
        for (std::size_t k = 0; k < theta.size(); ++k) {
            REQUIRE_THAT(grad[k], WithinAbs(oracle::central_difference(loss_of, theta, k, 1e-5), 1e-5));
        }
    }
    SECTION("classical") {
        const FeatureMap fm{1, 5, std::nullopt};
        const auto model = ClassicalModel::full(fm, std::vector<double>(11, 0.0));
        const auto data = make_step_dataset(30);
        std::vector<double> params(11);
        for (auto &p : params) {
            p = rng.uniform(-0.3, 0.3);
        }
        std::vector<double> grad;
        classical_loss_and_gradient(model, params, data, &grad);
        const auto loss_of = [&](const std::vector<double> &c) {
            const auto m = ClassicalModel::full(fm, c);
            std::vector<double> preds;
            for (const auto &x : data.inputs) {
                preds.push_back(evaluate_classical(m, x));
            }
            return mse_loss(preds, data.outputs);
        };
        for (std::size_t k = 0; k < params.size(); ++k) {
            REQUIRE_THAT(grad[k], WithinAbs(oracle::central_difference(loss_of, params, k, 1e-5), 1e-5));
        }
    }
}

TEST_CASE("Classical training reaches a target inside its span", "[trainer][slow]") {
    Rng rng(101);
    const FeatureMap fm{1, 4, std::nullopt};
    std::vector<double> c(fm.dimension());
    for (auto &v : c) {
        v = rng.uniform(-0.2, 0.2);
    }
    const auto data = dataset_from_coefficients(fm, c, 40);

    // Normal equations have an exact solution, so the attainable loss is 0.
    const Eigen::MatrixXd phi = feature_matrix(data.inputs, fm);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.outputs.data(), 40);
    const Eigen::VectorXd ls = (phi.transpose() * phi).ldlt().solve(phi.transpose() * y);
    CHECK((phi * ls - y).norm() < 1e-10);

    TrainConfig cfg;
    cfg.optimizer.lr = 0.03;
    cfg.steps = 500;
    cfg.seed = 4;
    const auto result = train(ClassicalModel::full(fm, std::vector<double>(fm.dimension(), 0.0)),
                              data, cfg);
    CHECK(result.status == TrainStatus::Completed);
    CHECK(result.loss_trace.size() == 500);
    CHECK(result.final_loss < 1e-3);
    CHECK(result.resource_counters.at("N_tp") == 9);
}

TEST_CASE("Quantum training decreases loss on a zero target", "[trainer][slow]") {
    const auto spec = make_parallel_exponential(1, 2, 1);
    Dataset data;
    for (const double x : equispaced_grid(20)) {
        data.inputs.push_back({x});
        data.outputs.push_back(0.0);
    }
    int monotone = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        TrainConfig cfg;
        cfg.steps = 11;
        cfg.seed = seed;
        const auto r = train(spec, data, cfg);
        bool ok = true;
        for (std::size_t i = 1; i < r.loss_trace.size(); ++i) {
            ok = ok && r.loss_trace[i] < r.loss_trace[i - 1];
        }
        monotone += ok ? 1 : 0;
    }
    CHECK(monotone >= 9);
}

TEST_CASE("Training is deterministic", "[trainer]") {
    const auto spec = make_parallel_exponential(1, 2, 1);
    const auto data = make_step_dataset(16);
    const auto test = make_step_dataset(11);
    TrainConfig cfg;
    cfg.steps = 15;
    cfg.seed = 99;
    cfg.batch = 6;
    cfg.shots = 64;
    const auto a = train(spec, data, cfg, &test);
    const auto b = train(spec, data, cfg, &test);
    CHECK(a.loss_trace == b.loss_trace);
    CHECK(a.test_loss_trace == b.test_loss_trace);
    CHECK(a.final_params == b.final_params);
    CHECK(trace_csv(a) == trace_csv(b));
    cfg.seed = 100;
    CHECK(train(spec, data, cfg, &test).loss_trace != a.loss_trace);
}

TEST_CASE("Result records", "[trainer]") {
    const auto spec = make_parallel_exponential(1, 2, 1);
    TrainConfig cfg;
    cfg.steps = 20;
    cfg.recover_coefficients = true;
    const auto data = make_step_dataset(9);
    const auto r = train(spec, data, cfg);
    REQUIRE(r.coefficients.has_value());
    CHECK(r.coefficients->size() == 9);
    CHECK(r.resource_counters.at("N_tp") == 8);
    CHECK(r.resource_counters.at("N_gt") == count_gates(spec));
    CHECK(r.resource_counters.at("circuit_executions") == 20u * 9u * (1u + 2u * 8u));

    const double tail = (r.loss_trace[18] + r.loss_trace[19]) / 2.0;
    CHECK_THAT(r.saturated_loss(), WithinAbs(tail, 1e-15));

    const auto csv = trace_csv(r);
    CHECK(csv.rfind("step,train_loss,test_loss\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);

    const auto doc = to_json(r);
    for (const char *key : {"config", "seed", "loss_trace", "test_loss_trace", "final_params",
                            "resource_counters", "status"}) {
        CHECK(doc.contains(key));
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("Undersampled data is refused when coefficients are requested", "[trainer]") {
    const auto spec = make_parallel_exponential(1, 4, 1);
    const auto data = make_step_dataset(50);
    TrainConfig cfg;
    cfg.steps = 1;
    cfg.recover_coefficients = true;
    CHECK_THROWS_AS(train(spec, data, cfg), ArgumentError);
    cfg.allow_undersampled = true;
    CHECK_NOTHROW(train(spec, data, cfg));
    cfg.allow_undersampled = false;
    CHECK_NOTHROW(train(spec, make_step_dataset(81), cfg));
}

TEST_CASE("Divergence stops training with a partial trace", "[trainer]") {
    const FeatureMap fm{1, 3, std::nullopt};
    const auto data = make_step_dataset(20);
    TrainConfig cfg;
    cfg.optimizer.kind = OptimizerKind::GradientDescent;
    cfg.optimizer.lr = 50.0;
    cfg.steps = 100;
    const auto r = train(ClassicalModel::full(fm, std::vector<double>(7, 0.0)), data, cfg);
    CHECK(r.status == TrainStatus::Diverged);
    CHECK(r.loss_trace.size() < 100);
    CHECK(r.loss_trace.back() > 1e6);
}

TEST_CASE("Coulomb features", "[trainer][data]") {
    std::vector<std::array<double, 3>> pos;
    std::vector<int> charges;
    for (int i = 0; i < 9; ++i) {
        pos.push_back({1000.0 * i, 0.0, 0.0});
        charges.push_back(1);
    }
    pos[1] = {0.0, 1.0, 0.0};
    const auto f = coulomb_features(pos, charges);
    REQUIRE(f.size() == 36);
    CHECK_THAT(f[0], WithinAbs(1.0, 1e-15));
    CHECK(f[1] < 1e-3);

    std::vector<int> doubled(9, 2);
    const auto g = coulomb_features(pos, doubled);
    for (std::size_t i = 0; i < 36; ++i) {
        CHECK_THAT(g[i], WithinRel(4.0 * f[i], 1e-15));
    }
    pos[5] = pos[3];
    CHECK_THROWS_AS(coulomb_features(pos, charges), DomainError);
}

TEST_CASE("Affine ranges", "[trainer][data]") {
    const std::vector<double> v{3.0, -1.0, 7.0, 2.5};
    bool degenerate = true;
    const auto a = fit_range(v, -kPi, kPi, &degenerate);
    CHECK_FALSE(degenerate);
    CHECK_THAT(a.apply(-1.0), WithinAbs(-kPi, 1e-15));
    CHECK_THAT(a.apply(7.0), WithinAbs(kPi, 1e-15));
    for (const double x : v) {
        CHECK_THAT(a.invert(a.apply(x)), WithinAbs(x, 1e-12));
    }
    const std::vector<double> flat{4.0, 4.0};
    const auto b = fit_range(flat, 0.03, 1.0, &degenerate);
    CHECK(degenerate);
    CHECK_THAT(b.apply(4.0), WithinAbs(0.515, 1e-15));
}

TEST_CASE("CSV datasets", "[trainer][csv]") {
    const auto path = write_temp("ok.csv", "a,b,const,y\n"
                                           "1,10,5,0\n"
                                           "2,30,5,2\n"
                                           "3,20,5,4\n");
    const auto loaded = load_csv_dataset(path, {"a", "b", "const"}, "y");
    REQUIRE(loaded.data.size() == 3);
    CHECK(loaded.data.num_vars() == 3);
    CHECK_THAT(loaded.data.inputs[0][0], WithinAbs(-kPi, 1e-15));
    CHECK_THAT(loaded.data.inputs[2][0], WithinAbs(kPi, 1e-15));
    CHECK_THAT(loaded.data.inputs[1][1], WithinAbs(kPi, 1e-15));
    CHECK_THAT(loaded.data.inputs[0][2], WithinAbs(0.0, 1e-15));
    CHECK_THAT(loaded.data.outputs[0], WithinAbs(0.03, 1e-15));
    CHECK_THAT(loaded.data.outputs[2], WithinAbs(1.0, 1e-15));
    CHECK(loaded.warnings.size() == 1);
    CHECK_THAT(loaded.output_map.invert(loaded.data.outputs[1]), WithinAbs(2.0, 1e-12));
    CHECK_THAT(loaded.input_maps[1].invert(loaded.data.inputs[2][1]), WithinAbs(20.0, 1e-12));

    const auto bad = write_temp("bad.csv", "a,y\n1,2\n3,oops\n");
    CHECK_THROWS_AS(load_csv_dataset(bad, {"a"}, "y"), ParseError);
    CHECK_THROWS_WITH(load_csv_dataset(bad, {"a"}, "y"), Catch::Matchers::ContainsSubstring("line 3"));
    const auto ragged = write_temp("ragged.csv", "a,y\n1,2,3\n");
    CHECK_THROWS_WITH(load_csv_dataset(ragged, {"a"}, "y"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(load_csv_dataset(path, {"zzz"}, "y"), ParseError);
    CHECK_THROWS_AS(load_csv_dataset(path.parent_path() / "missing.csv", {"a"}, "y"), ParseError);
}

TEST_CASE("Comparison runs are seeded per stream", "[trainer][slow]") {
    ComparisonConfig cfg;
    cfg.ratios = {1.6};
    cfg.runs = 2;
    cfg.n_points = 90;
    cfg.train.steps = 3;
    cfg.seed = 5;
    const auto a = run_comparison(cfg);
    REQUIRE(a.size() == 2);
    CHECK(a[0].target_seed != a[1].target_seed);
    CHECK(a[0].classical.final_params.size() == 64);
    CHECK(a[0].quantum.final_params.size() == 16);
    const auto b = run_comparison(cfg);
    CHECK(a[1].quantum.loss_trace == b[1].quantum.loss_trace);
    CHECK(a[1].classical.loss_trace == b[1].classical.loss_trace);
}
