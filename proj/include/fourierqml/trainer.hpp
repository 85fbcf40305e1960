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

/**
 * @file
 * Datasets, targets, loss, optimizers and training loops for both model
 * families.
 *
 * The loss is the mean squared error (1/n) sum_j (f(x_j) - y_j)^2. The
 * recorded loss at step t is evaluated at the parameters used for that
 * step's gradient, so a trace of `steps` entries ends one update before
 * final_params; final_loss is evaluated at final_params.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fourierqml/ansatz.hpp"
#include "fourierqml/cfflm.hpp"
#include "fourierqml/rng.hpp"

namespace fourierqml {

struct Dataset {
    std::vector<std::vector<double>> inputs;
    std::vector<double> outputs;
    nlohmann::json metadata = nlohmann::json::object();

    [[nodiscard]] std::size_t size() const { return outputs.size(); }
    [[nodiscard]] int num_vars() const;
    /// Equal lengths, consistent input width, finite values.
    void validate() const;
};

/// x_j = -pi + 2 pi j / n for j = 0..n-1.
std::vector<double> equispaced_grid(int n_points);

/// 1/2 on [0, pi], -1/2 on (-pi, 0).
double step_function(double x);

Dataset make_step_dataset(int n_points);

/// Fourier target in the (1, sqrt2 cos 1x, sqrt2 sin 1x, ...) basis with
/// kappa coefficients; the low block holds indices < split.
struct RandomFourierTarget {
    int kappa = 0;
    int split = 0;
    double ratio = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> coefficients;

    [[nodiscard]] FeatureMap feature_map() const;
    [[nodiscard]] double operator()(double x) const;
    /// sqrt(sum_{n < split} c_n^2) / sqrt(sum_{n >= split} c_n^2).
    [[nodiscard]] double realized_ratio() const;
};

/// Gaussian coefficients rescaled blockwise to the exact ratio r, then
/// globally so that max |f| over a 4096-point grid is 0.95.
RandomFourierTarget make_random_fourier_target(int kappa, int split, double r,
                                               std::uint64_t seed);

/// Samples f(x) = c . phi(x) on the n-point equispaced grid (tensor grid
/// with n points per variable when M > 1).
Dataset dataset_from_coefficients(const FeatureMap &fm, std::span<const double> c,
                                  int points_per_var);

Dataset dataset_from_target(const RandomFourierTarget &target, int n_points);

double mse_loss(std::span<const double> preds, std::span<const double> targets);

enum class OptimizerKind { Adam, GradientDescent };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 0.03;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

/// Bias-corrected Adam, or plain gradient descent.
class Optimizer {
  public:
    Optimizer(OptimizerConfig cfg, std::size_t n_params);

    /// Throws TrainingError naming the first non-finite gradient entry.
    void step(std::span<double> params, std::span<const double> grads);

    [[nodiscard]] std::uint64_t steps_taken() const { return t_; }
    [[nodiscard]] const OptimizerConfig &config() const { return cfg_; }

  private:
    OptimizerConfig cfg_;
    std::uint64_t t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

struct TrainConfig {
    OptimizerConfig optimizer;
    int steps = 500;
    /// Full batch when empty.
    std::optional<std::size_t> batch;
    /// Exact expectations when empty.
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    /// Training stops with status "diverged" once the loss exceeds this.
    double divergence_threshold = 1e6;
    /// Extract the trained model's Fourier coefficients after training.
    bool recover_coefficients = false;
    /// Skip the check that the data resolve every frequency of the model.
    bool allow_undersampled = false;

    void validate() const;
};

enum class TrainStatus { Completed, Diverged };

struct ResultRecord {
    std::string model;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    TrainStatus status = TrainStatus::Completed;
    std::vector<double> loss_trace;
    std::vector<double> test_loss_trace;
    double final_loss = 0.0;
    std::vector<double> final_params;
    /// Real Fourier coefficients of the trained model when requested.
    std::optional<std::vector<double>> coefficients;
    nlohmann::json resource_counters = nlohmann::json::object();
    double wall_ms = 0.0;

    /// Mean of the last 10% of the loss trace (at least one entry).
    [[nodiscard]] double saturated_loss() const;
};

nlohmann::json to_json(const ResultRecord &record);

/// CSV with header step,train_loss,test_loss; floats at 17 significant digits.
std::string trace_csv(const ResultRecord &record);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// QFFLM training from U[-pi, pi) parameters unless `initial` is given.
ResultRecord train(const AnsatzSpec &spec, const Dataset &data, const TrainConfig &cfg,
                   const Dataset *test = nullptr,
                   std::optional<std::vector<double>> initial = std::nullopt);

/// CFFLM training; parameters start at U[-1/sqrt(D), 1/sqrt(D)) for D
/// parameters unless `initial` is given.
ResultRecord train(const ClassicalModel &model, const Dataset &data, const TrainConfig &cfg,
                   const Dataset *test = nullptr,
                   std::optional<std::vector<double>> initial = std::nullopt);

/// Data loss and its exact gradient for a QFFLM on the given rows.
double quantum_loss_and_gradient(const AnsatzSpec &spec, std::span<const double> theta,
                                 const Dataset &data, std::vector<double> *grad);

/// Data loss and its exact gradient for a CFFLM with parameters `params`.
double classical_loss_and_gradient(const ClassicalModel &model, std::span<const double> params,
                                   const Dataset &data, std::vector<double> *grad);

/// Pairwise Coulomb terms Z_i Z_j / |r_i - r_j| for i < j in lexicographic
/// order; 9 atoms give 36 features. Throws DomainError for coincident atoms.
std::vector<double> coulomb_features(std::span<const std::array<double, 3>> positions,
                                     std::span<const int> charges);

/// y = scale * x + offset.
struct Affine {
    double scale = 1.0;
    double offset = 0.0;

    [[nodiscard]] double apply(double x) const { return scale * x + offset; }
    [[nodiscard]] double invert(double y) const { return (y - offset) / scale; }
};

/// Maps [min, max] of `values` onto [lo, hi]. A constant column maps to the
/// midpoint and sets `degenerate`.
Affine fit_range(std::span<const double> values, double lo, double hi, bool *degenerate);

struct CsvNormalization {
    double input_lo = -3.141592653589793;
    double input_hi = 3.141592653589793;
    double output_lo = 0.03;
    double output_hi = 1.0;
};

struct CsvDataset {
    Dataset data;
    std::vector<Affine> input_maps;
    Affine output_map;
    std::vector<std::string> warnings;
};

/// Reads a header + comma-separated numeric CSV and normalizes each chosen
/// column. Throws ParseError with the 1-based line number on malformed rows.
CsvDataset load_csv_dataset(const std::filesystem::path &path,
                            const std::vector<std::string> &input_cols,
                            const std::string &output_col,
                            const CsvNormalization &norm = {});

/// Paired classical/quantum runs on random Fourier targets.
struct ComparisonConfig {
    int kappa = 81;
    int split = 64;
    std::vector<double> ratios{0.05, 1.6, 55.5};
    int runs = 5;
    int n_points = 200;
    /// Leading features of the classical model.
    std::size_t classical_dim = 64;
    AnsatzSpec ansatz = make_parallel_exponential(1, 4, 1);
    TrainConfig train;
    std::uint64_t seed = 0;
};

struct ComparisonRun {
    double ratio = 0.0;
    int run = 0;
    std::uint64_t target_seed = 0;
    ResultRecord classical;
    ResultRecord quantum;
};

std::vector<ComparisonRun> run_comparison(const ComparisonConfig &cfg);

} // namespace fourierqml
