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

#include "fourierqml/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "fourierqml/analysis.hpp"
#include "fourierqml/errors.hpp"
#include "fourierqml/parallel.hpp"
#include "fourierqml/qfflm.hpp"

namespace fourierqml {

using nlohmann::json;

namespace {

constexpr std::size_t kTargetGrid = 4096;
constexpr double kTargetPeak = 0.95;

const char *status_name(TrainStatus s) {
    return s == TrainStatus::Completed ? "completed" : "diverged";
}

json optimizer_json(const OptimizerConfig &o) {
    return {{"kind", o.kind == OptimizerKind::Adam ? "adam" : "gd"},
            {"lr", o.lr},
            {"beta1", o.beta1},
            {"beta2", o.beta2},
            {"eps", o.eps}};
}

json train_config_json(const TrainConfig &cfg) {
    json doc{{"optimizer", optimizer_json(cfg.optimizer)},
             {"steps", cfg.steps},
             {"seed", cfg.seed},
             {"divergence_threshold", cfg.divergence_threshold}};
    doc["batch"] = cfg.batch ? json(*cfg.batch) : json("full");
    doc["shots"] = cfg.shots ? json(*cfg.shots) : json("exact");
    return doc;
}

std::size_t distinct_values(const Dataset &data, std::size_t var) {
    std::set<double> seen;
    for (const auto &x : data.inputs) {
        seen.insert(x[var]);
    }
    return seen.size();
}

void check_sampling(const Dataset &data, const std::vector<std::int64_t> &degrees,
                    const TrainConfig &cfg) {
    if (!cfg.recover_coefficients || cfg.allow_undersampled) {
        return;
    }
    for (std::size_t m = 0; m < degrees.size(); ++m) {
        const auto needed = static_cast<std::size_t>(2 * degrees[m] + 1);
        const std::size_t have = distinct_values(data, m);
        if (have < needed) {
            throw ArgumentError("variable " + std::to_string(m + 1) + " has " +
                                std::to_string(have) + " distinct points but degree " +
                                std::to_string(degrees[m]) + " needs at least " +
                                std::to_string(needed) +
                                "; set allow_undersampled to override");
        }
    }
}

// Row indices for one step: all rows, or a seeded random subset.
std::vector<std::size_t> batch_rows(std::size_t n, const TrainConfig &cfg, Rng &rng) {
    std::vector<std::size_t> rows(n);
    for (std::size_t j = 0; j < n; ++j) {
        rows[j] = j;
    }
    if (cfg.batch && *cfg.batch < n) {
        // Partial Fisher-Yates.
        for (std::size_t j = 0; j < *cfg.batch; ++j) {
            const std::size_t k = j + static_cast<std::size_t>(rng.below(n - j));
            std::swap(rows[j], rows[k]);
        }
        rows.resize(*cfg.batch);
    }
    return rows;
}

// Sums per-row gradient contributions in row order.
void accumulate(const std::vector<std::vector<double>> &per_row, double scale,
                std::vector<double> &grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> column(per_row.size());
    for (std::size_t k = 0; k < grad.size(); ++k) {
        for (std::size_t j = 0; j < per_row.size(); ++j) {
            column[j] = per_row[j][k];
        }
        grad[k] = scale * pairwise_sum(column);
    }
}

double quantum_loss_impl(const Circuit &circuit, std::span<const double> theta,
                         const Dataset &data, const std::vector<std::size_t> &rows,
                         std::vector<double> *grad, std::optional<std::uint64_t> shots,
                         std::uint64_t shot_stream) {
    const std::size_t n = rows.size();
    std::vector<double> residual_sq(n);
    std::vector<std::vector<double>> per_row(grad ? n : 0);
    parallel_for(n, [&](std::size_t j) {
        const std::size_t row = rows[j];
        const auto &x = data.inputs[row];
        double f = 0.0;
        if (grad) {
            Rng rng = Rng::derive(shot_stream, row);
            per_row[j] = circuit.gradient(theta, x, &f, shots, shots ? &rng : nullptr);
            const double r = f - data.outputs[row];
            for (auto &g : per_row[j]) {
                g *= r;
            }
        } else if (shots) {
            Rng rng = Rng::derive(shot_stream, row);
            f = circuit.evaluate_sampled(theta, x, *shots, rng);
        } else {
            StateVector scratch(circuit.num_qubits());
            f = circuit.evaluate(theta, x, scratch);
        }
        const double r = f - data.outputs[row];
        residual_sq[j] = r * r;
    });
    if (grad) {
        grad->resize(circuit.num_params());
        accumulate(per_row, 2.0 / static_cast<double>(n), *grad);
    }
    return pairwise_sum(residual_sq) / static_cast<double>(n);
}

double classical_loss_impl(const ClassicalModel &model, std::span<const double> params,
                           const Dataset &data, const std::vector<std::size_t> &rows,
                           std::vector<double> *grad) {
    const std::size_t n = rows.size();
    std::vector<double> residual_sq(n);
    std::vector<std::vector<double>> per_row(grad ? n : 0);
    parallel_for(n, [&](std::size_t j) {
        const std::size_t row = rows[j];
        auto features = model.model_features(data.inputs[row]);
        double f = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            f += params[i] * features[i];
        }
        const double r = f - data.outputs[row];
        residual_sq[j] = r * r;
        if (grad) {
            for (auto &v : features) {
                v *= r;
            }
            per_row[j] = std::move(features);
        }
    });
    if (grad) {
        grad->resize(params.size());
        accumulate(per_row, 2.0 / static_cast<double>(n), *grad);
    }
    return pairwise_sum(residual_sq) / static_cast<double>(n);
}

std::vector<std::size_t> all_rows(const Dataset &data) {
    std::vector<std::size_t> rows(data.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        rows[j] = j;
    }
    return rows;
}

// Shared optimization loop. `loss_grad(params, rows, grad, step)` returns the
// batch loss and fills the gradient; `test_loss(params)` evaluates held-out data.
template <class LossGrad, class TestLoss, class FullLoss>
void optimize(ResultRecord &record, std::vector<double> params, std::size_t n_rows,
              const TrainConfig &cfg, LossGrad &&loss_grad, TestLoss &&test_loss,
              FullLoss &&full_loss) {
    const auto start = std::chrono::steady_clock::now();
    Optimizer opt(cfg.optimizer, params.size());
    Rng batch_rng = Rng::derive(cfg.seed, 1);
    std::vector<double> grad(params.size());
    record.loss_trace.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        std::vector<std::size_t> rows;
        if (cfg.batch) {
            rows = batch_rows(n_rows, cfg, batch_rng);
        } else {
            rows.resize(n_rows);
            for (std::size_t j = 0; j < n_rows; ++j) {
                rows[j] = j;
            }
        }
        const double loss = loss_grad(params, rows, grad, step);
        record.loss_trace.push_back(loss);
        if (test_loss) {
            record.test_loss_trace.push_back((*test_loss)(params));
        }
        if (!std::isfinite(loss) || loss > cfg.divergence_threshold) {
            record.status = TrainStatus::Diverged;
            break;
        }
        opt.step(params, grad);
    }
    record.final_loss = full_loss(params);
    record.final_params = std::move(params);
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? std::string()
                                                    : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

} // namespace

int Dataset::num_vars() const {
    return inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
}

void Dataset::validate() const {
    if (inputs.size() != outputs.size()) {
        throw ArgumentError("dataset: inputs and outputs differ in length");
    }
    if (inputs.empty()) {
        throw ArgumentError("dataset is empty");
    }
    const std::size_t width = inputs.front().size();
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        if (inputs[j].size() != width) {
            throw ArgumentError("dataset: row " + std::to_string(j) + " has the wrong width");
        }
        for (const double v : inputs[j]) {
            if (!std::isfinite(v)) {
                throw ArgumentError("dataset: non-finite input in row " + std::to_string(j));
            }
        }
        if (!std::isfinite(outputs[j])) {
            throw ArgumentError("dataset: non-finite output in row " + std::to_string(j));
        }
    }
}

std::vector<double> equispaced_grid(int n_points) {
    if (n_points < 1) {
        throw ArgumentError("grid needs at least one point");
    }
    std::vector<double> x(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        x[static_cast<std::size_t>(j)] = detail::grid_point(j, n_points);
    }
    return x;
}

double step_function(double x) { return x >= 0.0 ? 0.5 : -0.5; }

Dataset make_step_dataset(int n_points) {
    if (n_points < 2) {
        throw ArgumentError("step dataset needs at least 2 points");
    }
    Dataset data;
    for (const double x : equispaced_grid(n_points)) {
        data.inputs.push_back({x});
        data.outputs.push_back(step_function(x));
    }
    data.metadata = {{"generator", "step"}, {"n_points", n_points}};
    return data;
}

FeatureMap RandomFourierTarget::feature_map() const {
    FeatureMap fm;
    fm.num_vars = 1;
    fm.degree = (kappa - 1) / 2;
    return fm;
}

double RandomFourierTarget::operator()(double x) const {
    const auto phi = fourierqml::feature_map(std::span<const double>(&x, 1), feature_map());
    double f = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        f += coefficients[i] * phi[i];
    }
    return f;
}

double RandomFourierTarget::realized_ratio() const {
    double low = 0.0;
    double high = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        (static_cast<int>(i) < split ? low : high) += coefficients[i] * coefficients[i];
    }
    return std::sqrt(low) / std::sqrt(high);
}

RandomFourierTarget make_random_fourier_target(int kappa, int split, double r,
                                               std::uint64_t seed) {
    if (kappa < 3 || kappa % 2 == 0) {
        throw ArgumentError("random Fourier target: kappa must be odd and >= 3");
    }
    if (split <= 0 || split >= kappa) {
        throw ArgumentError("random Fourier target: need 0 < split < kappa");
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw ArgumentError("random Fourier target: r must be positive");
    }
    RandomFourierTarget t;
    t.kappa = kappa;
    t.split = split;
    t.ratio = r;
    t.seed = seed;
    Rng rng(seed);
    t.coefficients.resize(static_cast<std::size_t>(kappa));
    for (auto &c : t.coefficients) {
        c = rng.normal();
    }
    double low = 0.0;
    double high = 0.0;
    for (int i = 0; i < kappa; ++i) {
        const double c = t.coefficients[static_cast<std::size_t>(i)];
        (i < split ? low : high) += c * c;
    }
    const double low_scale = r * std::sqrt(high / low);
    for (int i = 0; i < split; ++i) {
        t.coefficients[static_cast<std::size_t>(i)] *= low_scale;
    }

    const FeatureMap fm = t.feature_map();
    double peak = 0.0;
    for (std::size_t j = 0; j < kTargetGrid; ++j) {
        const double x = detail::grid_point(static_cast<int>(j), static_cast<int>(kTargetGrid));
        const auto phi = fourierqml::feature_map(std::span<const double>(&x, 1), fm);
        double f = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            f += t.coefficients[i] * phi[i];
        }
        peak = std::max(peak, std::abs(f));
    }
    for (auto &c : t.coefficients) {
        c *= kTargetPeak / peak;
    }
    return t;
}

Dataset dataset_from_coefficients(const FeatureMap &fm, std::span<const double> c,
                                  int points_per_var) {
    fm.validate();
    if (c.size() != fm.dimension()) {
        throw ArgumentError("dataset_from_coefficients: coefficient length mismatch");
    }
    const auto grid = equispaced_grid(points_per_var);
    const auto m_vars = static_cast<std::size_t>(fm.num_vars);
    const double total = std::pow(static_cast<double>(points_per_var), fm.num_vars);
    if (total > 1e7) {
        throw CapacityError("dataset grid exceeds 10^7 points");
    }
    Dataset data;
    std::vector<std::size_t> index(m_vars, 0);
    for (std::size_t p = 0; p < static_cast<std::size_t>(total); ++p) {
        std::vector<double> x(m_vars);
        for (std::size_t m = 0; m < m_vars; ++m) {
            x[m] = grid[index[m]];
        }
        const auto phi = feature_map(x, fm);
        double f = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            f += c[i] * phi[i];
        }
        data.inputs.push_back(std::move(x));
        data.outputs.push_back(f);
        for (std::size_t m = m_vars; m-- > 0;) {
            if (++index[m] < grid.size()) {
                break;
            }
            index[m] = 0;
        }
    }
    data.metadata = {{"generator", "coefficients"},
                     {"M", fm.num_vars},
                     {"d_F", fm.degree},
                     {"points_per_var", points_per_var}};
    return data;
}

Dataset dataset_from_target(const RandomFourierTarget &target, int n_points) {
    Dataset data = dataset_from_coefficients(target.feature_map(), target.coefficients, n_points);
    data.metadata = {{"generator", "random_fourier"}, {"kappa", target.kappa},
                     {"split", target.split},         {"r", target.ratio},
                     {"seed", target.seed},           {"n_points", n_points}};
    return data;
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.size() != targets.size()) {
        throw ArgumentError("mse_loss: length mismatch");
    }
    if (preds.empty()) {
        throw ArgumentError("mse_loss: empty input");
    }
    std::vector<double> sq(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double r = preds[i] - targets[i];
        sq[i] = r * r;
    }
    return pairwise_sum(sq) / static_cast<double>(preds.size());
}

void OptimizerConfig::validate() const {
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw ArgumentError("optimizer: learning rate must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ArgumentError("optimizer: betas must lie in [0, 1)");
    }
    if (!(eps > 0.0)) {
        throw ArgumentError("optimizer: eps must be positive");
    }
}

Optimizer::Optimizer(OptimizerConfig cfg, std::size_t n_params)
    : cfg_(cfg), m_(n_params, 0.0), v_(n_params, 0.0) {
    cfg_.validate();
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw ArgumentError("optimizer: dimension mismatch");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            throw TrainingError("non-finite gradient at step " + std::to_string(t_ + 1) +
                                ", parameter " + std::to_string(i) + " (value " +
                                std::to_string(grads[i]) + ")");
        }
    }
    ++t_;
    if (cfg_.kind == OptimizerKind::GradientDescent) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= cfg_.lr * grads[i];
        }
        return;
    }
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grads[i];
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grads[i] * grads[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
}

void TrainConfig::validate() const {
    optimizer.validate();
    if (steps < 1) {
        throw ArgumentError("train: steps must be >= 1");
    }
    if (batch && *batch < 1) {
        throw ArgumentError("train: batch size must be >= 1");
    }
    if (shots && *shots < 1) {
        throw ArgumentError("train: shots must be >= 1");
    }
    if (!(divergence_threshold > 0.0)) {
        throw ArgumentError("train: divergence threshold must be positive");
    }
}

double ResultRecord::saturated_loss() const {
    if (loss_trace.empty()) {
        throw ArgumentError("saturated_loss: empty trace");
    }
    const std::size_t tail = std::max<std::size_t>(1, loss_trace.size() / 10);
    const std::vector<double> last(loss_trace.end() - static_cast<std::ptrdiff_t>(tail),
                                   loss_trace.end());
    return pairwise_sum(last) / static_cast<double>(tail);
}

json to_json(const ResultRecord &r) {
    json doc{{"model", r.model},
             {"config", r.config},
             {"seed", r.seed},
             {"status", status_name(r.status)},
             {"loss_trace", r.loss_trace},
             {"test_loss_trace", r.test_loss_trace},
             {"final_loss", r.final_loss},
             {"final_params", r.final_params},
             {"resource_counters", r.resource_counters},
             {"wall_ms", r.wall_ms}};
    if (!r.loss_trace.empty()) {
        doc["saturated_loss"] = r.saturated_loss();
    }
    if (r.coefficients) {
        doc["coefficients"] = *r.coefficients;
    }
    return doc;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string trace_csv(const ResultRecord &r) {
    std::string out = "step,train_loss,test_loss\n";
    for (std::size_t t = 0; t < r.loss_trace.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(r.loss_trace[t]);
        out += ',';
        if (t < r.test_loss_trace.size()) {
            out += format_double(r.test_loss_trace[t]);
        }
        out += '\n';
    }
    return out;
}

double quantum_loss_and_gradient(const AnsatzSpec &spec, std::span<const double> theta,
                                 const Dataset &data, std::vector<double> *grad) {
    data.validate();
    const Circuit circuit(spec);
    return quantum_loss_impl(circuit, theta, data, all_rows(data), grad, std::nullopt, 0);
}

double classical_loss_and_gradient(const ClassicalModel &model, std::span<const double> params,
                                   const Dataset &data, std::vector<double> *grad) {
    data.validate();
    if (params.size() != model.num_params()) {
        throw ArgumentError("classical loss: parameter count mismatch");
    }
    return classical_loss_impl(model, params, data, all_rows(data), grad);
}

ResultRecord train(const AnsatzSpec &spec, const Dataset &data, const TrainConfig &cfg,
                   const Dataset *test, std::optional<std::vector<double>> initial) {
    cfg.validate();
    data.validate();
    const Circuit circuit(spec);
    if (data.num_vars() != circuit.num_vars()) {
        throw ArgumentError("train: dataset has " + std::to_string(data.num_vars()) +
                            " inputs, model expects " + std::to_string(circuit.num_vars()));
    }
    if (test) {
        test->validate();
    }
    std::vector<FrequencySpectrum> spectra;
    std::vector<std::int64_t> degrees;
    for (const auto &enc : variable_encodings(spec)) {
        spectra.push_back(spectrum(enc));
        degrees.push_back(spectra.back().max_frequency());
    }
    check_sampling(data, degrees, cfg);

    std::vector<double> params;
    if (initial) {
        if (initial->size() != circuit.num_params()) {
            throw ArgumentError("train: initial parameters have the wrong length");
        }
        params = std::move(*initial);
    } else {
        Rng init = Rng::derive(cfg.seed, 0);
        params = random_parameters(spec, init);
    }

    ResultRecord record;
    record.model = "qfflm";
    record.seed = cfg.seed;
    record.config = {{"train", train_config_json(cfg)}, {"ansatz", to_json(spec)}};
    const std::uint64_t shot_base = Rng::derive(cfg.seed, 2).next_u64();
    std::optional<std::function<double(const std::vector<double> &)>> test_loss;
    if (test) {
        test_loss = [&](const std::vector<double> &p) {
            return quantum_loss_impl(circuit, p, *test, all_rows(*test), nullptr, std::nullopt,
                                     0);
        };
    }
    std::uint64_t executions = 0;
    optimize(
        record, std::move(params), data.size(), cfg,
        [&](const std::vector<double> &p, const std::vector<std::size_t> &rows,
            std::vector<double> &grad, int step) {
            executions += rows.size() * (1 + 2 * circuit.num_params());
            return quantum_loss_impl(circuit, p, data, rows, &grad, cfg.shots,
                                     Rng::derive(shot_base, static_cast<std::uint64_t>(step))
                                         .next_u64());
        },
        test_loss,
        [&](const std::vector<double> &p) {
            return quantum_loss_impl(circuit, p, data, all_rows(data), nullptr, std::nullopt, 0);
        });

    record.resource_counters = {{"N_gt", count_gates(spec)},
                                {"N_tp", circuit.num_params()},
                                {"circuit_executions", executions},
                                {"shots_per_execution", cfg.shots ? json(*cfg.shots)
                                                                  : json("exact")}};
    if (cfg.recover_coefficients) {
        const auto fc = fourier_coefficients(spec, record.final_params);
        bool dense = true;
        for (const auto &s : spectra) {
            dense = dense && s.contiguous();
        }
        if (dense) {
            record.coefficients = coefficient_vector(fc);
        }
    }
    return record;
}

ResultRecord train(const ClassicalModel &model, const Dataset &data, const TrainConfig &cfg,
                   const Dataset *test, std::optional<std::vector<double>> initial) {
    cfg.validate();
    data.validate();
    if (data.num_vars() != model.feature_map().num_vars) {
        throw ArgumentError("train: dataset width does not match the feature map");
    }
    if (test) {
        test->validate();
    }
    check_sampling(data,
                   std::vector<std::int64_t>(static_cast<std::size_t>(model.feature_map().num_vars),
                                             model.feature_map().degree),
                   cfg);

    std::vector<double> params;
    if (initial) {
        if (initial->size() != model.num_params()) {
            throw ArgumentError("train: initial parameters have the wrong length");
        }
        params = std::move(*initial);
    } else {
        Rng init = Rng::derive(cfg.seed, 0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(model.num_params()));
        params.resize(model.num_params());
        for (auto &p : params) {
            p = init.uniform(-bound, bound);
        }
    }

    ResultRecord record;
    record.model = "cfflm";
    record.seed = cfg.seed;
    record.config = {{"train", train_config_json(cfg)}, {"model", to_json(model)}};
    record.config["model"].erase("coefficients");
    std::optional<std::function<double(const std::vector<double> &)>> test_loss;
    if (test) {
        test_loss = [&](const std::vector<double> &p) {
            return classical_loss_impl(model, p, *test, all_rows(*test), nullptr);
        };
    }
    std::uint64_t evaluations = 0;
    optimize(
        record, std::move(params), data.size(), cfg,
        [&](const std::vector<double> &p, const std::vector<std::size_t> &rows,
            std::vector<double> &grad, int) {
            evaluations += rows.size();
            return classical_loss_impl(model, p, data, rows, &grad);
        },
        test_loss,
        [&](const std::vector<double> &p) {
            return classical_loss_impl(model, p, data, all_rows(data), nullptr);
        });

    record.resource_counters = {{"feature_dim", model.feature_map().dimension()},
                                {"N_tp", model.num_params()},
                                {"feature_evaluations", evaluations}};
    if (cfg.recover_coefficients) {
        ClassicalModel trained = model;
        trained.set_params(record.final_params);
        record.coefficients = trained.effective_coefficients();
    }
    return record;
}

std::vector<double> coulomb_features(std::span<const std::array<double, 3>> positions,
                                     std::span<const int> charges) {
    if (positions.size() != charges.size()) {
        throw ArgumentError("coulomb_features: positions and charges differ in length");
    }
    if (positions.size() < 2) {
        throw ArgumentError("coulomb_features: need at least two atoms");
    }
    std::vector<double> out;
    out.reserve(positions.size() * (positions.size() - 1) / 2);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            const double dx = positions[i][0] - positions[j][0];
            const double dy = positions[i][1] - positions[j][1];
            const double dz = positions[i][2] - positions[j][2];
            const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (!(dist > 0.0)) {
                throw DomainError("coulomb_features: atoms " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " coincide");
            }
            out.push_back(static_cast<double>(charges[i]) * charges[j] / dist);
        }
    }
    return out;
}

Affine fit_range(std::span<const double> values, double lo, double hi, bool *degenerate) {
    if (values.empty()) {
        throw ArgumentError("fit_range: empty column");
    }
    if (!(hi > lo)) {
        throw ArgumentError("fit_range: need lo < hi");
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Affine a;
    if (*mx == *mn) {
        a.scale = 1.0;
        a.offset = 0.5 * (lo + hi) - *mn;
        if (degenerate) {
            *degenerate = true;
        }
        return a;
    }
    if (degenerate) {
        *degenerate = false;
    }
    a.scale = (hi - lo) / (*mx - *mn);
    a.offset = lo - a.scale * *mn;
    return a;
}

CsvDataset load_csv_dataset(const std::filesystem::path &path,
                            const std::vector<std::string> &input_cols,
                            const std::string &output_col, const CsvNormalization &norm) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    if (input_cols.empty()) {
        throw ArgumentError("load_csv_dataset: need at least one input column");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": missing header row");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_csv_line(line);
    auto column_of = [&](const std::string &name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ParseError(path.string() + ": no column named '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> in_idx;
    for (const auto &name : input_cols) {
        in_idx.push_back(column_of(name));
    }
    const std::size_t out_idx = column_of(output_col);

    std::vector<std::vector<double>> raw_inputs;
    std::vector<double> raw_outputs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        }
        auto number = [&](std::size_t col) {
            const std::string &s = fields[col];
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() ||
                !std::isfinite(v)) {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ", column '" + header[col] + "': not a number: '" + s + "'");
            }
            return v;
        };
        std::vector<double> row;
        for (const auto c : in_idx) {
            row.push_back(number(c));
        }
        raw_inputs.push_back(std::move(row));
        raw_outputs.push_back(number(out_idx));
    }
    if (raw_outputs.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }

    CsvDataset out;
    for (std::size_t m = 0; m < in_idx.size(); ++m) {
        std::vector<double> column(raw_inputs.size());
        for (std::size_t j = 0; j < raw_inputs.size(); ++j) {
            column[j] = raw_inputs[j][m];
        }
        bool degenerate = false;
        out.input_maps.push_back(fit_range(column, norm.input_lo, norm.input_hi, &degenerate));
        if (degenerate) {
            out.warnings.push_back("column '" + input_cols[m] +
                                   "' is constant; mapped to the range midpoint");
        }
    }
    bool degenerate = false;
    out.output_map = fit_range(raw_outputs, norm.output_lo, norm.output_hi, &degenerate);
    if (degenerate) {
        out.warnings.push_back("column '" + output_col +
                               "' is constant; mapped to the range midpoint");
    }
    for (std::size_t j = 0; j < raw_outputs.size(); ++j) {
        std::vector<double> x(in_idx.size());
        for (std::size_t m = 0; m < in_idx.size(); ++m) {
            x[m] = out.input_maps[m].apply(raw_inputs[j][m]);
        }
        out.data.inputs.push_back(std::move(x));
        out.data.outputs.push_back(out.output_map.apply(raw_outputs[j]));
    }
    out.data.metadata = {{"generator", "csv"},
                         {"path", path.string()},
                         {"inputs", input_cols},
                         {"output", output_col}};
    return out;
}

std::vector<ComparisonRun> run_comparison(const ComparisonConfig &cfg) {
    if (cfg.runs < 1) {
        throw ArgumentError("comparison: runs must be >= 1");
    }
    if (cfg.ratios.empty()) {
        throw ArgumentError("comparison: need at least one ratio");
    }
    FeatureMap fm;
    fm.num_vars = 1;
    fm.degree = (cfg.kappa - 1) / 2;
    fm.truncate = cfg.classical_dim;
    const ClassicalModel classical =
        ClassicalModel::full(fm, std::vector<double>(fm.dimension(), 0.0));

    std::vector<ComparisonRun> out;
    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
        for (int run = 0; run < cfg.runs; ++run) {
            ComparisonRun item;
            item.ratio = cfg.ratios[ri];
            item.run = run;
            const std::uint64_t stream = ri * 1'000'003ULL + static_cast<std::uint64_t>(run);
            item.target_seed = Rng::derive(cfg.seed, 2 * stream).next_u64();
            const auto target =
                make_random_fourier_target(cfg.kappa, cfg.split, item.ratio, item.target_seed);
            const Dataset data = dataset_from_target(target, cfg.n_points);
            TrainConfig tc = cfg.train;
            tc.seed = Rng::derive(cfg.seed, 2 * stream + 1).next_u64();
            item.classical = train(classical, data, tc);
            item.quantum = train(cfg.ansatz, data, tc);
            out.push_back(std::move(item));
        }
    }
    return out;
}

} // namespace fourierqml
