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

#include "fourierqml/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <functional>
#include <numbers>
#include <array>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fourierqml/analysis.hpp"
#include "fourierqml/ansatz.hpp"
#include "fourierqml/cfflm.hpp"
#include "fourierqml/errors.hpp"
#include "fourierqml/json_util.hpp"
#include "fourierqml/spectra.hpp"
#include "fourierqml/trainer.hpp"

namespace fourierqml::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace jsonutil;

constexpr const char *kTrainHelp = R"(train-v1 fields:
  version        "train-v1"
  seed           integer; fixes initialization, batches and shot noise
  output_dir     directory for result.json, trace.csv, config.json, run.log
  model          {"family": "qfflm", "ansatz": <ansatz-v1>}
                 {"family": "qfflm", "preset": {"kind": "exponential"|"naive",
                                                "M", "N", "L", "rotation"?}}
                 {"family": "cfflm", "M", "d_F", "truncate"?}
  target         {"kind": "step", "n_points"}
                 {"kind": "random_fourier", "kappa", "split", "r", "seed", "n_points"}
                 {"kind": "coefficients", "M", "d_F", "coefficients", "points_per_var"}
                 {"kind": "csv", "path", "inputs": [names], "output": name}
                 optional "test_points": size of a half-step shifted test grid
                 (step and random_fourier only)
  optimizer      {"kind": "adam"|"gd", "lr", "beta1"?, "beta2"?, "eps"?}
  steps          number of updates
  batch          optional batch size (default: full batch)
  shots          optional shots per expectation (default: exact)
  recover_coefficients, allow_undersampled   optional booleans)";

constexpr const char *kCompareHelp = R"(compare-v1 fields:
  version, seed, output_dir
  ratios         list of r values, e.g. [0.05, 1.6, 55.5]
  runs           runs per ratio (>= 1)
  kappa, split   target size and low-block size (default 81, 64)
  n_points       training grid size (default 200)
  classical_dim  leading CFFLM features (default 64)
  model          optional QFFLM as in train-v1 (default: exponential M=1 N=4 L=1)
  optimizer      as in train-v1 (default adam, lr 0.03)
  steps          default 500)";

constexpr const char *kPlateauHelp = R"(plateau-v1 fields:
  version, seed, output_dir
  sizes          list of [M, N] pairs
  trials         Monte-Carlo trials per size (>= 100)
  haar_mode      true: dense Haar W1, W2; false: random angles in the layered ansatz
  layers         layers per module in circuit mode (default 1)
  x              optional fixed input (default zeros)
  gradients      optional boolean (default true))";

constexpr const char *kResourcesHelp = R"(resources-v1 fields:
  version, seed, output_dir
  K, M           classical lattice K^M
  eps            sampling precision in (0, 1]
  n_gt           list of gate counts to sweep
  n_tp           optional list of parameter counts (default: equal to n_gt)
  ansatz         optional model as in train-v1; adds a row counted from the circuit)";

constexpr const char *kBiconeHelp = R"(bicone-v1 fields:
  version, seed, output_dir
  samples        random coefficient vectors (default 100000)
  grid           grid points on [-pi, pi) (default 10000)
  range          draw c uniformly in [-range, range]^3 (default 1.5)
  band           boundary band half-width (default 1e-3))";

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

/// Output directory with the config archived and a timestamped sidecar log.
class RunOutput {
  public:
    RunOutput(const json &config, const std::string &command)
        : dir_(get<std::string>(config, "output_dir", command)),
          start_(std::chrono::steady_clock::now()) {
        fs::create_directories(dir_);
        write_text(dir_ / "config.json", config.dump(2) + "\n");
        log_ << "command " << command << "\nstarted " << timestamp() << "\n";
    }
    ~RunOutput() {
        try {
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start_)
                                  .count();
            log_ << "finished " << timestamp() << "\nwall_ms " << ms << "\n";
            write_text(dir_ / "run.log", log_.str());
        } catch (...) {
        }
    }
    RunOutput(const RunOutput &) = delete;
    RunOutput &operator=(const RunOutput &) = delete;

    [[nodiscard]] const fs::path &dir() const { return dir_; }
    std::ostream &log() { return log_; }
    void write(const std::string &name, const std::string &text) const {
        write_text(dir_ / name, text);
    }

  private:
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    std::ostringstream log_;
};

void require_common(const json &config, const char *version) {
    if (!config.is_object()) {
        throw ParseError(std::string(version) + ": config must be a JSON object");
    }
    require_version(config, version);
    get<std::uint64_t>(config, "seed", version);
    get<std::string>(config, "output_dir", version);
}

OptimizerConfig parse_optimizer(const json &doc) {
    require_keys_within(doc, {"kind", "lr", "beta1", "beta2", "eps"}, "optimizer");
    OptimizerConfig o;
    const auto kind = get_or<std::string>(doc, "kind", "adam", "optimizer");
    if (kind == "adam") {
        o.kind = OptimizerKind::Adam;
    } else if (kind == "gd") {
        o.kind = OptimizerKind::GradientDescent;
    } else {
        throw ParseError("optimizer: kind must be 'adam' or 'gd'");
    }
    o.lr = get<double>(doc, "lr", "optimizer");
    o.beta1 = get_or<double>(doc, "beta1", o.beta1, "optimizer");
    o.beta2 = get_or<double>(doc, "beta2", o.beta2, "optimizer");
    o.eps = get_or<double>(doc, "eps", o.eps, "optimizer");
    o.validate();
    return o;
}

AnsatzSpec parse_quantum_model(const json &model) {
    if (model.contains("ansatz")) {
        return ansatz_from_json(model.at("ansatz"));
    }
    const json preset = get<json>(model, "preset", "model");
    require_keys_within(preset, {"kind", "M", "N", "L", "rotation"}, "model.preset");
    const auto kind = get<std::string>(preset, "kind", "model.preset");
    const int m = get<int>(preset, "M", "model.preset");
    const int n = get<int>(preset, "N", "model.preset");
    const int l = get<int>(preset, "L", "model.preset");
    const auto rot = get_or<std::string>(preset, "rotation", "yz", "model.preset");
    if (rot != "yz" && rot != "rot") {
        throw ParseError("model.preset: rotation must be 'yz' or 'rot'");
    }
    const RotationKind rotation = rot == "yz" ? RotationKind::YZ : RotationKind::Rot;
    if (kind == "exponential") {
        return make_parallel_exponential(m, n, l, rotation);
    }
    if (kind == "naive") {
        if (n < 1) {
            throw ArgumentError("model.preset: N must be >= 1");
        }
        return make_parallel(m, n, l,
                             EncodingSpec(std::vector<std::int64_t>(static_cast<std::size_t>(n), 1)),
                             rotation);
    }
    throw ParseError("model.preset: kind must be 'exponential' or 'naive'");
}

struct ModelChoice {
    std::optional<AnsatzSpec> quantum;
    std::optional<ClassicalModel> classical;
};

ModelChoice parse_model(const json &model) {
    const auto family = get<std::string>(model, "family", "model");
    ModelChoice out;
    if (family == "qfflm") {
        require_keys_within(model, {"family", "ansatz", "preset"}, "model");
        out.quantum = parse_quantum_model(model);
    } else if (family == "cfflm") {
        require_keys_within(model, {"family", "M", "d_F", "truncate"}, "model");
        FeatureMap fm;
        fm.num_vars = get<int>(model, "M", "model");
        fm.degree = get<int>(model, "d_F", "model");
        if (model.contains("truncate")) {
            fm.truncate = get<std::size_t>(model, "truncate", "model");
        }
        fm.validate();
        out.classical = ClassicalModel::full(fm, std::vector<double>(fm.dimension(), 0.0));
    } else {
        throw ParseError("model: family must be 'qfflm' or 'cfflm'");
    }
    return out;
}

Dataset shifted_grid(const Dataset &train, int n_points,
                     const std::function<double(double)> &target) {
    Dataset test;
    for (int j = 0; j < n_points; ++j) {
        const double x = -std::numbers::pi + 2.0 * std::numbers::pi * (j + 0.5) / n_points;
        test.inputs.push_back({x});
        test.outputs.push_back(target(x));
    }
    test.metadata = train.metadata;
    test.metadata["test_points"] = n_points;
    return test;
}

std::pair<Dataset, std::optional<Dataset>> parse_target(const json &target, std::ostream &err) {
    const auto kind = get<std::string>(target, "kind", "target");
    if (kind == "step") {
        require_keys_within(target, {"kind", "n_points", "test_points"}, "target");
        Dataset data = make_step_dataset(get<int>(target, "n_points", "target"));
        std::optional<Dataset> test;
        if (target.contains("test_points")) {
            test = shifted_grid(data, get<int>(target, "test_points", "target"), step_function);
        }
        return {std::move(data), std::move(test)};
    }
    if (kind == "random_fourier") {
        require_keys_within(target,
                            {"kind", "kappa", "split", "r", "seed", "n_points", "test_points"},
                            "target");
        const auto t = make_random_fourier_target(
            get<int>(target, "kappa", "target"), get<int>(target, "split", "target"),
            get<double>(target, "r", "target"), get<std::uint64_t>(target, "seed", "target"));
        Dataset data = dataset_from_target(t, get<int>(target, "n_points", "target"));
        std::optional<Dataset> test;
        if (target.contains("test_points")) {
            test = shifted_grid(data, get<int>(target, "test_points", "target"),
                                [&](double x) { return t(x); });
        }
        return {std::move(data), std::move(test)};
    }
    if (kind == "coefficients") {
        require_keys_within(target, {"kind", "M", "d_F", "coefficients", "points_per_var"},
                            "target");
        FeatureMap fm;
        fm.num_vars = get<int>(target, "M", "target");
        fm.degree = get<int>(target, "d_F", "target");
        const auto c = get<std::vector<double>>(target, "coefficients", "target");
        return {dataset_from_coefficients(fm, c, get<int>(target, "points_per_var", "target")),
                std::nullopt};
    }
    if (kind == "csv") {
        require_keys_within(target, {"kind", "path", "inputs", "output"}, "target");
        auto csv = load_csv_dataset(get<std::string>(target, "path", "target"),
                                    get<std::vector<std::string>>(target, "inputs", "target"),
                                    get<std::string>(target, "output", "target"));
        for (const auto &w : csv.warnings) {
            err << "warning: " << w << "\n";
        }
        return {std::move(csv.data), std::nullopt};
    }
    throw ParseError("target: unknown kind '" + kind + "'");
}

int cmd_spectrum(const std::string &weights_arg, int exp_n, const std::string &out_path,
                 std::ostream &out) {
    EncodingSpec enc = [&] {
        if (exp_n > 0) {
            return exponential_weights(exp_n);
        }
        std::vector<std::int64_t> w;
        std::stringstream ss(weights_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(item, &used);
            } catch (const std::exception &) {
                throw ArgumentError("bad weight '" + item + "'");
            }
            if (used != item.size()) {
                throw ArgumentError("bad weight '" + item + "'");
            }
            w.push_back(v);
        }
        return EncodingSpec(std::move(w));
    }();
    const auto s = spectrum(enc);
    json doc{{"weights", enc.weights()},
             {"d_F", s.max_frequency()},
             {"distinct", s.distinct()},
             {"contiguous", s.contiguous()},
             {"nondegenerate", is_maximally_nondegenerate(enc)},
             {"dense", is_dense(enc)},
             {"support", s.support},
             {"multiplicity", s.multiplicity}};
    const std::string text = doc.dump(2) + "\n";
    if (!out_path.empty()) {
        write_text(out_path, text);
    }
    out << text;
    return kExitOk;
}

int cmd_train(const std::string &config_path, std::ostream &out, std::ostream &err) {
    const json config = read_json_file(config_path);
    require_common(config, "train-v1");
    require_keys_within(config,
                        {"version", "seed", "output_dir", "model", "target", "optimizer", "steps",
                         "batch", "shots", "recover_coefficients", "allow_undersampled"},
                        "train-v1");
    const ModelChoice model = parse_model(get<json>(config, "model", "train-v1"));
    auto [data, test] = parse_target(get<json>(config, "target", "train-v1"), err);
    TrainConfig tc;
    tc.optimizer = parse_optimizer(get<json>(config, "optimizer", "train-v1"));
    tc.steps = get<int>(config, "steps", "train-v1");
    tc.seed = get<std::uint64_t>(config, "seed", "train-v1");
    if (config.contains("batch")) {
        tc.batch = get<std::size_t>(config, "batch", "train-v1");
    }
    if (config.contains("shots")) {
        tc.shots = get<std::uint64_t>(config, "shots", "train-v1");
    }
    tc.recover_coefficients = get_or<bool>(config, "recover_coefficients", false, "train-v1");
    tc.allow_undersampled = get_or<bool>(config, "allow_undersampled", false, "train-v1");
    tc.validate();

    RunOutput run(config, "train");
    const Dataset *test_ptr = test ? &*test : nullptr;
    const ResultRecord record = model.quantum ? train(*model.quantum, data, tc, test_ptr)
                                              : train(*model.classical, data, tc, test_ptr);
    json doc = to_json(record);
    // Wall time goes to the sidecar log so result.json is reproducible.
    doc.erase("wall_ms");
    run.log() << "train_wall_ms " << record.wall_ms << "\n";
    run.write("result.json", doc.dump(2) + "\n");
    run.write("trace.csv", trace_csv(record));
    if (record.status == TrainStatus::Diverged) {
        err << "training diverged at step " << record.loss_trace.size() << " (loss "
            << record.loss_trace.back() << "); partial trace written\n";
        return kExitDiverged;
    }
    out << "final_loss " << format_double(record.final_loss) << "\n";
    return kExitOk;
}

int cmd_compare(const std::string &config_path, std::ostream &out) {
    const json config = read_json_file(config_path);
    require_common(config, "compare-v1");
    require_keys_within(config,
                        {"version", "seed", "output_dir", "ratios", "runs", "kappa", "split",
                         "n_points", "classical_dim", "model", "optimizer", "steps"},
                        "compare-v1");
    ComparisonConfig cc;
    cc.seed = get<std::uint64_t>(config, "seed", "compare-v1");
    cc.ratios = get<std::vector<double>>(config, "ratios", "compare-v1");
    cc.runs = get<int>(config, "runs", "compare-v1");
    if (cc.runs < 1) {
        throw ArgumentError("compare-v1: runs must be >= 1");
    }
    cc.kappa = get_or<int>(config, "kappa", cc.kappa, "compare-v1");
    cc.split = get_or<int>(config, "split", cc.split, "compare-v1");
    cc.n_points = get_or<int>(config, "n_points", cc.n_points, "compare-v1");
    cc.classical_dim = get_or<std::size_t>(config, "classical_dim", cc.classical_dim, "compare-v1");
    if (config.contains("model")) {
        const json model = config.at("model");
        if (get<std::string>(model, "family", "model") != "qfflm") {
            throw ParseError("compare-v1: model must be a qfflm");
        }
        require_keys_within(model, {"family", "ansatz", "preset"}, "model");
        cc.ansatz = parse_quantum_model(model);
    }
    if (config.contains("optimizer")) {
        cc.train.optimizer = parse_optimizer(config.at("optimizer"));
    }
    cc.train.steps = get_or<int>(config, "steps", 500, "compare-v1");
    cc.train.validate();

    RunOutput run(config, "compare");
    const auto results = run_comparison(cc);
    fs::create_directories(run.dir() / "traces");
    std::string combined = "r,model,run,step,loss\n";
    std::map<std::pair<double, std::string>, std::vector<double>> saturated;
    for (const auto &item : results) {
        for (const auto *rec : {&item.classical, &item.quantum}) {
            const std::string r_text = format_double(item.ratio);
            for (std::size_t t = 0; t < rec->loss_trace.size(); ++t) {
                combined += r_text + "," + rec->model + "," + std::to_string(item.run) + "," +
                            std::to_string(t) + "," + format_double(rec->loss_trace[t]) + "\n";
            }
            run.write("traces/r" + r_text + "_" + rec->model + "_run" +
                          std::to_string(item.run) + ".csv",
                      trace_csv(*rec));
            saturated[{item.ratio, rec->model}].push_back(rec->saturated_loss());
        }
    }
    run.write("combined.csv", combined);

    json summary{{"runs", cc.runs}, {"kappa", cc.kappa}, {"split", cc.split}};
    json entries = json::array();
    for (const auto &[key, values] : saturated) {
        double mean = 0.0;
        for (const double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(values.size());
        entries.push_back({{"r", key.first},
                           {"model", key.second},
                           {"saturated_loss_mean", mean},
                           {"saturated_loss_runs", values}});
        summary["saturated_loss"][key.second][format_double(key.first)] = mean;
    }
    summary["entries"] = entries;
    run.write("summary.json", summary.dump(2) + "\n");
    out << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_plateau(const std::string &config_path, std::ostream &out) {
    const json config = read_json_file(config_path);
    require_common(config, "plateau-v1");
    require_keys_within(config,
                        {"version", "seed", "output_dir", "sizes", "trials", "haar_mode", "layers",
                         "x", "gradients"},
                        "plateau-v1");
    const auto sizes = get<std::vector<std::array<int, 2>>>(config, "sizes", "plateau-v1");
    if (sizes.empty()) {
        throw ArgumentError("plateau-v1: sizes must not be empty");
    }
    PlateauConfig base;
    base.seed = get<std::uint64_t>(config, "seed", "plateau-v1");
    base.trials = get<std::size_t>(config, "trials", "plateau-v1");
    base.haar_mode = get_or<bool>(config, "haar_mode", true, "plateau-v1");
    base.layers = get_or<int>(config, "layers", 1, "plateau-v1");
    base.gradients = get_or<bool>(config, "gradients", true, "plateau-v1");
    const auto x = get_or<std::vector<double>>(config, "x", {}, "plateau-v1");

    RunOutput run(config, "plateau");
    std::string csv = "d,trials,mean_f,se_mean_f,var_f,predicted,zscore\n";
    json reports = json::array();
    std::vector<double> qubits;
    std::vector<double> f2;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        PlateauConfig cfg = base;
        cfg.num_vars = sizes[i][0];
        cfg.qubits_per_var = sizes[i][1];
        cfg.seed = Rng::derive(base.seed, i).next_u64();
        cfg.x = x.empty() ? std::vector<double>(static_cast<std::size_t>(cfg.num_vars), 0.0) : x;
        const auto r = plateau_stats(cfg);
        csv += format_double(r.d) + "," + std::to_string(r.trials) + "," +
               format_double(r.f.mean) + "," + format_double(r.f.se_mean) + "," +
               format_double(r.f.variance) + "," + format_double(r.predicted_f2) + "," +
               format_double(r.z_f2) + "\n";
        reports.push_back(to_json(r));
        qubits.push_back(cfg.num_vars * cfg.qubits_per_var);
        f2.push_back(r.f.mean_square);
    }
    json doc{{"reports", reports}};
    if (sizes.size() >= 2) {
        const auto fit = fit_decay(qubits, f2);
        doc["decay_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept},
                            {"alpha", fit.alpha}};
    }
    run.write("plateau.csv", csv);
    run.write("report.json", doc.dump(2) + "\n");
    out << csv;
    return kExitOk;
}

int cmd_resources(const std::string &config_path, std::ostream &out) {
    const json config = read_json_file(config_path);
    require_common(config, "resources-v1");
    require_keys_within(config,
                        {"version", "seed", "output_dir", "K", "M", "eps", "n_gt", "n_tp",
                         "ansatz"},
                        "resources-v1");
    const double K = get<double>(config, "K", "resources-v1");
    const int M = get<int>(config, "M", "resources-v1");
    const double eps = get<double>(config, "eps", "resources-v1");
    const auto n_gt = get<std::vector<std::uint64_t>>(config, "n_gt", "resources-v1");
    const auto n_tp = get_or<std::vector<std::uint64_t>>(config, "n_tp", n_gt, "resources-v1");
    if (n_tp.size() != n_gt.size()) {
        throw ArgumentError("resources-v1: n_tp must match n_gt in length");
    }

    RunOutput run(config, "resources");
    std::string csv =
        "n_gt,n_tp,eps,K,M,resrc_q,resrc_c,advantage,criterion_advantage,log_margin\n";
    json rows = json::array();
    auto add = [&](const ResourceReport &r) {
        csv += std::to_string(r.n_gt) + "," + std::to_string(r.n_tp) + "," +
               format_double(r.eps) + "," + format_double(r.K) + "," + std::to_string(r.M) +
               "," + format_double(r.resrc_q) + "," + format_double(r.resrc_c) + "," +
               (r.advantage ? "1" : "0") + "," + (r.criterion.advantage ? "1" : "0") + "," +
               format_double(r.criterion.log_margin) + "\n";
        rows.push_back(to_json(r));
    };
    for (std::size_t i = 0; i < n_gt.size(); ++i) {
        add(resource_report(n_gt[i], n_tp[i], eps, K, M));
    }
    json doc{{"rows", rows}};
    if (config.contains("ansatz")) {
        const json model = config.at("ansatz");
        require_keys_within(model, {"family", "ansatz", "preset"}, "ansatz");
        const auto report = resource_report(parse_quantum_model(model), eps);
        add(report);
        doc["ansatz_report"] = to_json(report);
    }
    run.write("resources.csv", csv);
    run.write("report.json", doc.dump(2) + "\n");
    out << csv;
    return kExitOk;
}

int cmd_bicone(const std::string &config_path, std::ostream &out) {
    const json config = read_json_file(config_path);
    require_common(config, "bicone-v1");
    require_keys_within(config,
                        {"version", "seed", "output_dir", "samples", "grid", "range", "band"},
                        "bicone-v1");
    const auto samples = get_or<std::size_t>(config, "samples", 100'000, "bicone-v1");
    const int grid = get_or<int>(config, "grid", 10'000, "bicone-v1");
    const double range = get_or<double>(config, "range", 1.5, "bicone-v1");
    const double band = get_or<double>(config, "band", 1e-3, "bicone-v1");
    if (samples < 1 || !(range > 0.0) || !(band >= 0.0)) {
        throw ArgumentError("bicone-v1: need samples >= 1, range > 0, band >= 0");
    }

    RunOutput run(config, "bicone");
    const MembershipGrid mg(FeatureMap{1, 1, std::nullopt}, grid);
    Rng rng(get<std::uint64_t>(config, "seed", "bicone-v1"));
    std::size_t agree = 0;
    std::size_t outside = 0;
    std::size_t agree_outside = 0;
    std::size_t disagree_outside_band = 0;
    std::string csv = "c1,c2,c3,analytic_gauge,grid_max,analytic,numerical\n";
    for (std::size_t s = 0; s < samples; ++s) {
        const std::array<double, 3> c{rng.uniform(-range, range), rng.uniform(-range, range),
                                      rng.uniform(-range, range)};
        const bool analytic = bicone_contains(c);
        const auto numeric = mg.check(c);
        const double gauge = bicone_gauge(c);
        const bool same = analytic == numeric.member;
        const bool in_band = std::abs(gauge - 1.0) <= band;
        agree += same ? 1 : 0;
        if (!in_band) {
            ++outside;
            agree_outside += same ? 1 : 0;
        }
        if (!same) {
            disagree_outside_band += in_band ? 0 : 1;
            csv += format_double(c[0]) + "," + format_double(c[1]) + "," + format_double(c[2]) +
                   "," + format_double(gauge) + "," + format_double(numeric.max_abs) + "," +
                   (analytic ? "1" : "0") + "," + (numeric.member ? "1" : "0") + "\n";
        }
    }
    const json summary{
        {"samples", samples},
        {"agreement_rate", static_cast<double>(agree) / static_cast<double>(samples)},
        {"agreement_rate_outside_band",
         outside ? static_cast<double>(agree_outside) / static_cast<double>(outside) : 1.0},
        {"disagreements", samples - agree},
        {"disagreements_outside_band", disagree_outside_band},
        {"band", band},
        {"grid", grid}};
    run.write("disagreements.csv", csv);
    run.write("summary.json", summary.dump(2) + "\n");
    out << summary.dump(2) << "\n";
    return kExitOk;
}

int exit_code_for(const std::exception &e, std::ostream &err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const CapacityError *>(&e)) {
        return kExitCapacity;
    }
    if (dynamic_cast<const TrainingError *>(&e)) {
        return kExitDiverged;
    }
    if (dynamic_cast<const ArgumentError *>(&e) || dynamic_cast<const ParseError *>(&e) ||
        dynamic_cast<const ValidationError *>(&e) || dynamic_cast<const IndexError *>(&e) ||
        dynamic_cast<const DomainError *>(&e) || dynamic_cast<const UnsupportedError *>(&e)) {
        return kExitUsage;
    }
    return kExitFailure;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Fourier-featured quantum and classical linear models"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 2 usage/config, 3 divergence, 4 capacity.\n"
               "FOURIER_QML_THREADS caps worker threads.");

    std::string weights;
    int exp_n = 0;
    std::string spectrum_out;
    auto *spectrum_cmd = app.add_subcommand("spectrum", "Frequency spectrum of an encoding");
    auto *w_opt = spectrum_cmd->add_option("--weights", weights,
                                           "Comma-separated positive integer weights");
    auto *e_opt = spectrum_cmd->add_option("--exp", exp_n, "Exponential weights 3^(n-1), n=1..N");
    w_opt->excludes(e_opt);
    spectrum_cmd->add_option("--out", spectrum_out, "Also write the JSON to this file");

    std::string config;
    auto add_config_cmd = [&](const char *name, const char *about, const char *help) {
        auto *cmd = app.add_subcommand(name, about);
        cmd->add_option("config", config, "JSON config file")->required();
        cmd->footer(help);
        return cmd;
    };
    auto *train_cmd = add_config_cmd("train", "Train one model", kTrainHelp);
    auto *compare_cmd =
        add_config_cmd("compare", "Paired CFFLM/QFFLM runs over r", kCompareHelp);
    auto *plateau_cmd = add_config_cmd("plateau", "Barren-plateau statistics", kPlateauHelp);
    auto *resources_cmd =
        add_config_cmd("resources", "Resource counts and advantage criterion", kResourcesHelp);
    auto *bicone_cmd = add_config_cmd("bicone", "Bicone membership Monte Carlo", kBiconeHelp);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        if (const auto *sub = app.get_subcommands().empty() ? nullptr
                                                            : app.get_subcommands().front()) {
            err << sub->help();
        } else {
            err << app.help();
        }
        return kExitUsage;
    }

    try {
        if (spectrum_cmd->parsed()) {
            if (exp_n == 0 && weights.empty()) {
                err << "error: spectrum needs --weights or --exp\n";
                return kExitUsage;
            }
            return cmd_spectrum(weights, exp_n, spectrum_out, out);
        }
        if (train_cmd->parsed()) {
            return cmd_train(config, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(config, out);
        }
        if (plateau_cmd->parsed()) {
            return cmd_plateau(config, out);
        }
        if (resources_cmd->parsed()) {
            return cmd_resources(config, out);
        }
        if (bicone_cmd->parsed()) {
            return cmd_bicone(config, out);
        }
    } catch (const std::exception &e) {
        return exit_code_for(e, err);
    }
    return kExitUsage;
}

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace fourierqml::cli
