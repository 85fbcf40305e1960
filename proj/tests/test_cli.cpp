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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "fourierqml/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = fourierqml::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "fourierqml_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path &dir, const json &config) {
    const auto path = dir / "input.json";
    std::ofstream(path) << config.dump(2);
    return path.string();
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string &text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

json fig3_quantum(const fs::path &out_dir) {
    return {{"version", "train-v1"},
            {"seed", 7},
            {"output_dir", out_dir.string()},
            {"model",
             {{"family", "qfflm"},
              {"preset", {{"kind", "exponential"}, {"M", 1}, {"N", 4}, {"L", 1}}}}},
            {"target",
             {{"kind", "random_fourier"},
              {"kappa", 81},
              {"split", 64},
              {"r", 0.05},
              {"seed", 3},
              {"n_points", 200}}},
            {"optimizer", {{"kind", "adam"}, {"lr", 0.03}}},
            {"steps", 500}};
}

} // namespace

TEST_CASE("spectrum command", "[cli]") {
    const auto exp3 = run({"spectrum", "--exp", "3"});
    REQUIRE(exp3.code == cli::kExitOk);
    const auto doc = json::parse(exp3.out);
    CHECK(doc.at("d_F") == 13);
    CHECK(doc.at("distinct") == 27);
    CHECK(doc.at("dense") == true);
    CHECK(doc.at("nondegenerate") == true);
    for (const char *key : {"weights", "support", "multiplicity"}) {
        CHECK(doc.contains(key));
    }

    const auto naive = run({"spectrum", "--weights", "1,1,1"});
    REQUIRE(naive.code == cli::kExitOk);
    CHECK(json::parse(naive.out).at("distinct") == 7);

    CHECK(run({"spectrum", "--weights", "0,1"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--weights", "1,x"}).code == cli::kExitUsage);
    CHECK(run({"spectrum"}).code == cli::kExitUsage);
    CHECK(run({"spectrum", "--exp", "3", "--weights", "1"}).code == cli::kExitUsage);
    CHECK(run({"nonsense"}).code == cli::kExitUsage);
    CHECK(run({}).code == cli::kExitUsage);

    const auto dir = scratch("spectrum");
    const auto file = dir / "s.json";
    REQUIRE(run({"spectrum", "--exp", "2", "--out", file.string()}).code == cli::kExitOk);
    CHECK(json::parse(slurp(file)).at("d_F") == 4);
}

TEST_CASE("help documents every subcommand", "[cli]") {
    const auto top = run({"--help"});
    CHECK(top.code == cli::kExitOk);
    for (const char *cmd : {"spectrum", "train", "compare", "plateau", "resources", "bicone"}) {
        CHECK(top.out.find(cmd) != std::string::npos);
    }
    const auto train = run({"train", "--help"});
    CHECK(train.code == cli::kExitOk);
    CHECK(train.out.find("train-v1") != std::string::npos);
}

TEST_CASE("train command reproduces runs byte for byte", "[cli][slow]") {
    const auto dir_a = scratch("train_a");
    const auto dir_b = scratch("train_b");
    const auto a = run({"train", write_config(dir_a, fig3_quantum(dir_a / "out"))});
    REQUIRE(a.code == cli::kExitOk);
    const auto b = run({"train", write_config(dir_b, fig3_quantum(dir_a / "out_b"))});
    REQUIRE(b.code == cli::kExitOk);

    const auto trace = slurp(dir_a / "out" / "trace.csv");
    CHECK(line_count(trace) == 501);
    CHECK(trace.rfind("step,train_loss,test_loss\n", 0) == 0);
    CHECK(trace == slurp(dir_a / "out_b" / "trace.csv"));
    CHECK(slurp(dir_a / "out" / "result.json") == slurp(dir_a / "out_b" / "result.json"));
    CHECK(fs::exists(dir_a / "out" / "config.json"));
    const auto log = slurp(dir_a / "out" / "run.log");
    CHECK(log.find("wall_ms") != std::string::npos);

    const auto result = json::parse(slurp(dir_a / "out" / "result.json"));
    CHECK(result.at("loss_trace").size() == 500);
    CHECK(result.at("resource_counters").at("N_tp") == 16);
    CHECK_FALSE(result.contains("wall_ms"));
}

TEST_CASE("train command rejects bad configs", "[cli]") {
    const auto dir = scratch("train_bad");
    auto missing = fig3_quantum(dir / "out");
    missing.erase("target");
    CHECK(run({"train", write_config(dir, missing)}).code == cli::kExitUsage);

    auto unknown = fig3_quantum(dir / "out");
    unknown["flavour"] = 1;
    CHECK(run({"train", write_config(dir, unknown)}).code == cli::kExitUsage);

    auto version = fig3_quantum(dir / "out");
    version["version"] = "train-v9";
    CHECK(run({"train", write_config(dir, version)}).code == cli::kExitUsage);

    CHECK(run({"train", (dir / "absent.json").string()}).code == cli::kExitUsage);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run({"train", (dir / "broken.json").string()}).code == cli::kExitUsage);

    auto big = fig3_quantum(dir / "out");
    big["model"]["preset"]["M"] = 5;
    big["model"]["preset"]["N"] = 5;
    big["target"] = {{"kind", "step"}, {"n_points", 10}};
    CHECK(run({"train", write_config(dir, big)}).code == cli::kExitCapacity);
}

TEST_CASE("train command reports divergence", "[cli]") {
    const auto dir = scratch("train_diverge");
    const json config{{"version", "train-v1"},
                      {"seed", 1},
                      {"output_dir", (dir / "out").string()},
                      {"model", {{"family", "cfflm"}, {"M", 1}, {"d_F", 3}}},
                      {"target", {{"kind", "step"}, {"n_points", 20}}},
                      {"optimizer", {{"kind", "gd"}, {"lr", 50.0}}},
                      {"steps", 200}};
    const auto r = run({"train", write_config(dir, config)});
    CHECK(r.code == cli::kExitDiverged);
    const auto trace = slurp(dir / "out" / "trace.csv");
    CHECK(line_count(trace) > 1);
    CHECK(line_count(trace) < 201);
}

TEST_CASE("compare command", "[cli][slow]") {
    const auto dir = scratch("compare");
    json config{{"version", "compare-v1"},
                {"seed", 2},
                {"output_dir", (dir / "out").string()},
                {"ratios", {0.05, 55.5}},
                {"runs", 2},
                {"n_points", 90},
                {"steps", 5}};
    REQUIRE(run({"compare", write_config(dir, config)}).code == cli::kExitOk);
    const auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary.dump().find("saturated") != std::string::npos);
    std::size_t traces = 0;
    for ([[maybe_unused]] const auto &entry : fs::directory_iterator(dir / "out" / "traces")) {
        ++traces;
    }
    CHECK(traces == 2 * 2 * 2);
    const auto combined = slurp(dir / "out" / "combined.csv");
    CHECK(combined.rfind("r,model,run,step,loss", 0) == 0);
    CHECK(line_count(combined) == 1 + 2 * 2 * 2 * 5);

    config["runs"] = 0;
    CHECK(run({"compare", write_config(dir, config)}).code == cli::kExitUsage);
}

TEST_CASE("plateau command", "[cli]") {
    const auto dir = scratch("plateau");
    const json config{{"version", "plateau-v1"},
                      {"seed", 4},
                      {"output_dir", (dir / "out").string()},
                      {"sizes", {{1, 2}, {1, 3}}},
                      {"trials", 2000},
                      {"haar_mode", true}};
    REQUIRE(run({"plateau", write_config(dir, config)}).code == cli::kExitOk);
    const auto csv = slurp(dir / "out" / "plateau.csv");
    CHECK(csv.rfind("d,trials,mean_f,se_mean_f,var_f,predicted,zscore\n", 0) == 0);
    CHECK(line_count(csv) == 3);
    CHECK(csv.find("\n4,2000,") != std::string::npos);
    CHECK(csv.find(",0.20000000000000001,") != std::string::npos);
    const auto report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report.contains("decay_fit"));

    const auto first = slurp(dir / "out" / "report.json");
    REQUIRE(run({"plateau", write_config(dir, config)}).code == cli::kExitOk);
    CHECK(slurp(dir / "out" / "report.json") == first);

    auto too_big = config;
    too_big["sizes"] = {{3, 4}};
    CHECK(run({"plateau", write_config(dir, too_big)}).code == cli::kExitCapacity);
    auto few = config;
    few["trials"] = 10;
    CHECK(run({"plateau", write_config(dir, few)}).code == cli::kExitUsage);
}

TEST_CASE("resources command", "[cli]") {
    const auto dir = scratch("resources");
    const json config{{"version", "resources-v1"},
                      {"seed", 0},
                      {"output_dir", (dir / "out").string()},
                      {"K", 81},
                      {"M", 1},
                      {"eps", 0.5},
                      {"n_gt", {2, 4, 10, 100}},
                      {"ansatz",
                       {{"family", "qfflm"},
                        {"preset", {{"kind", "exponential"}, {"M", 1}, {"N", 4}, {"L", 1}}}}}};
    REQUIRE(run({"resources", write_config(dir, config)}).code == cli::kExitOk);
    const auto csv = slurp(dir / "out" / "resources.csv");
    CHECK(line_count(csv) == 1 + 4 + 1);
    const auto report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report.dump().find("244") != std::string::npos);

    auto bad = config;
    bad["eps"] = 0.0;
    CHECK(run({"resources", write_config(dir, bad)}).code == cli::kExitUsage);
}

TEST_CASE("bicone command", "[cli]") {
    const auto dir = scratch("bicone");
    const json config{{"version", "bicone-v1"},
                      {"seed", 5},
                      {"output_dir", (dir / "out").string()},
                      {"samples", 5000},
                      {"grid", 2000}};
    REQUIRE(run({"bicone", write_config(dir, config)}).code == cli::kExitOk);
    const auto summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary.dump().find("agreement") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "disagreements.csv"));
    auto bad = config;
    bad["grid"] = 4;
    CHECK(run({"bicone", write_config(dir, bad)}).code == cli::kExitUsage);
}
