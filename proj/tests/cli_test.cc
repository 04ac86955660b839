// Copyright 2026 The cxc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cxc/circuit.h"
#include "cxc/estimate.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cxc;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cxc");
    std::vector<const char *> argv;
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string read(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string drop_first_line(const std::string &s) { return s.substr(s.find('\n') + 1); }

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("cxc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string out() const { return dir_.string(); }
    fs::path dir_;
};

TEST(Fnv, KnownVectors) {
    EXPECT_EQ(cli::fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(cli::fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(cli::hex64(0xabcULL), "0000000000000abc");
}

TEST_F(CliTest, SearchTinyTable) {
    CliRun r = cli({"--out", out(), "search", "--n-max", "7", "--w-min", "2", "--w-max", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string csv = read(dir_ / "search_tables.csv");
    EXPECT_EQ(csv.rfind("# config ", 0), 0u);
    // Only repetition codes [n,1,n] exist at weight 2.
    std::istringstream in(drop_first_line(csv));
    std::string line;
    std::getline(in, line);
    size_t rows = 0;
    while (std::getline(in, line)) {
        rows++;
        EXPECT_NE(line.find(",1," + std::to_string(rows + 1) + ","), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 6u);
    nlohmann::json j = nlohmann::json::parse(read(dir_ / "search_codes.json"));
    EXPECT_EQ(j["codes"].size(), 6u);
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(cli({"search", "--w-min", "4", "--w-max", "3"}).code, cli::kUsage);
    EXPECT_EQ(cli({"search", "--bogus"}).code, cli::kUsage);
    EXPECT_EQ(cli({}).code, cli::kUsage);
    EXPECT_EQ(cli({"build", "--family", "c3", "--seed-a", "15:0,1,4"}).code, cli::kUsage);
    EXPECT_EQ(cli({"build", "--family", "cxc", "--seed-a", "5:0,1"}).code, cli::kUsage);
    EXPECT_EQ(cli({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, BuildReferenceCodes) {
    CliRun c2 = cli({"--out", out(), "build", "--family", "c2", "--seed-a", "15:0,1,4"});
    ASSERT_EQ(c2.code, 0) << c2.err;
    EXPECT_EQ(c2.out.substr(0, c2.out.find(' ')), "[[450,32,8]]");
    CliRun cxr = cli({"--out", out(), "build", "--family", "CxR", "--seed-a", "28:0,2,4,10"});
    EXPECT_EQ(cxr.out.substr(0, cxr.out.find(' ')), "[[336,20,6]]");
    CliRun toric = cli({"--out", out(), "build", "--family", "cxc", "--seed-a", "5:0,1", "--seed-b", "5:0,1"});
    EXPECT_EQ(toric.out.substr(0, toric.out.find(' ')), "[[50,2,5]]");
    nlohmann::json j = nlohmann::json::parse(read(dir_ / "code.json"));
    EXPECT_EQ(j["codes"][0]["n"], 50);
}

TEST_F(CliTest, BuildCapExceeded) {
    CliRun r = cli({"--out", out(), "build", "--family", "cxr", "--seed-a", "15:0,1,4", "--codeword-cap", "3"});
    EXPECT_EQ(r.code, cli::kCapExceeded) << r.err;
}

TEST_F(CliTest, CircuitLayerCounts) {
    CliRun modular = cli({"--out", out(), "circuit", "--code", "toric:2", "--variant", "modular", "--rounds", "2"});
    ASSERT_EQ(modular.code, 0) << modular.err;
    Circuit c = parse_text(drop_first_line(read(dir_ / "circuit.txt")));
    EXPECT_EQ(circuit_depth(c), 25u);
    CliRun packed = cli({"--out", out(), "circuit", "--code", "[[240,8,8]]", "--rounds", "8"});
    ASSERT_EQ(packed.code, 0) << packed.err;
    EXPECT_NE(packed.out.find("layers=60"), std::string::npos);
    EXPECT_EQ(circuit_depth(parse_text(drop_first_line(read(dir_ / "circuit.txt")))), 60u);
    EXPECT_EQ(cli({"--out", out(), "circuit", "--code", "no-such-code"}).code, cli::kValidation);
    CliRun stim = cli({"--out", out(), "circuit", "--code", "toric:3", "--format", "stim", "--p", "0.001"});
    ASSERT_EQ(stim.code, 0) << stim.err;
    std::string text = read(dir_ / "circuit.stim");
    EXPECT_NE(text.find("DEPOLARIZE2(0.001)"), std::string::npos);
    EXPECT_NE(text.find("DETECTOR"), std::string::npos);
}

TEST_F(CliTest, CircuitFromCatalog) {
    ASSERT_EQ(cli({"--out", out(), "build", "--family", "cxc", "--seed-a", "3:0,1", "--seed-b", "4:0,1"}).code, 0);
    std::string catalog = (dir_ / "code.json").string();
    CliRun r = cli({"--out", out(), "circuit", "--catalog", catalog, "--code", "[[24,2,3]]", "--rounds", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, SimulateNoiselessAndDeterministic) {
    CliRun zero = cli({"--out", out(), "simulate", "--code", "toric:3", "--rounds", "2", "--p", "0", "--shots", "500"});
    ASSERT_EQ(zero.code, 0) << zero.err;
    std::vector<RatePoint> pts = parse_results_csv(read(dir_ / "results.csv"));
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(pts[0].failures, 0u);

    std::vector<std::string> args = {"--seed", "9",   "--out",  out(),       "simulate", "--code",
                                     "toric:3", "--rounds", "2", "--p", "0.01", "--shots", "600", "--max-iter", "50"};
    ASSERT_EQ(cli(args).code, 0);
    std::string first = read(dir_ / "results.csv");
    args.insert(args.begin(), {"--workers", "3"});
    ASSERT_EQ(cli(args).code, 0);
    EXPECT_EQ(read(dir_ / "results.csv"), first);
    args[3] = "10";  // different seed
    ASSERT_EQ(cli(args).code, 0);
    EXPECT_NE(drop_first_line(read(dir_ / "results.csv")), drop_first_line(first));
}

TEST_F(CliTest, SimulateSweepIsMonotone) {
    CliRun r = cli({"--out", out(), "simulate", "--code", "toric:3", "--rounds", "3", "--p", "3e-3,1e-2,3e-2", "--shots",
                 "3000", "--max-iter", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::vector<RatePoint> pts = parse_results_csv(read(dir_ / "results.csv"));
    ASSERT_EQ(pts.size(), 3u);
    for (size_t i = 1; i < pts.size(); i++) {
        // Nondecreasing within the confidence intervals.
        EXPECT_GE(pts[i].ci_hi, pts[i - 1].ci_lo);
        EXPECT_GE(pts[i].p_log_round, pts[i - 1].p_log_round);
    }
}

TEST_F(CliTest, ConfigFileOverridesFlags) {
    fs::path config = dir_ / "run.json";
    std::ofstream(config) << R"({"seed": 5, "p": [0.02], "shots": 400, "decoder": {"max_iter": 20, "osd_order": 2}})";
    CliRun a = cli({"--config", config.string(), "--seed", "77", "--out", out(), "simulate", "--code", "toric:3",
                 "--rounds", "2", "--p", "0.5"});
    ASSERT_EQ(a.code, 0) << a.err;
    std::string with_file = read(dir_ / "results.csv");
    EXPECT_NE(with_file.find("\"seed\":5"), std::string::npos);
    EXPECT_NE(with_file.find("\"max_iter\":20"), std::string::npos);
    CliRun b = cli({"--seed", "5", "--out", out(), "simulate", "--code", "toric:3", "--rounds", "2", "--p", "0.02",
                 "--shots", "400", "--max-iter", "20", "--osd-order", "2"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(read(dir_ / "results.csv"), with_file);

    std::ofstream(config) << R"({"nonsense": 1})";
    EXPECT_EQ(cli({"--config", config.string(), "simulate", "--code", "toric:3", "--p", "0.01"}).code, cli::kUsage);
}

TEST_F(CliTest, FitSyntheticData) {
    HeuristicFit truth;
    truth.alpha = 10;
    truth.beta = 100;
    truth.gamma = -1000;
    truth.d = 6;
    std::vector<RatePoint> pts;
    for (double p : {1e-3, 2e-3, 4e-3}) {
        RatePoint pt;
        pt.code = "[[x]]";
        pt.p = p;
        pt.p_log_round = heuristic_rate(p, truth);
        pts.push_back(pt);
    }
    fs::path csv = dir_ / "synthetic.csv";
    std::ofstream(csv) << results_csv(pts);
    CliRun r = cli({"--out", out(), "fit", "--results", csv.string(), "--d", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    nlohmann::json j = nlohmann::json::parse(read(dir_ / "fit.json"));
    EXPECT_NEAR(j["fit"]["alpha"].get<double>(), 10, 1e-6);
    EXPECT_NEAR(j["fit"]["beta"].get<double>(), 100, 1e-3);
    EXPECT_NEAR(j["fit"]["gamma"].get<double>(), -1000, 1);

    pts.pop_back();
    std::ofstream(csv) << results_csv(pts);
    EXPECT_EQ(cli({"--out", out(), "fit", "--results", csv.string(), "--d", "6"}).code, cli::kValidation);
    EXPECT_EQ(cli({"--out", out(), "fit", "--results", (dir_ / "missing.csv").string(), "--d", "6"}).code,
              cli::kValidation);
}

TEST_F(CliTest, PipelineEndToEnd) {
    auto start = std::chrono::steady_clock::now();
    ASSERT_EQ(cli({"--out", out(), "search", "--n-max", "6", "--w-max", "3"}).code, 0);
    ASSERT_EQ(cli({"--out", out(), "build", "--family", "cxc", "--seed-a", "3:0,1", "--seed-b", "3:0,1"}).code, 0);
    std::string catalog = (dir_ / "code.json").string();
    ASSERT_EQ(cli({"--out", out(), "circuit", "--catalog", catalog, "--code", "[[18,2,3]]", "--rounds", "3"}).code, 0);
    CliRun sim = cli({"--out", out(), "simulate", "--catalog", catalog, "--code", "[[18,2,3]]", "--rounds", "3", "--p",
                   "5e-4,1e-3,2e-3", "--shots", "10000"});
    ASSERT_EQ(sim.code, 0) << sim.err;
    CliRun fit = cli({"--out", out(), "fit", "--results", (dir_ / "results.csv").string(), "--d", "3"});
    ASSERT_EQ(fit.code, 0) << fit.err;
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(seconds, 60.0);
    nlohmann::json j = nlohmann::json::parse(read(dir_ / "fit.json"));
    EXPECT_EQ(j["fit"]["code"], "[[18,2,3]]");
}

}  // namespace
