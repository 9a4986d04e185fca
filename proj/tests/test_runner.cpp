// Copyright 2026 The qnnmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qnnmi/runner.hpp"

#include "qnnmi/errors.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace qnnmi {
namespace {

namespace fs = std::filesystem;

const std::string kData = QNNMI_DATA_DIR;

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "qnnmi_test_runner" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig small_iris(const fs::path &out, int epochs = 8) {
    RunConfig c;
    c.dataset = DatasetSpec::standard(DatasetName::Iris2, kData + "/iris.data");
    c.training.epochs = epochs;
    c.training.learning_rate = 0.05;
    c.runs = 2;
    c.out_dir = out.string();
    return c;
}

AggregateTrace synthetic(const std::vector<double> &mi, const std::vector<double> &loss) {
    AggregateTrace agg;
    agg.columns = {"loss", "accuracy", "I_Di_Mo", "I_Mi_Mo"};
    agg.runs = 1;
    for (std::size_t e = 0; e < mi.size(); ++e) {
        agg.epochs.push_back(static_cast<int>(e));
        agg.mean.push_back({loss[e], 0.5, 0.01 * static_cast<double>(e), mi[e]});
        agg.std.push_back({0.0, 0.0, 0.0, 0.0});
    }
    return agg;
}

TEST(Config, TomlAndJsonAgree) {
    const auto dir = scratch("config");
    std::ofstream(dir / "c.toml") << "runs = 3\nbase_seed = 7\nout = \"o\"\n[dataset]\nname = \"bcw\"\npath = \"x.data\"\n"
                                     "[ansatz]\nmeasured_qubit = 2\n[training]\nepochs = 12\nlearning_rate = 0.05\n"
                                     "gradient = \"central-diff\"\nbackend = \"serial\"\n";
    std::ofstream(dir / "c.json") << R"({"runs": 3, "base_seed": 7, "out": "o",
        "dataset": {"name": "bcw", "path": "x.data"},
        "ansatz": {"measured_qubit": 2},
        "training": {"epochs": 12, "learning_rate": 0.05, "gradient": "central-diff", "backend": "serial"}})";
    const auto a = load_config(dir / "c.toml");
    const auto b = load_config(dir / "c.json");
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_EQ(a.runs, 3);
    EXPECT_EQ(a.base_seed, 7U);
    EXPECT_EQ(a.dataset.encoding, EncodingMethod::Amplitude);
    EXPECT_EQ(a.ansatz.measured_qubit, 2);
    EXPECT_EQ(a.training.gradient, GradientMethod::CentralDiff);
    EXPECT_EQ(a.training.backend, kernels::Backend::Serial);
    EXPECT_EQ(fs::path(a.dataset.path), (dir / "x.data").lexically_normal());
}

TEST(Config, RejectsInvalidContent) {
    const auto dir = scratch("config_bad");
    auto expect_config_error = [&](const std::string &file, const std::string &text) {
        std::ofstream(dir / file) << text;
        EXPECT_THROW(load_config(dir / file), ConfigError) << text;
    };
    const std::string ds = "[dataset]\nname = \"iris2\"\npath = \"x\"\n";
    expect_config_error("a.toml", "runs = 0\n" + ds);
    expect_config_error("b.toml", "typo = 1\n" + ds);
    expect_config_error("c.toml", ds + "[training]\nepochs = 0\n");
    expect_config_error("d.toml", ds + "[training]\ngradient = \"adjoint\"\n");
    expect_config_error("e.toml", "[dataset]\nname = \"iris2\"\npath = \"x\"\nencoding = \"amplitude\"\n");
    expect_config_error("f.toml", ds + "[ansatz]\nmeasured_qubit = 4\n");
    expect_config_error("g.toml", "runs = \n");
    expect_config_error("h.json", "{\"runs\": 2}");
    expect_config_error("i.yaml", "runs: 2\n");
    EXPECT_THROW(load_config(dir / "missing.toml"), ConfigError);
}

TEST(Aggregate, SingleRunHasZeroSpread) {
    const auto cfg = small_iris(scratch("single"));
    const auto data = load_dataset(cfg.dataset);
    const std::uint64_t seeds[] = {3};
    const auto runs = run_seeds(cfg, data, seeds);
    const auto agg = aggregate(runs);
    const auto rows = trace_rows(runs.front());
    ASSERT_EQ(agg.mean.size(), rows.size());
    for (std::size_t e = 0; e < rows.size(); ++e) {
        EXPECT_EQ(agg.mean[e], rows[e]);
        for (const double s : agg.std[e]) {
            EXPECT_EQ(s, 0.0);
        }
    }
}

TEST(Aggregate, IdenticalSeedsGiveExactMeanAndZeroStd) {
    const auto cfg = small_iris(scratch("identical"));
    const auto data = load_dataset(cfg.dataset);
    const std::uint64_t seeds[] = {4, 4, 4};
    const auto runs = run_seeds(cfg, data, seeds);
    const auto agg = aggregate(runs);
    const auto rows = trace_rows(runs.front());
    for (std::size_t e = 0; e < rows.size(); ++e) {
        EXPECT_EQ(agg.mean[e], rows[e]);
        for (const double s : agg.std[e]) {
            EXPECT_EQ(s, 0.0);
        }
    }
}

TEST(Aggregate, MeanAndPopulationStd) {
    const auto cfg = small_iris(scratch("meanstd"), 3);
    const auto data = load_dataset(cfg.dataset);
    const std::uint64_t seeds[] = {1, 2};
    const auto runs = run_seeds(cfg, data, seeds);
    const auto agg = aggregate(runs);
    const auto a = trace_rows(runs[0]);
    const auto b = trace_rows(runs[1]);
    for (std::size_t e = 0; e < a.size(); ++e) {
        for (std::size_t c = 0; c < a[e].size(); ++c) {
            EXPECT_NEAR(agg.mean[e][c], 0.5 * (a[e][c] + b[e][c]), 1e-15);
            EXPECT_NEAR(agg.std[e][c], 0.5 * std::abs(a[e][c] - b[e][c]), 1e-15);
            EXPECT_GE(agg.std[e][c], 0.0);
        }
    }
}

TEST(Experiment, WritesFilesAndIsByteReproducible) {
    const auto d1 = scratch("exp1");
    const auto d2 = scratch("exp2");
    auto cfg = small_iris(d1);
    cfg.workers = 2;
    const auto r1 = run_experiment(cfg);
    cfg.out_dir = d2.string();
    cfg.workers = 1;
    run_experiment(cfg);
    for (const auto *f : {"aggregate.csv", "run_1.csv", "run_2.csv", "theta_1.csv", "theta_2.csv"}) {
        EXPECT_TRUE(fs::exists(d1 / f)) << f;
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    }
    EXPECT_FALSE(fs::exists(d1 / ".partial"));
    const auto header = slurp(d1 / "run_1.csv").substr(0, slurp(d1 / "run_1.csv").find('\n'));
    EXPECT_EQ(header, "epoch,loss,accuracy,I_Di_Mo,I_Mi_Mo,I_Di1_Mo,I_Di2_Mo,I_Di3_Mo");

    const auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    EXPECT_EQ(manifest["config"]["runs"], 2);
    EXPECT_EQ(manifest["dataset"]["rows_kept"], 100);
    EXPECT_EQ(manifest["fixture_sha256"], "36f668d1cbc29a8c2c1128c5d2f0d400fa04ed4dc62d12246f44ce9360360cc0");
    EXPECT_EQ(manifest["circuit"]["gates"].size(), 26U);
    EXPECT_TRUE(manifest.contains("wall_seconds"));

    const auto back = read_aggregate_csv(d1 / "aggregate.csv");
    EXPECT_EQ(back.columns, r1.aggregate.columns);
    EXPECT_EQ(back.mean, r1.aggregate.mean);
    EXPECT_EQ(back.std, r1.aggregate.std);

    const auto last = read_theta_snapshot(d1 / "theta_1.csv");
    EXPECT_EQ(last, r1.runs[0].trace.epochs.back().theta_snapshot);
    EXPECT_EQ(read_theta_snapshot(d1 / "theta_1.csv", 0), r1.runs[0].trace.epochs.front().theta_snapshot);
    EXPECT_THROW(read_theta_snapshot(d1 / "theta_1.csv", 999), DataError);
}

TEST(Experiment, FailingRunNamesSeedAndLeavesMarker) {
    const auto dir = scratch("fail");
    auto cfg = small_iris(dir);
    cfg.train_fraction = 0.001;
    try {
        run_experiment(cfg);
        FAIL() << "expected failure";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("seed 1"), std::string::npos) << e.what();
    }
    EXPECT_TRUE(fs::exists(dir / ".partial"));
}

TEST(Experiment, MissingDataIsDataError) {
    auto cfg = small_iris(scratch("nodata"));
    cfg.dataset.path = kData + "/nope.data";
    EXPECT_THROW(run_experiment(cfg), DataError);
}

TEST(Summarize, IncreasingSeriesIsNotTwoPhase) {
    std::vector<double> mi;
    std::vector<double> loss;
    for (int e = 0; e <= 20; ++e) {
        mi.push_back(0.1 * e);
        loss.push_back(1.0 - 0.01 * e);
    }
    const auto r = summarize(synthetic(mi, loss));
    EXPECT_EQ(r.peak_epoch_i_mi_mo, 20);
    EXPECT_FALSE(r.two_phase);
    EXPECT_TRUE(r.loss_monotone_smoothed);
    EXPECT_NEAR(r.delta_loss, -0.2, 1e-12);
    EXPECT_NEAR(r.delta_i_di_mo, 0.2, 1e-12);
    EXPECT_NEAR(r.spearman_i_di_mo, 1.0, 1e-12);
}

TEST(Summarize, TentSeriesPeaksInside) {
    std::vector<double> mi;
    std::vector<double> loss(31, 1.0);
    for (int e = 0; e <= 30; ++e) {
        mi.push_back(e <= 10 ? 0.05 * e : 0.5 - 0.02 * (e - 10));
    }
    loss[12] = 1.5;
    const auto r = summarize(synthetic(mi, loss));
    EXPECT_EQ(r.peak_epoch_i_mi_mo, 10);
    EXPECT_TRUE(r.two_phase);
    EXPECT_NEAR(r.drop_i_mi_mo, 0.4, 1e-12);
    EXPECT_FALSE(r.loss_monotone_smoothed);
}

TEST(Summarize, SmallDropDoesNotCount) {
    std::vector<double> mi{0.0, 0.5, 0.49};
    std::vector<double> loss{1.0, 0.9, 0.8};
    EXPECT_FALSE(summarize(synthetic(mi, loss)).two_phase);
    EXPECT_THROW(summarize(synthetic({0.0, 1.0}, {1.0, 0.5})), std::invalid_argument);
}

TEST(Trends, Helpers) {
    const std::vector<double> up{1, 2, 3, 4};
    const std::vector<double> down{4, 3, 2, 1};
    const std::vector<double> flat{2, 2, 2};
    EXPECT_NEAR(spearman_with_index(up), 1.0, 1e-15);
    EXPECT_NEAR(spearman_with_index(down), -1.0, 1e-15);
    EXPECT_EQ(spearman_with_index(flat), 0.0);
    const std::vector<double> tied{1, 1, 2, 3};
    EXPECT_NEAR(spearman_with_index(tied), 0.9486832980505138, 1e-12);

    const std::vector<double> series{1, 2, 3, 4, 5, 6};
    EXPECT_EQ(moving_average(series, 5), (std::vector<double>{3, 4}));
    EXPECT_TRUE(moving_average(series, 7).empty());
    EXPECT_TRUE(non_increasing(down));
    EXPECT_TRUE(non_increasing(flat));
    EXPECT_FALSE(non_increasing(up));
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(QNNMI_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli");
    std::ofstream(dir / "ok.toml") << "runs = 1\nout = \"" << (dir / "out").string() << "\"\n[dataset]\nname = \"iris2\"\npath = \""
                                   << kData << "/iris.data\"\n[training]\nepochs = 3\n";
    std::ofstream(dir / "nodata.toml") << "[dataset]\nname = \"iris2\"\npath = \"missing.data\"\n";
    std::ofstream(dir / "bad.toml") << "[dataset]\nname = \"iris3\"\npath = \"x\"\n";

    EXPECT_EQ(run_cli("train --config " + (dir / "ok.toml").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "run_1.csv"));
    EXPECT_EQ(run_cli("experiment --config " + (dir / "ok.toml").string() + " --runs 2 --seed 5 --workers 2"), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "run_6.csv"));
    EXPECT_EQ(run_cli("summarize " + (dir / "out" / "aggregate.csv").string()), 0);
    EXPECT_EQ(run_cli("analyze --config " + (dir / "ok.toml").string() + " --theta " +
                      (dir / "out" / "theta_5.csv").string() + " --epoch 2"),
              0);

    EXPECT_EQ(run_cli("experiment --config " + (dir / "bad.toml").string()), 2);
    EXPECT_EQ(run_cli("experiment --config " + (dir / "absent.toml").string()), 2);
    EXPECT_EQ(run_cli("experiment --config " + (dir / "ok.toml").string() + " --runs 0"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("experiment --config " + (dir / "nodata.toml").string()), 3);
    EXPECT_EQ(run_cli("summarize " + (dir / "ok.toml").string()), 3);
}

}  // namespace
}  // namespace qnnmi
