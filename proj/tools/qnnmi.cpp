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
#include "qnnmi/errors.hpp"
#include "qnnmi/runner.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

namespace {

using namespace qnnmi;

struct Overrides {
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;
};

RunConfig load_with(const std::string &path, const Overrides &o) {
    auto cfg = load_config(path);
    if (o.runs) {
        cfg.runs = *o.runs;
    }
    if (o.seed) {
        cfg.base_seed = *o.seed;
    }
    if (o.out) {
        cfg.out_dir = *o.out;
    }
    if (o.workers) {
        cfg.workers = *o.workers;
    }
    cfg.validate();
    return cfg;
}

void print_final(const RunResult &run) {
    const auto &e = run.trace.epochs.back();
    const auto &m = run.mi.back();
    std::cout << "seed " << run.seed << ": epoch " << e.epoch << " loss " << e.mean_loss << " train_acc "
              << e.train_accuracy << " eval_acc " << run.eval_final.accuracy << " I(Di:Mo) "
              << clamp_mi(m.i_di_mo) << " I(Mi:Mo) " << clamp_mi(m.i_mi_mo) << "\n";
}

int run_cli(int argc, char **argv) {
    CLI::App app{"Mutual-information dynamics of quantum neural network classifiers"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "TOML or JSON config file")->required();
        cmd->add_option("--seed", ov.seed, "Seed (base seed for experiments)");
        cmd->add_option("--out", ov.out, "Output directory");
    };

    auto *train_cmd = app.add_subcommand("train", "Single training run");
    add_common(train_cmd);

    auto *exp_cmd = app.add_subcommand("experiment", "Multi-seed runs and aggregate");
    add_common(exp_cmd);
    exp_cmd->add_option("--runs", ov.runs, "Number of runs")->check(CLI::PositiveNumber);
    exp_cmd->add_option("--workers", ov.workers, "Concurrent runs")->check(CLI::PositiveNumber);
    bool exp_json = false;
    exp_cmd->add_flag("--json", exp_json, "Print the trend report as JSON");

    auto *analyze_cmd = app.add_subcommand("analyze", "Mutual information of a saved parameter snapshot");
    std::string theta_path;
    int epoch = -1;
    analyze_cmd->add_option("--config", config_path, "TOML or JSON config file")->required();
    analyze_cmd->add_option("--theta", theta_path, "theta_<seed>.csv from a run")->required();
    analyze_cmd->add_option("--epoch", epoch, "Snapshot epoch (default: last)");

    auto *sum_cmd = app.add_subcommand("summarize", "Trend report from an aggregate CSV");
    std::string aggregate_path;
    bool sum_json = false;
    sum_cmd->add_option("aggregate", aggregate_path, "aggregate.csv")->required();
    sum_cmd->add_flag("--json", sum_json, "Print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (train_cmd->parsed()) {
        auto cfg = load_with(config_path, ov);
        const std::uint64_t seeds[] = {cfg.base_seed};
        const auto result = run_experiment(cfg, seeds);
        print_final(result.runs.front());
        return kExitOk;
    }
    if (exp_cmd->parsed()) {
        const auto cfg = load_with(config_path, ov);
        const auto result = run_experiment(cfg);
        const auto report = summarize(result.aggregate);
        if (exp_json) {
            std::cout << report.to_json().dump(2) << "\n";
        } else {
            std::cout << result.runs.size() << " runs in " << result.wall_seconds << " s -> " << cfg.out_dir
                      << "\n"
                      << report.to_text();
        }
        return kExitOk;
    }
    if (analyze_cmd->parsed()) {
        const auto cfg = load_config(config_path);
        const auto theta = read_theta_snapshot(theta_path, epoch);
        const auto circuit = build_brickwall(cfg.ansatz);
        if (theta.size() != static_cast<std::size_t>(circuit.num_params())) {
            throw DataError(theta_path + ": expected " + std::to_string(circuit.num_params()) + " parameters, found " +
                            std::to_string(theta.size()));
        }
        const SubsystemPartition partition(cfg.ansatz.n, {cfg.ansatz.measured_qubit});
        const auto rec = mi_record(choi_state(circuit_unitary(circuit, theta)), partition, epoch);
        nlohmann::json out{{"I_Di_Mo", clamp_mi(rec.i_di_mo)},
                           {"I_Mi_Mo", clamp_mi(rec.i_mi_mo)},
                           {"raw", {{"I_Di_Mo", rec.i_di_mo}, {"I_Mi_Mo", rec.i_mi_mo}}}};
        const auto names = per_qubit_columns(partition);
        for (std::size_t k = 0; k < names.size(); ++k) {
            out[names[k]] = clamp_mi(rec.per_qubit[k]);
            out["raw"][names[k]] = rec.per_qubit[k];
        }
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    const auto report = summarize(read_aggregate_csv(aggregate_path));
    std::cout << (sum_json ? report.to_json().dump(2) + "\n" : report.to_text());
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run_cli(argc, argv);
    } catch (const qnnmi::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qnnmi::kExitConfig;
    } catch (const qnnmi::DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return qnnmi::kExitData;
    } catch (const qnnmi::NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return qnnmi::kExitNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qnnmi::kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return qnnmi::kExitNumerical;
    }
}
