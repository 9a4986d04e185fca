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
/**
 * @file
 * Experiment orchestration: configs, seeded runs, aggregation across runs,
 * result files, and trend summaries of aggregated curves.
 */
#pragma once

#include "qnnmi/circuit.hpp"
#include "qnnmi/datasets.hpp"
#include "qnnmi/infodyn.hpp"
#include "qnnmi/training.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qnnmi {

struct RunConfig {
    DatasetSpec dataset = DatasetSpec::standard(DatasetName::Iris2, "data/iris.data");
    double train_fraction = 0.8;
    AnsatzSpec ansatz;
    TrainConfig training;
    int runs = 50;
    std::uint64_t base_seed = 1;
    std::string out_dir = "results";
    int workers = 1;

    /// Throws ConfigError.
    void validate() const;

    [[nodiscard]] nlohmann::json to_json() const;

    /// Relative dataset paths resolve against base_dir. Throws ConfigError.
    static RunConfig from_json(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
};

/// Reads a .toml or .json config file. Throws ConfigError.
RunConfig load_config(const std::filesystem::path &path);

/// Everything one seeded run produces.
struct RunResult {
    std::uint64_t seed = 0;
    TrainingTrace trace;
    std::vector<MIRecord> mi;
    BatchScore eval_final;
};

/// Split, scale, encode, train and measure MI for one seed.
RunResult run_single(const RunConfig &config, const Dataset &data, std::uint64_t seed);

/// Column names shared by run and aggregate files:
/// loss, accuracy, I_Di_Mo, I_Mi_Mo, I_Di1_Mo, ...
std::vector<std::string> trace_columns(const AnsatzSpec &ansatz);

/// Per-epoch rows in trace_columns order, MI clamped at zero.
std::vector<std::vector<double>> trace_rows(const RunResult &run);

struct AggregateTrace {
    std::vector<std::string> columns;
    std::vector<int> epochs;
    std::vector<std::vector<double>> mean;  // [epoch][column]
    std::vector<std::vector<double>> std;   // population standard deviation
    std::size_t runs = 0;

    [[nodiscard]] std::size_t column(const std::string &name) const;
    [[nodiscard]] std::vector<double> mean_series(const std::string &name) const;
};

/// Welford fold in seed order; k identical runs reproduce the run exactly
/// with zero spread.
AggregateTrace aggregate(std::span<const RunResult> runs);

std::string run_csv(const RunResult &run, const AnsatzSpec &ansatz);
std::string theta_csv(const RunResult &run);
std::string aggregate_csv(const AggregateTrace &agg);
AggregateTrace parse_aggregate_csv(const std::string &text);
AggregateTrace read_aggregate_csv(const std::filesystem::path &path);

/// Reads the snapshot of one epoch (or the last one when epoch < 0) from a theta file.
std::vector<double> read_theta_snapshot(const std::filesystem::path &path, int epoch = -1);

struct ExperimentResult {
    AggregateTrace aggregate;
    std::vector<RunResult> runs;
    LoadReport load_report;
    double wall_seconds = 0.0;
};

/**
 * Runs config.runs seeds base_seed, base_seed+1, ..., writes run_<seed>.csv,
 * theta_<seed>.csv, aggregate.csv and manifest.json into config.out_dir.
 * A ".partial" marker exists in the directory until every run succeeded; a
 * failing run is rethrown with its seed in the message.
 */
ExperimentResult run_experiment(const RunConfig &config);

/// Same, with an explicit seed list (may repeat seeds).
ExperimentResult run_experiment(const RunConfig &config, std::span<const std::uint64_t> seeds);

/// In-memory variant without file output.
std::vector<RunResult> run_seeds(const RunConfig &config, const Dataset &data,
                                 std::span<const std::uint64_t> seeds);

struct TrendReport {
    std::size_t epochs = 0;
    double initial_i_di_mo = 0.0;
    double final_i_di_mo = 0.0;
    double delta_i_di_mo = 0.0;
    double spearman_i_di_mo = 0.0;
    int peak_epoch_i_mi_mo = 0;
    double peak_i_mi_mo = 0.0;
    double final_i_mi_mo = 0.0;
    double drop_i_mi_mo = 0.0;
    bool two_phase = false;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double delta_loss = 0.0;
    bool loss_monotone_smoothed = false;
    double final_accuracy = 0.0;
    double per_qubit_sum_final = 0.0;

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] std::string to_text() const;
};

inline constexpr double kTwoPhaseDrop = 0.02;
inline constexpr std::size_t kLossSmoothingWindow = 5;

/// Needs at least 3 epochs. two_phase = peak strictly interior and drop > threshold.
TrendReport summarize(const AggregateTrace &agg, double two_phase_threshold = kTwoPhaseDrop);

/// Spearman rank correlation of a series with its index (ties get average ranks).
double spearman_with_index(std::span<const double> series);

/// Centered moving average, "valid" mode: output length = size - window + 1.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

bool non_increasing(std::span<const double> series);

}  // namespace qnnmi
