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
 * The three benchmark datasets, their CSV profiles, stratified splits, and
 * the scale-then-encode step.
 *
 * Profiles:
 *   iris2     UCI iris.data, 4 features + species; setosa -> 0, versicolor -> 1,
 *             virginica rows skipped.
 *   diabetes  Pima Indians diabetes, 8 features + 0/1 outcome; header optional.
 *   bcw       Breast Cancer Wisconsin (Original), id + 9 features + 2/4 class;
 *             rows with a "?" marker are dropped.
 */
#pragma once

#include "qnnmi/encoding.hpp"
#include "qnnmi/training.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qnnmi {

enum class DatasetName { Iris2, Diabetes, Bcw };

std::string_view dataset_name(DatasetName d);
DatasetName parse_dataset(std::string_view name);

struct DatasetSpec {
    DatasetName name = DatasetName::Iris2;
    std::string path;
    EncodingMethod encoding = EncodingMethod::Qubit;
    int n = 4;

    /// Encoding and feature count prescribed for each dataset.
    static DatasetSpec standard(DatasetName name, std::string path, int n = 4);
    [[nodiscard]] std::size_t feature_count() const;
    void validate() const;
};

struct Sample {
    FeatureVector features;
    OneHot label;
};

struct LoadReport {
    std::string path;
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t dropped_missing = 0;
    std::size_t skipped_class = 0;
    bool header = false;
    std::array<std::size_t, 2> class_counts{0, 0};

    [[nodiscard]] nlohmann::json to_json() const;
};

struct Dataset {
    std::vector<Sample> samples;
    LoadReport report;
};

/// Raw (unscaled) features. Throws DataError for unreadable files, malformed
/// rows (with line number) and unknown labels.
Dataset load_dataset(const DatasetSpec &spec);

/// Canonical text form, used to compare reloads.
std::string serialize(std::span<const Sample> samples);

struct Split {
    std::vector<Sample> train;
    std::vector<Sample> eval;
};

/// Seeded stratified split; per-class train counts follow a largest-remainder
/// apportionment of round(fraction * N). Both sides keep file order.
Split split(std::span<const Sample> samples, double train_fraction, std::uint64_t seed);

struct PreparedData {
    TrainingSet train;
    TrainingSet eval;
    /// Scaling ranges fitted on the training rows; empty for amplitude encoding.
    std::vector<std::pair<double, double>> ranges;
};

/// Fits feature ranges on split.train only, scales both sides, and encodes.
PreparedData prepare(const Split &split, const EncodingSpec &encoding);

}  // namespace qnnmi
