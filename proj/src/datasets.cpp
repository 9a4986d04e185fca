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
#include "qnnmi/datasets.hpp"

#include "qnnmi/csv.hpp"
#include "qnnmi/errors.hpp"
#include "qnnmi/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qnnmi {

std::string_view dataset_name(DatasetName d) {
    switch (d) {
    case DatasetName::Iris2: return "iris2";
    case DatasetName::Diabetes: return "diabetes";
    case DatasetName::Bcw: return "bcw";
    }
    return "?";
}

DatasetName parse_dataset(std::string_view name) {
    for (auto d : {DatasetName::Iris2, DatasetName::Diabetes, DatasetName::Bcw}) {
        if (dataset_name(d) == name) {
            return d;
        }
    }
    throw std::invalid_argument("unknown dataset '" + std::string(name) + "'");
}

DatasetSpec DatasetSpec::standard(DatasetName name, std::string path, int n) {
    DatasetSpec spec{name, std::move(path), EncodingMethod::Qubit, n};
    switch (name) {
    case DatasetName::Iris2: spec.encoding = EncodingMethod::Qubit; break;
    case DatasetName::Diabetes: spec.encoding = EncodingMethod::Interleaved; break;
    case DatasetName::Bcw: spec.encoding = EncodingMethod::Amplitude; break;
    }
    return spec;
}

std::size_t DatasetSpec::feature_count() const {
    switch (name) {
    case DatasetName::Iris2: return 4;
    case DatasetName::Diabetes: return 8;
    case DatasetName::Bcw: return 9;
    }
    return 0;
}

void DatasetSpec::validate() const {
    if (encoding != standard(name, {}).encoding) {
        throw std::invalid_argument(std::string(dataset_name(name)) + " uses " +
                                    std::string(encoding_name(standard(name, {}).encoding)) + " encoding");
    }
    EncodingSpec{encoding, n}.check_dimension(feature_count());
}

nlohmann::json LoadReport::to_json() const {
    return {{"path", path},
            {"rows_read", rows_read},
            {"rows_kept", rows_kept},
            {"dropped_missing", dropped_missing},
            {"skipped_class", skipped_class},
            {"header", header},
            {"class_counts", class_counts}};
}

namespace {

struct Profile {
    std::size_t fields;
    std::size_t first_feature;
};

Profile profile_of(DatasetName d) {
    switch (d) {
    case DatasetName::Iris2: return {5, 0};
    case DatasetName::Diabetes: return {9, 0};
    case DatasetName::Bcw: return {11, 1};
    }
    return {0, 0};
}

std::string where(const std::string &path, std::size_t line) {
    return path + ":" + std::to_string(line) + ": ";
}

// Class index, or nullopt for a row that is skipped by design.
std::optional<int> parse_label(DatasetName d, std::string_view field, const std::string &loc) {
    switch (d) {
    case DatasetName::Iris2:
        if (field == "Iris-setosa" || field == "setosa") {
            return 0;
        }
        if (field == "Iris-versicolor" || field == "versicolor") {
            return 1;
        }
        if (field == "Iris-virginica" || field == "virginica") {
            return std::nullopt;
        }
        break;
    case DatasetName::Diabetes:
        if (field == "0") {
            return 0;
        }
        if (field == "1") {
            return 1;
        }
        break;
    case DatasetName::Bcw:
        if (field == "2") {
            return 0;
        }
        if (field == "4") {
            return 1;
        }
        break;
    }
    throw DataError(loc + "unknown class label '" + std::string(field) + "'");
}

}  // namespace

Dataset load_dataset(const DatasetSpec &spec) {
    spec.validate();
    const auto lines = csv::read_lines(spec.path);
    const auto profile = profile_of(spec.name);
    const std::size_t d = spec.feature_count();

    Dataset out;
    out.report.path = spec.path;
    bool first_content = true;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto text = csv::trim(lines[ln]);
        if (text.empty()) {
            continue;
        }
        const auto loc = where(spec.path, ln + 1);
        const auto fields = csv::split_line(text);
        if (first_content) {
            first_content = false;
            if (!csv::parse_double(fields.front()) && fields.front() != "?") {
                out.report.header = true;
                continue;
            }
        }
        ++out.report.rows_read;
        if (fields.size() != profile.fields) {
            throw DataError(loc + "expected " + std::to_string(profile.fields) + " fields, found " +
                            std::to_string(fields.size()));
        }
        const auto label = parse_label(spec.name, fields.back(), loc);
        if (!label) {
            ++out.report.skipped_class;
            continue;
        }

        FeatureVector fv{std::vector<double>(d), false};
        bool missing = false;
        for (std::size_t k = 0; k < d; ++k) {
            const auto field = fields[profile.first_feature + k];
            if (field == "?") {
                missing = true;
                break;
            }
            const auto v = csv::parse_double(field);
            if (!v || !std::isfinite(*v)) {
                throw DataError(loc + "malformed value '" + std::string(field) + "'");
            }
            fv.values[k] = *v;
        }
        if (missing) {
            ++out.report.dropped_missing;
            continue;
        }
        ++out.report.class_counts[*label];
        out.samples.push_back({std::move(fv), one_hot(*label)});
    }
    out.report.rows_kept = out.samples.size();
    if (out.samples.empty()) {
        throw DataError(spec.path + ": no usable rows");
    }
    return out;
}

std::string serialize(std::span<const Sample> samples) {
    std::string out;
    for (const auto &s : samples) {
        std::vector<std::string> fields;
        for (const double v : s.features.values) {
            fields.push_back(csv::format_double(v));
        }
        fields.push_back(std::to_string(class_of(s.label)));
        out += csv::join(fields) + "\n";
    }
    return out;
}

Split split(std::span<const Sample> samples, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split: train fraction must be in (0, 1)");
    }
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        by_class[class_of(samples[i].label)].push_back(i);
    }

    // Largest-remainder apportionment of the train total across classes.
    const auto total = static_cast<std::size_t>(std::round(train_fraction * static_cast<double>(samples.size())));
    std::array<std::size_t, 2> quota{};
    std::array<double, 2> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double exact = train_fraction * static_cast<double>(by_class[c].size());
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - static_cast<double>(quota[c]);
        assigned += quota[c];
    }
    while (assigned < total) {
        std::size_t best = 2;
        for (std::size_t c = 0; c < 2; ++c) {
            if (quota[c] < by_class[c].size() && (best == 2 || remainder[c] > remainder[best])) {
                best = c;
            }
        }
        if (best == 2) {
            break;
        }
        ++quota[best];
        remainder[best] = -1.0;
        ++assigned;
    }

    Rng rng(seed, Rng::kSplit);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> eval_idx;
    for (std::size_t c = 0; c < 2; ++c) {
        auto idx = by_class[c];
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::swap(idx[i - 1], idx[rng.below(i)]);
        }
        train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]));
        eval_idx.insert(eval_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]), idx.end());
    }
    if (train_idx.empty() || eval_idx.empty()) {
        throw std::invalid_argument("split: one side of the split is empty");
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(eval_idx.begin(), eval_idx.end());

    Split out;
    for (const auto i : train_idx) {
        out.train.push_back(samples[i]);
    }
    for (const auto i : eval_idx) {
        out.eval.push_back(samples[i]);
    }
    return out;
}

PreparedData prepare(const Split &split, const EncodingSpec &encoding) {
    if (split.train.empty()) {
        throw std::invalid_argument("prepare: empty training split");
    }
    PreparedData out;
    if (encoding.method != EncodingMethod::Amplitude) {
        std::vector<FeatureVector> rows;
        rows.reserve(split.train.size());
        for (const auto &s : split.train) {
            rows.push_back(s.features);
        }
        out.ranges = feature_ranges(rows);
    }
    auto encode_side = [&](const std::vector<Sample> &side, TrainingSet &dst) {
        for (const auto &s : side) {
            const auto x = out.ranges.empty() ? s.features : scale_features(s.features, out.ranges);
            dst.states.push_back(encode(x, encoding));
            dst.labels.push_back(s.label);
        }
    };
    encode_side(split.train, out.train);
    encode_side(split.eval, out.eval);
    return out;
}

}  // namespace qnnmi
