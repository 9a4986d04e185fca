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
#include "qnnmi/encoding.hpp"

#include "qnnmi/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qnnmi {

std::string_view encoding_name(EncodingMethod m) {
    switch (m) {
    case EncodingMethod::Qubit: return "qubit";
    case EncodingMethod::Interleaved: return "interleaved";
    case EncodingMethod::Amplitude: return "amplitude";
    }
    return "?";
}

EncodingMethod parse_encoding(std::string_view name) {
    for (auto m : {EncodingMethod::Qubit, EncodingMethod::Interleaved, EncodingMethod::Amplitude}) {
        if (encoding_name(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown encoding '" + std::string(name) + "'");
}

void EncodingSpec::check_dimension(std::size_t d) const {
    if (n < 1 || n > 30) {
        throw std::invalid_argument("encoding: qubit count out of range");
    }
    const auto nn = static_cast<std::size_t>(n);
    switch (method) {
    case EncodingMethod::Qubit:
        if (d != nn) {
            throw std::invalid_argument("qubit encoding needs d == n (d=" + std::to_string(d) +
                                        ", n=" + std::to_string(n) + ")");
        }
        return;
    case EncodingMethod::Interleaved:
        if (d <= nn) {
            throw std::invalid_argument("interleaved encoding needs d > n; use qubit encoding");
        }
        return;
    case EncodingMethod::Amplitude:
        if (d == 0 || d > (std::size_t{1} << n)) {
            throw std::invalid_argument("amplitude encoding needs 0 < d <= 2^n");
        }
        return;
    }
}

std::vector<std::pair<double, double>> feature_ranges(std::span<const FeatureVector> rows) {
    if (rows.empty()) {
        throw std::invalid_argument("feature_ranges: no rows");
    }
    const std::size_t d = rows.front().values.size();
    std::vector<std::pair<double, double>> ranges(d, {INFINITY, -INFINITY});
    for (const auto &row : rows) {
        if (row.values.size() != d) {
            throw std::invalid_argument("feature_ranges: ragged rows");
        }
        for (std::size_t k = 0; k < d; ++k) {
            ranges[k].first = std::min(ranges[k].first, row.values[k]);
            ranges[k].second = std::max(ranges[k].second, row.values[k]);
        }
    }
    return ranges;
}

FeatureVector scale_features(const FeatureVector &raw, std::span<const std::pair<double, double>> ranges) {
    if (raw.values.size() != ranges.size()) {
        throw std::invalid_argument("scale_features: range count differs from feature count");
    }
    FeatureVector out{std::vector<double>(raw.values.size()), true};
    for (std::size_t k = 0; k < ranges.size(); ++k) {
        const auto [lo, hi] = ranges[k];
        if (!(hi > lo)) {
            out.values[k] = std::numbers::pi / 2.0;
            continue;
        }
        // Evaluation rows may fall outside the training range.
        const double t = (raw.values[k] - lo) / (hi - lo);
        out.values[k] = std::clamp(t, 0.0, 1.0) * std::numbers::pi;
    }
    return out;
}

namespace {

void apply_ry_column(std::vector<cplx> &amps, int n, std::span<const double> angles) {
    for (int q = 0; q < n; ++q) {
        apply_gate_inplace(amps, n, Gate::fixed_rotation(GateKind::RY, q, angles[q]), {});
    }
}

std::vector<cplx> zero_state(int n) {
    std::vector<cplx> amps(std::size_t{1} << n);
    amps[0] = 1.0;
    return amps;
}

}  // namespace

StateVector qubit_encode(const FeatureVector &x, int n) {
    EncodingSpec{EncodingMethod::Qubit, n}.check_dimension(x.values.size());
    auto amps = zero_state(n);
    apply_ry_column(amps, n, x.values);
    return {n, std::move(amps)};
}

StateVector interleaved_encode(const FeatureVector &x, int n) {
    EncodingSpec{EncodingMethod::Interleaved, n}.check_dimension(x.values.size());
    const std::size_t d = x.values.size();
    const std::size_t columns = (d + n - 1) / n;
    std::vector<double> padded(x.values);
    padded.resize(columns * n, 0.0);

    auto amps = zero_state(n);
    for (std::size_t c = 0; c < columns; ++c) {
        apply_ry_column(amps, n, std::span<const double>(padded).subspan(c * n, n));
        if (c + 1 < columns) {
            for (const auto &[a, b] : brick_pairs(n, static_cast<int>(c))) {
                apply_gate_inplace(amps, n, Gate::cnot(a, b), {});
            }
        }
    }
    return {n, std::move(amps)};
}

StateVector amplitude_encode(const FeatureVector &x, int n) {
    EncodingSpec{EncodingMethod::Amplitude, n}.check_dimension(x.values.size());
    double sq = 0.0;
    for (const double v : x.values) {
        sq += v * v;
    }
    if (!(sq > 0.0)) {
        throw std::invalid_argument("amplitude encoding of an all-zero vector");
    }
    const double norm = std::sqrt(sq);
    std::vector<cplx> amps(std::size_t{1} << n);
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        amps[i] = x.values[i] / norm;
    }
    return {n, std::move(amps)};
}

StateVector encode(const FeatureVector &x, const EncodingSpec &spec) {
    switch (spec.method) {
    case EncodingMethod::Qubit: return qubit_encode(x, spec.n);
    case EncodingMethod::Interleaved: return interleaved_encode(x, spec.n);
    case EncodingMethod::Amplitude: return amplitude_encode(x, spec.n);
    }
    throw std::invalid_argument("encode: unknown method");
}

}  // namespace qnnmi
