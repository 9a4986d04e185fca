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
 * Classical feature vectors to quantum states.
 *
 * Angle encodings expect features already mapped to [0, pi] by
 * scale_features; amplitude encoding takes raw values.
 */
#pragma once

#include "qnnmi/qcore.hpp"

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qnnmi {

struct FeatureVector {
    std::vector<double> values;
    bool scaled = false;
};

enum class EncodingMethod { Qubit, Interleaved, Amplitude };

std::string_view encoding_name(EncodingMethod m);
EncodingMethod parse_encoding(std::string_view name);

struct EncodingSpec {
    EncodingMethod method = EncodingMethod::Qubit;
    int n = 4;

    /// Throws std::invalid_argument when d is incompatible with method and n.
    void check_dimension(std::size_t d) const;
};

/// Per-feature (min, max) over a set of raw vectors.
std::vector<std::pair<double, double>> feature_ranges(std::span<const FeatureVector> rows);

/// Affine map of each feature onto [0, pi]; degenerate ranges map to pi/2.
FeatureVector scale_features(const FeatureVector &raw, std::span<const std::pair<double, double>> ranges);

/// RY(x_q) on qubit q of |0...0>.
StateVector qubit_encode(const FeatureVector &x, int n);

/// Columns of RY(x_{c*n+q}) separated by CNOT bricks of parity c; missing
/// tail features are angle 0.
StateVector interleaved_encode(const FeatureVector &x, int n);

/// amplitudes[i] = x_i / |x| for i < d, zero beyond.
StateVector amplitude_encode(const FeatureVector &x, int n);

StateVector encode(const FeatureVector &x, const EncodingSpec &spec);

}  // namespace qnnmi
