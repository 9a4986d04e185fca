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
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace qnnmi {
namespace {

using std::numbers::pi;

FeatureVector fv(std::vector<double> v, bool scaled = true) { return {std::move(v), scaled}; }

TEST(ScaleFeatures, MidpointEndpointsAndConstantColumns) {
    const std::vector<std::pair<double, double>> r{{0.0, 10.0}};
    EXPECT_NEAR(scale_features(fv({5.0}, false), r).values[0], pi / 2, 1e-15);
    EXPECT_NEAR(scale_features(fv({0.0}, false), r).values[0], 0.0, 1e-15);
    EXPECT_NEAR(scale_features(fv({10.0}, false), r).values[0], pi, 1e-15);
    EXPECT_TRUE(scale_features(fv({5.0}, false), r).scaled);

    const std::vector<FeatureVector> rows{fv({3.0, 1.0}, false), fv({3.0, 2.0}, false)};
    const auto ranges = feature_ranges(rows);
    for (const auto &row : rows) {
        EXPECT_NEAR(scale_features(row, ranges).values[0], pi / 2, 1e-15);
    }
}

TEST(ScaleFeatures, OutOfRangeValuesStayInAngleRange) {
    const std::vector<std::pair<double, double>> r{{0.0, 1.0}};
    EXPECT_NEAR(scale_features(fv({2.0}, false), r).values[0], pi, 1e-15);
    EXPECT_NEAR(scale_features(fv({-1.0}, false), r).values[0], 0.0, 1e-15);
}

TEST(QubitEncode, Examples) {
    const auto zero = qubit_encode(fv({0, 0, 0, 0}), 4);
    EXPECT_NEAR(std::abs(zero[0]), 1.0, 1e-12);
    const auto ones = qubit_encode(fv({pi, pi, pi, pi}), 4);
    EXPECT_NEAR(std::abs(ones[15]), 1.0, 1e-12);
    const auto half = qubit_encode(fv({pi / 2, 0, 0, 0}), 4);
    EXPECT_NEAR(half[0].real(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(half[1].real(), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_THROW(qubit_encode(fv({0, 0, 0}), 4), std::invalid_argument);
}

TEST(QubitEncode, ProductStateProperty) {
    Rng rng(1, Rng::kTest);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(4);
        for (auto &v : x) {
            v = rng.uniform(0.0, pi);
        }
        const auto psi = qubit_encode(fv(x), 4);
        EXPECT_NEAR(psi.norm(), 1.0, 1e-9);
        for (int q = 0; q < 4; ++q) {
            const QubitSet keep{q};
            EXPECT_NEAR(von_neumann_entropy(reduced_density(psi, keep)), 0.0, 1e-9);
        }
    }
}

TEST(InterleavedEncode, Structure) {
    const auto zero = interleaved_encode(fv(std::vector<double>(8, 0.0)), 4);
    EXPECT_NEAR(std::abs(zero[0]), 1.0, 1e-12);
    EXPECT_THROW(interleaved_encode(fv({0, 0, 0, 0}), 4), std::invalid_argument);

    // Two RY columns around an even brick.
    Rng rng(2, Rng::kTest);
    std::vector<double> x(8);
    for (auto &v : x) {
        v = rng.uniform(0.0, pi);
    }
    Circuit ref(4, 0);
    for (int q = 0; q < 4; ++q) {
        ref.add(Gate::fixed_rotation(GateKind::RY, q, x[q]));
    }
    ref.add(Gate::cnot(0, 1)).add(Gate::cnot(2, 3));
    for (int q = 0; q < 4; ++q) {
        ref.add(Gate::fixed_rotation(GateKind::RY, q, x[4 + q]));
    }
    const auto want = run_statevector(ref, {}, StateVector::basis(4));
    EXPECT_LE(max_abs_diff(interleaved_encode(fv(x), 4).amplitudes(), want.amplitudes()), 1e-12);
}

TEST(InterleavedEncode, SingleLeadingFeatureMatchesQubitEncodeThenBrick) {
    std::vector<double> x(8, 0.0);
    x[0] = 1.1;
    Circuit brick(4, 0);
    brick.add(Gate::cnot(0, 1)).add(Gate::cnot(2, 3));
    const auto want = run_statevector(brick, {}, qubit_encode(fv({1.1, 0, 0, 0}), 4));
    EXPECT_LE(max_abs_diff(interleaved_encode(fv(x), 4).amplitudes(), want.amplitudes()), 1e-12);
}

TEST(InterleavedEncode, PadsShortTailWithZeroAngles) {
    std::vector<double> x{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> padded = x;
    padded.resize(8, 0.0);
    EXPECT_LE(max_abs_diff(interleaved_encode(fv(x), 4).amplitudes(), interleaved_encode(fv(padded), 4).amplitudes()),
              0.0);
}

TEST(AmplitudeEncode, Examples) {
    const auto s = amplitude_encode(fv({3, 4}, false), 1);
    EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
    EXPECT_NEAR(s[1].real(), 0.8, 1e-15);

    std::vector<double> nine{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto p = amplitude_encode(fv(nine, false), 4);
    EXPECT_EQ(p.dim(), 16U);
    for (std::size_t i = 9; i < 16; ++i) {
        EXPECT_EQ(p[i], cplx{});
    }
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);

    std::vector<double> ek(9, 0.0);
    ek[5] = 7.5;
    EXPECT_NEAR(std::abs(amplitude_encode(fv(ek, false), 4)[5]), 1.0, 1e-15);

    EXPECT_THROW(amplitude_encode(fv(std::vector<double>(9, 0.0), false), 4), std::invalid_argument);
    EXPECT_THROW(amplitude_encode(fv(std::vector<double>(17, 1.0), false), 4), std::invalid_argument);
}

TEST(AmplitudeEncode, ScaleInvariance) {
    Rng rng(3, Rng::kTest);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(9);
        for (auto &v : x) {
            v = rng.uniform(0.0, 10.0);
        }
        const double c = rng.uniform(0.01, 100.0);
        std::vector<double> cx = x;
        for (auto &v : cx) {
            v *= c;
        }
        EXPECT_LE(max_abs_diff(amplitude_encode(fv(x, false), 4).amplitudes(),
                               amplitude_encode(fv(cx, false), 4).amplitudes()),
                  1e-12);
    }
}

TEST(Encode, DispatchAndDimensionRules) {
    EXPECT_NO_THROW((EncodingSpec{EncodingMethod::Qubit, 4}.check_dimension(4)));
    EXPECT_THROW((EncodingSpec{EncodingMethod::Qubit, 4}.check_dimension(5)), std::invalid_argument);
    EXPECT_NO_THROW((EncodingSpec{EncodingMethod::Interleaved, 4}.check_dimension(8)));
    EXPECT_THROW((EncodingSpec{EncodingMethod::Interleaved, 4}.check_dimension(4)), std::invalid_argument);
    EXPECT_NO_THROW((EncodingSpec{EncodingMethod::Amplitude, 4}.check_dimension(9)));
    EXPECT_EQ(parse_encoding("interleaved"), EncodingMethod::Interleaved);
    EXPECT_EQ(encoding_name(EncodingMethod::Amplitude), "amplitude");
    EXPECT_THROW(parse_encoding("angle"), std::invalid_argument);

    const auto a = encode(fv({0.1, 0.2, 0.3, 0.4}), {EncodingMethod::Qubit, 4});
    const auto b = qubit_encode(fv({0.1, 0.2, 0.3, 0.4}), 4);
    EXPECT_LE(max_abs_diff(a.amplitudes(), b.amplitudes()), 0.0);
}

}  // namespace
}  // namespace qnnmi
