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
 * Binary classifier training: forward pass, clamped cross-entropy, the two
 * gradient routes (exact parameter shift and central differences), Adam,
 * and the full-batch epoch loop.
 *
 * The loss is the negated cross-entropy, L = -sum_k y_k ln max(h_k, 1e-12),
 * so that better predictions lower it.
 */
#pragma once

#include "qnnmi/circuit.hpp"
#include "qnnmi/kernels.hpp"
#include "qnnmi/qcore.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace qnnmi {

inline constexpr double kProbClamp = 1e-12;

/// Class probabilities read from the measured qubit: class 0 <-> p0, class 1 <-> p1.
struct Hypothesis {
    std::array<double, 2> probs{1.0, 0.0};

    [[nodiscard]] int predicted() const { return probs[1] > probs[0] ? 1 : 0; }
};

using OneHot = std::array<double, 2>;

OneHot one_hot(int cls);
int class_of(const OneHot &y);

Hypothesis forward(const StateVector &x, const Circuit &circuit, std::span<const double> theta,
                   int measured_qubit);

double cross_entropy(const Hypothesis &h, const OneHot &y);

/// d/dh_k of cross_entropy; zero where the clamp is active.
std::array<double, 2> cross_entropy_grad(const Hypothesis &h, const OneHot &y);

using LossFn = std::function<double(std::span<const double>)>;

/// g_j = [L(theta + dtheta/2 e_j) - L(theta - dtheta/2 e_j)] / dtheta
std::vector<double> grad_central_difference(const LossFn &loss_at, std::span<const double> theta,
                                            double dtheta);

using HypothesisBatchFn = std::function<std::vector<Hypothesis>(std::span<const double>)>;

/**
 * Gradient of the mean loss over a batch via the parameter-shift rule,
 * dh_k/dtheta_j = [h_k(theta_j + pi/2) - h_k(theta_j - pi/2)] / 2,
 * chained through cross_entropy_grad.
 *
 * The circuit is used to check that every slot drives exactly one rotation
 * gate; shared or non-rotation slots make the two-term rule inexact and are
 * rejected with std::invalid_argument.
 */
std::vector<double> grad_parameter_shift(const HypothesisBatchFn &hypotheses, std::span<const OneHot> labels,
                                         const Circuit &circuit, std::span<const double> theta);

/// Throws std::invalid_argument if the two-term shift rule does not apply to the circuit.
void check_shift_rule_applicable(const Circuit &circuit);

struct AdamHyper {
    double alpha = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    AdamHyper hyper;

    static AdamState fresh(std::size_t num_params, AdamHyper hyper = {});
};

struct AdamResult {
    std::vector<double> theta;
    AdamState state;
};

AdamResult adam_step(std::span<const double> theta, std::span<const double> grad, const AdamState &state);

enum class GradientMethod { Shift, CentralDiff };

std::string_view gradient_name(GradientMethod g);
GradientMethod parse_gradient(std::string_view name);

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 0.01;
    GradientMethod gradient = GradientMethod::Shift;
    double dtheta = 1e-3;
    std::uint64_t seed = 1;
    kernels::Backend backend = kernels::Backend::OpenMP;
};

/// Encoded training samples with their labels.
struct TrainingSet {
    std::vector<StateVector> states;
    std::vector<OneHot> labels;
};

struct EpochRecord {
    int epoch = 0;
    double mean_loss = 0.0;
    double train_accuracy = 0.0;
    std::vector<double> theta_snapshot;
};

struct TrainingTrace {
    std::uint64_t seed = 0;
    std::vector<EpochRecord> epochs;
};

/// theta_i ~ Uniform(-pi, pi), i.i.d., from the seed's init stream.
std::vector<double> initial_theta(int num_params, std::uint64_t seed);

/**
 * Full-batch training. Record k holds the loss, accuracy and parameters after
 * k optimizer steps; record 0 is the untrained snapshot, so the trace has
 * epochs + 1 entries.
 */
TrainingTrace train(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                    const TrainConfig &config);

/// Same loop from a caller-provided starting point.
TrainingTrace train_from(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                         const TrainConfig &config, std::vector<double> theta0);

/// Mean loss and accuracy of a batch at theta.
struct BatchScore {
    double mean_loss = 0.0;
    double accuracy = 0.0;
};

BatchScore score(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                 std::span<const double> theta, kernels::Backend backend = kernels::Backend::Serial);

}  // namespace qnnmi
