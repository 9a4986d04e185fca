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
#include "qnnmi/training.hpp"

#include "qnnmi/errors.hpp"
#include "qnnmi/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qnnmi {

OneHot one_hot(int cls) {
    if (cls != 0 && cls != 1) {
        throw std::invalid_argument("one_hot: binary labels only");
    }
    return cls == 0 ? OneHot{1.0, 0.0} : OneHot{0.0, 1.0};
}

int class_of(const OneHot &y) {
    if (y == OneHot{1.0, 0.0}) {
        return 0;
    }
    if (y == OneHot{0.0, 1.0}) {
        return 1;
    }
    throw std::invalid_argument("label is not one-hot");
}

Hypothesis forward(const StateVector &x, const Circuit &circuit, std::span<const double> theta,
                   int measured_qubit) {
    const auto out = run_statevector(circuit, theta, x);
    const auto [p0, p1] = measure_probs(out, measured_qubit);
    return Hypothesis{{p0, p1}};
}

double cross_entropy(const Hypothesis &h, const OneHot &y) {
    double loss = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        if (y[k] != 0.0) {
            loss -= y[k] * std::log(std::max(h.probs[k], kProbClamp));
        }
    }
    return loss;
}

std::array<double, 2> cross_entropy_grad(const Hypothesis &h, const OneHot &y) {
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t k = 0; k < 2; ++k) {
        if (y[k] != 0.0 && h.probs[k] > kProbClamp) {
            g[k] = -y[k] / h.probs[k];
        }
    }
    return g;
}

std::vector<double> grad_central_difference(const LossFn &loss_at, std::span<const double> theta,
                                            double dtheta) {
    if (!(dtheta > 0.0)) {
        throw std::invalid_argument("central difference needs dtheta > 0");
    }
    std::vector<double> work(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        work[j] = theta[j] + dtheta / 2.0;
        const double up = loss_at(work);
        work[j] = theta[j] - dtheta / 2.0;
        const double down = loss_at(work);
        work[j] = theta[j];
        grad[j] = (up - down) / dtheta;
    }
    return grad;
}

void check_shift_rule_applicable(const Circuit &circuit) {
    std::vector<int> uses(circuit.num_params(), 0);
    for (const auto &gate : circuit.gates()) {
        if (!gate.param_slot) {
            continue;
        }
        if (!is_rotation(gate.kind)) {
            throw std::invalid_argument("parameter shift: unsupported gate kind " +
                                       std::string(gate_name(gate.kind)) + " in a parameterized position");
        }
        if (++uses[*gate.param_slot] > 1) {
            throw std::invalid_argument("parameter shift: slot " + std::to_string(*gate.param_slot) +
                                        " drives more than one gate");
        }
    }
}

std::vector<double> grad_parameter_shift(const HypothesisBatchFn &hypotheses, std::span<const OneHot> labels,
                                         const Circuit &circuit, std::span<const double> theta) {
    check_shift_rule_applicable(circuit);
    if (theta.size() != static_cast<std::size_t>(circuit.num_params())) {
        throw std::invalid_argument("parameter shift: theta length mismatch");
    }
    const auto base = hypotheses(theta);
    if (base.size() != labels.size() || labels.empty()) {
        throw std::invalid_argument("parameter shift: hypothesis/label count mismatch");
    }
    std::vector<std::array<double, 2>> dl_dh(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        dl_dh[i] = cross_entropy_grad(base[i], labels[i]);
    }

    constexpr double kShift = std::numbers::pi / 2.0;
    std::vector<double> work(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        work[j] = theta[j] + kShift;
        const auto plus = hypotheses(work);
        work[j] = theta[j] - kShift;
        const auto minus = hypotheses(work);
        work[j] = theta[j];
        double acc = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i) {
            for (std::size_t k = 0; k < 2; ++k) {
                acc += dl_dh[i][k] * (plus[i].probs[k] - minus[i].probs[k]) / 2.0;
            }
        }
        grad[j] = acc / static_cast<double>(base.size());
    }
    return grad;
}

AdamState AdamState::fresh(std::size_t num_params, AdamHyper hyper) {
    return AdamState{std::vector<double>(num_params, 0.0), std::vector<double>(num_params, 0.0), 0, hyper};
}

AdamResult adam_step(std::span<const double> theta, std::span<const double> grad, const AdamState &state) {
    if (grad.size() != theta.size() || state.m.size() != theta.size() || state.v.size() != theta.size()) {
        throw std::invalid_argument("adam_step: length mismatch");
    }
    AdamResult out{std::vector<double>(theta.begin(), theta.end()), state};
    auto &s = out.state;
    const auto &h = s.hyper;
    s.t += 1;
    const double correction1 = 1.0 - std::pow(h.beta1, static_cast<double>(s.t));
    const double correction2 = 1.0 - std::pow(h.beta2, static_cast<double>(s.t));
    for (std::size_t j = 0; j < theta.size(); ++j) {
        s.m[j] = h.beta1 * s.m[j] + (1.0 - h.beta1) * grad[j];
        s.v[j] = h.beta2 * s.v[j] + (1.0 - h.beta2) * grad[j] * grad[j];
        const double m_hat = s.m[j] / correction1;
        const double v_hat = s.v[j] / correction2;
        out.theta[j] -= h.alpha * m_hat / (std::sqrt(v_hat) + h.eps);
    }
    return out;
}

std::string_view gradient_name(GradientMethod g) { return g == GradientMethod::Shift ? "shift" : "central-diff"; }

GradientMethod parse_gradient(std::string_view name) {
    if (name == "shift") {
        return GradientMethod::Shift;
    }
    if (name == "central-diff") {
        return GradientMethod::CentralDiff;
    }
    throw std::invalid_argument("unknown gradient method '" + std::string(name) + "'");
}

std::vector<double> initial_theta(int num_params, std::uint64_t seed) {
    Rng rng(seed, Rng::kInit);
    std::vector<double> theta(num_params);
    for (auto &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

namespace {

Hypothesis hypothesis_from_p1(double p1) { return Hypothesis{{1.0 - p1, p1}}; }

// Loss and accuracy for one row of a probability table.
BatchScore score_row(std::span<const double> p1, std::span<const OneHot> labels) {
    double loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto h = hypothesis_from_p1(p1[i]);
        loss += cross_entropy(h, labels[i]);
        correct += h.predicted() == class_of(labels[i]) ? 1 : 0;
    }
    const auto count = static_cast<double>(labels.size());
    return {loss / count, static_cast<double>(correct) / count};
}

void check_finite(std::span<const double> values, const char *what) {
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw NumericalError(std::string("non-finite ") + what + " during training");
        }
    }
}

}  // namespace

BatchScore score(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                 std::span<const double> theta, kernels::Backend backend) {
    const kernels::SampleBatch batch(data.states);
    const std::vector<Matrix> u{kernels::unitary_by_columns(circuit, theta)};
    const auto p1 = kernels::excited_probs(u, batch, measured_qubit, backend);
    return score_row(p1, data.labels);
}

TrainingTrace train(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                    const TrainConfig &config) {
    return train_from(data, circuit, measured_qubit, config, initial_theta(circuit.num_params(), config.seed));
}

TrainingTrace train_from(const TrainingSet &data, const Circuit &circuit, int measured_qubit,
                         const TrainConfig &config, std::vector<double> theta) {
    if (data.states.empty() || data.states.size() != data.labels.size()) {
        throw std::invalid_argument("train: empty or inconsistent training set");
    }
    if (config.epochs < 0) {
        throw std::invalid_argument("train: negative epoch count");
    }
    if (config.gradient == GradientMethod::Shift) {
        check_shift_rule_applicable(circuit);
    } else if (!(config.dtheta > 0.0)) {
        throw std::invalid_argument("train: dtheta must be positive");
    }
    if (theta.size() != static_cast<std::size_t>(circuit.num_params())) {
        throw std::invalid_argument("train: theta length mismatch");
    }

    const kernels::SampleBatch batch(data.states);
    const std::size_t count = batch.size();
    const std::size_t num_params = theta.size();
    const double shift = config.gradient == GradientMethod::Shift ? std::numbers::pi / 2.0 : config.dtheta / 2.0;

    AdamHyper hyper;
    hyper.alpha = config.learning_rate;
    auto adam = AdamState::fresh(num_params, hyper);

    TrainingTrace trace;
    trace.seed = config.seed;
    trace.epochs.reserve(config.epochs + 1);

    for (int epoch = 0;; ++epoch) {
        if (epoch == config.epochs) {
            const auto s = score(data, circuit, measured_qubit, theta, config.backend);
            trace.epochs.push_back({epoch, s.mean_loss, s.accuracy, theta});
            break;
        }

        const auto unitaries = kernels::shifted_unitaries(circuit, theta, shift);
        const auto p1 = kernels::excited_probs(unitaries, batch, measured_qubit, config.backend);
        check_finite(p1, "probability");
        const std::span<const double> table(p1);

        const auto s = score_row(table.first(count), data.labels);
        trace.epochs.push_back({epoch, s.mean_loss, s.accuracy, theta});

        std::vector<double> grad(num_params, 0.0);
        if (config.gradient == GradientMethod::Shift) {
            for (std::size_t i = 0; i < count; ++i) {
                const auto dl = cross_entropy_grad(hypothesis_from_p1(table[i]), data.labels[i]);
                for (std::size_t j = 0; j < num_params; ++j) {
                    const double dp1 = (table[(1 + 2 * j) * count + i] - table[(2 + 2 * j) * count + i]) / 2.0;
                    // h0 = 1 - p1, so dh0 = -dp1.
                    grad[j] += dl[0] * -dp1 + dl[1] * dp1;
                }
            }
            for (auto &g : grad) {
                g /= static_cast<double>(count);
            }
        } else {
            for (std::size_t j = 0; j < num_params; ++j) {
                const double up = score_row(table.subspan((1 + 2 * j) * count, count), data.labels).mean_loss;
                const double down = score_row(table.subspan((2 + 2 * j) * count, count), data.labels).mean_loss;
                grad[j] = (up - down) / config.dtheta;
            }
        }
        check_finite(grad, "gradient");

        auto step = adam_step(theta, grad, adam);
        theta = std::move(step.theta);
        adam = std::move(step.state);
    }
    return trace;
}

}  // namespace qnnmi
