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
#include "qnnmi/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qnnmi {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::CNOT, GateKind::CZ}) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::CZ; }

Gate Gate::rotation(GateKind kind, int qubit, int slot) {
    Gate g{kind, {qubit, -1}, slot, std::nullopt};
    g.validate();
    return g;
}

Gate Gate::fixed_rotation(GateKind kind, int qubit, double angle) {
    Gate g{kind, {qubit, -1}, std::nullopt, angle};
    g.validate();
    return g;
}

Gate Gate::hadamard(int qubit) { return Gate{GateKind::H, {qubit, -1}, std::nullopt, std::nullopt}; }

Gate Gate::cnot(int control, int target) {
    Gate g{GateKind::CNOT, {control, target}, std::nullopt, std::nullopt};
    g.validate();
    return g;
}

Gate Gate::cz(int a, int b) {
    Gate g{GateKind::CZ, {a, b}, std::nullopt, std::nullopt};
    g.validate();
    return g;
}

void Gate::validate() const {
    if (targets[0] < 0) {
        throw std::out_of_range("gate target index is negative");
    }
    if (is_rotation(kind)) {
        if (param_slot.has_value() == fixed_angle.has_value()) {
            throw std::invalid_argument("rotation gate needs exactly one of a parameter slot or a fixed angle");
        }
        if (param_slot && *param_slot < 0) {
            throw std::out_of_range("negative parameter slot");
        }
    } else if (param_slot || fixed_angle) {
        throw std::invalid_argument(std::string(gate_name(kind)) + " takes no angle");
    }
    if (is_two_qubit(kind)) {
        if (targets[1] < 0) {
            throw std::out_of_range("gate target index is negative");
        }
        if (targets[0] == targets[1]) {
            throw std::invalid_argument("two-qubit gate with duplicate targets");
        }
    }
}

double Gate::angle(std::span<const double> theta) const {
    if (fixed_angle) {
        return *fixed_angle;
    }
    if (param_slot) {
        if (static_cast<std::size_t>(*param_slot) >= theta.size()) {
            throw std::out_of_range("parameter slot beyond theta length");
        }
        return theta[*param_slot];
    }
    return 0.0;
}

std::array<cplx, 4> single_qubit_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const cplx i{0.0, 1.0};
    switch (kind) {
    case GateKind::RX: return {c, -i * s, -i * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0))};
    case GateKind::H: {
        const double h = std::numbers::sqrt2 / 2.0;
        return {h, h, h, -h};
    }
    default: throw std::invalid_argument("single_qubit_matrix: not a single-qubit gate");
    }
}

namespace {

void check_targets(const Gate &gate, int num_qubits) {
    gate.validate();
    for (int k = 0; k < gate.arity(); ++k) {
        if (gate.targets[k] >= num_qubits) {
            throw std::out_of_range("gate target " + std::to_string(gate.targets[k]) +
                                    " out of range for " + std::to_string(num_qubits) + " qubits");
        }
    }
}

}  // namespace

void apply_gate_inplace(std::span<cplx> amps, int num_qubits, const Gate &gate,
                        std::span<const double> theta) {
    check_targets(gate, num_qubits);
    const std::size_t dim = amps.size();
    switch (gate.kind) {
    case GateKind::CNOT: {
        const std::size_t cmask = std::size_t{1} << gate.targets[0];
        const std::size_t tmask = std::size_t{1} << gate.targets[1];
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) && !(i & tmask)) {
                std::swap(amps[i], amps[i | tmask]);
            }
        }
        return;
    }
    case GateKind::CZ: {
        const std::size_t mask = (std::size_t{1} << gate.targets[0]) | (std::size_t{1} << gate.targets[1]);
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & mask) == mask) {
                amps[i] = -amps[i];
            }
        }
        return;
    }
    default: {
        const auto m = single_qubit_matrix(gate.kind, gate.angle(theta));
        const std::size_t mask = std::size_t{1} << gate.targets[0];
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mask) {
                continue;
            }
            const cplx a0 = amps[i];
            const cplx a1 = amps[i | mask];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i | mask] = m[2] * a0 + m[3] * a1;
        }
        return;
    }
    }
}

StateVector apply_gate(const StateVector &state, const Gate &gate, std::span<const double> theta) {
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_gate_inplace(amps, state.num_qubits(), gate, theta);
    return {state.num_qubits(), std::move(amps)};
}

Circuit::Circuit(int num_qubits, int num_params) : num_qubits_(num_qubits), num_params_(num_params) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw std::invalid_argument("Circuit: qubit count must be in [1, 30]");
    }
    if (num_params < 0) {
        throw std::invalid_argument("Circuit: negative parameter count");
    }
}

Circuit &Circuit::add(Gate gate) {
    check_targets(gate, num_qubits_);
    if (gate.param_slot && *gate.param_slot >= num_params_) {
        throw std::out_of_range("Circuit: parameter slot " + std::to_string(*gate.param_slot) +
                                " >= num_params " + std::to_string(num_params_));
    }
    gates_.push_back(gate);
    return *this;
}

std::vector<std::optional<std::size_t>> Circuit::slot_owners() const {
    std::vector<std::optional<std::size_t>> owners(num_params_);
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        if (gates_[g].param_slot) {
            owners[*gates_[g].param_slot] = g;
        }
    }
    return owners;
}

void AnsatzSpec::validate() const {
    if (n < 2) {
        throw std::invalid_argument("ansatz needs n >= 2");
    }
    if (l < 1) {
        throw std::invalid_argument("ansatz needs l >= 1");
    }
    if (measured_qubit < 0 || measured_qubit >= n) {
        throw std::out_of_range("measured qubit out of range");
    }
}

std::vector<std::pair<int, int>> brick_pairs(int n, int parity) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = parity % 2; a + 1 < n; a += 2) {
        pairs.emplace_back(a, a + 1);
    }
    return pairs;
}

Circuit build_brickwall(const AnsatzSpec &spec) {
    spec.validate();
    Circuit circuit(spec.n, spec.n * (spec.l + 1));
    int slot = 0;
    for (int rep = 0; rep < spec.l; ++rep) {
        for (int q = 0; q < spec.n; ++q) {
            circuit.add(Gate::rotation(GateKind::RY, q, slot++));
        }
        for (const auto &[a, b] : brick_pairs(spec.n, rep)) {
            circuit.add(Gate::cnot(a, b));
        }
    }
    for (int q = 0; q < spec.n; ++q) {
        circuit.add(Gate::rotation(GateKind::RY, q, slot++));
    }
    return circuit;
}

namespace {

void check_theta(const Circuit &circuit, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(circuit.num_params())) {
        throw std::invalid_argument("theta has " + std::to_string(theta.size()) + " entries, circuit expects " +
                                    std::to_string(circuit.num_params()));
    }
}

}  // namespace

StateVector run_statevector(const Circuit &circuit, std::span<const double> theta,
                            const StateVector &input) {
    check_theta(circuit, theta);
    if (input.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("run_statevector: input register size differs from circuit");
    }
    std::vector<cplx> amps(input.amplitudes().begin(), input.amplitudes().end());
    for (const auto &gate : circuit.gates()) {
        apply_gate_inplace(amps, circuit.num_qubits(), gate, theta);
    }
    return {circuit.num_qubits(), std::move(amps)};
}

Matrix embed_gate(const Gate &gate, int num_qubits, std::span<const double> theta) {
    check_targets(gate, num_qubits);
    const std::size_t dim = std::size_t{1} << num_qubits;
    Matrix m(dim);
    if (gate.kind == GateKind::CNOT) {
        const std::size_t cmask = std::size_t{1} << gate.targets[0];
        const std::size_t tmask = std::size_t{1} << gate.targets[1];
        for (std::size_t col = 0; col < dim; ++col) {
            m((col & cmask) ? (col ^ tmask) : col, col) = 1.0;
        }
        return m;
    }
    if (gate.kind == GateKind::CZ) {
        const std::size_t mask = (std::size_t{1} << gate.targets[0]) | (std::size_t{1} << gate.targets[1]);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = ((i & mask) == mask) ? -1.0 : 1.0;
        }
        return m;
    }
    const auto g = single_qubit_matrix(gate.kind, gate.angle(theta));
    const int q = gate.targets[0];
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~mask) != (c & ~mask)) {
                continue;
            }
            m(r, c) = g[((r >> q) & 1U) * 2 + ((c >> q) & 1U)];
        }
    }
    return m;
}

UnitaryMatrix circuit_unitary(const Circuit &circuit, std::span<const double> theta) {
    check_theta(circuit, theta);
    Matrix u = Matrix::identity(std::size_t{1} << circuit.num_qubits());
    for (const auto &gate : circuit.gates()) {
        u = embed_gate(gate, circuit.num_qubits(), theta) * u;
    }
    return {circuit.num_qubits(), std::move(u)};
}

std::pair<double, double> measure_probs(const StateVector &state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw std::out_of_range("measure_probs: qubit out of range");
    }
    const std::size_t mask = std::size_t{1} << qubit;
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        ((i & mask) ? p1 : p0) += std::norm(state[i]);
    }
    return {p0, p1};
}

std::string to_text(const Circuit &circuit) {
    const int n = circuit.num_qubits();
    std::vector<std::string> lines(n);
    for (int q = 0; q < n; ++q) {
        lines[q] = "q" + std::to_string(q) + ": ";
    }
    const std::size_t label_width = lines.back().size();
    for (auto &line : lines) {
        line.resize(label_width, ' ');
    }

    for (const auto &gate : circuit.gates()) {
        std::vector<std::string> cell(n);
        switch (gate.kind) {
        case GateKind::CNOT:
            cell[gate.targets[0]] = "*";
            cell[gate.targets[1]] = "X";
            break;
        case GateKind::CZ:
            cell[gate.targets[0]] = "*";
            cell[gate.targets[1]] = "*";
            break;
        case GateKind::H: cell[gate.targets[0]] = "H"; break;
        default: {
            std::ostringstream os;
            os << gate_name(gate.kind);
            if (gate.param_slot) {
                os << "[t" << *gate.param_slot << "]";
            } else {
                os << "(" << *gate.fixed_angle << ")";
            }
            cell[gate.targets[0]] = os.str();
        }
        }
        if (gate.arity() == 2) {
            const int lo = std::min(gate.targets[0], gate.targets[1]);
            const int hi = std::max(gate.targets[0], gate.targets[1]);
            for (int q = lo + 1; q < hi; ++q) {
                cell[q] = "|";
            }
        }
        std::size_t width = 1;
        for (const auto &c : cell) {
            width = std::max(width, c.size());
        }
        for (int q = 0; q < n; ++q) {
            std::string c = cell[q].empty() ? std::string(width, '-') : cell[q];
            c.resize(width, '-');
            lines[q] += "-" + c + "-";
        }
    }
    std::string out;
    for (const auto &line : lines) {
        out += line + "\n";
    }
    return out;
}

nlohmann::json to_json(const Circuit &circuit) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &gate : circuit.gates()) {
        nlohmann::json g;
        g["kind"] = gate_name(gate.kind);
        g["targets"] = gate.arity() == 2 ? nlohmann::json::array({gate.targets[0], gate.targets[1]})
                                         : nlohmann::json::array({gate.targets[0]});
        if (gate.param_slot) {
            g["param"] = *gate.param_slot;
        }
        if (gate.fixed_angle) {
            g["angle"] = *gate.fixed_angle;
        }
        gates.push_back(std::move(g));
    }
    return {{"num_qubits", circuit.num_qubits()}, {"num_params", circuit.num_params()}, {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit circuit(j.at("num_qubits").get<int>(), j.at("num_params").get<int>());
    for (const auto &g : j.at("gates")) {
        Gate gate{parse_gate_kind(g.at("kind").get<std::string>()), {0, -1}, std::nullopt, std::nullopt};
        const auto &targets = g.at("targets");
        gate.targets[0] = targets.at(0).get<int>();
        if (targets.size() > 1) {
            gate.targets[1] = targets.at(1).get<int>();
        }
        if (g.contains("param")) {
            gate.param_slot = g["param"].get<int>();
        }
        if (g.contains("angle")) {
            gate.fixed_angle = g["angle"].get<double>();
        }
        circuit.add(gate);
    }
    return circuit;
}

}  // namespace qnnmi
