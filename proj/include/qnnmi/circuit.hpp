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
 * Gate list circuits, the brick-wall ansatz, and their two execution routes:
 * sequential statevector updates and full unitary composition.
 */
#pragma once

#include "qnnmi/qcore.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qnnmi {

enum class GateKind { RX, RY, RZ, H, CNOT, CZ };

std::string_view gate_name(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
bool is_rotation(GateKind kind);
bool is_two_qubit(GateKind kind);

/**
 * @brief One circuit element.
 *
 * Rotations carry exactly one of a parameter slot or a fixed angle.
 * For CNOT, targets[0] is the control and targets[1] the target.
 */
struct Gate {
    GateKind kind;
    std::array<int, 2> targets{0, -1};
    std::optional<int> param_slot;
    std::optional<double> fixed_angle;

    static Gate rotation(GateKind kind, int qubit, int slot);
    static Gate fixed_rotation(GateKind kind, int qubit, double angle);
    static Gate hadamard(int qubit);
    static Gate cnot(int control, int target);
    static Gate cz(int a, int b);

    [[nodiscard]] int arity() const { return is_two_qubit(kind) ? 2 : 1; }

    /// Throws std::invalid_argument when the kind/slot/angle combination is inconsistent.
    void validate() const;

    /// Rotation angle resolved against a parameter vector.
    [[nodiscard]] double angle(std::span<const double> theta) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// 2x2 matrix of a single-qubit gate, row-major.
std::array<cplx, 4> single_qubit_matrix(GateKind kind, double angle);

/// Applies a gate to a state and returns the new state.
StateVector apply_gate(const StateVector &state, const Gate &gate, std::span<const double> theta);

/// In-place kernel on a raw amplitude array of 2^m entries.
void apply_gate_inplace(std::span<cplx> amps, int num_qubits, const Gate &gate,
                        std::span<const double> theta);

class Circuit {
  public:
    explicit Circuit(int num_qubits, int num_params = 0);

    /// Validates the gate against the register and the parameter count.
    Circuit &add(Gate gate);

    [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] int num_params() const noexcept { return num_params_; }
    [[nodiscard]] std::span<const Gate> gates() const noexcept { return gates_; }

    /// Slot -> gate position. Empty entries for unused slots.
    [[nodiscard]] std::vector<std::optional<std::size_t>> slot_owners() const;

  private:
    int num_qubits_;
    int num_params_;
    std::vector<Gate> gates_;
};

struct AnsatzSpec {
    int n = 4;
    int l = 4;
    int measured_qubit = 0;

    void validate() const;
};

/// RY column + alternating-parity CNOT brick per repetition, then a final RY
/// column. num_params = n * (l + 1), slots assigned in gate order.
Circuit build_brickwall(const AnsatzSpec &spec);

/// CNOT brick of the given parity: pairs (p, p+1), (p+2, p+3), ... with p = parity % 2.
std::vector<std::pair<int, int>> brick_pairs(int n, int parity);

StateVector run_statevector(const Circuit &circuit, std::span<const double> theta,
                            const StateVector &input);

/// Product of embedded full-register gate matrices, last gate leftmost.
UnitaryMatrix circuit_unitary(const Circuit &circuit, std::span<const double> theta);

/// Full 2^m x 2^m matrix of one gate on an m-qubit register.
Matrix embed_gate(const Gate &gate, int num_qubits, std::span<const double> theta);

/// (p0, p1) of a Z measurement on one qubit.
std::pair<double, double> measure_probs(const StateVector &state, int qubit);

/// One line per qubit, one column per gate.
std::string to_text(const Circuit &circuit);

nlohmann::json to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &j);

}  // namespace qnnmi
