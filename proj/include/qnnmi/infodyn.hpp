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
 * Mutual information between the input and output legs of an ansatz.
 *
 * The unitary is turned into a pure state on a doubled register by acting on
 * one half of n EPR pairs. Register layout: input leg on qubits 0..n-1,
 * output leg on qubits n..2n-1, so the amplitude at (in = i, out = j) sits
 * at index i + 2^n j and equals U[j, i] / sqrt(2^n).
 *
 * The measured qubits split each leg into a measurement part (Mi, Mo) and a
 * discard part (Di, Do). All mutual informations are in bits.
 */
#pragma once

#include "qnnmi/circuit.hpp"
#include "qnnmi/qcore.hpp"

#include <span>
#include <string>
#include <vector>

namespace qnnmi {

class SubsystemPartition {
  public:
    SubsystemPartition(int n, QubitSet measured);

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] const QubitSet &mi() const noexcept { return mi_; }
    [[nodiscard]] const QubitSet &di() const noexcept { return di_; }
    [[nodiscard]] const QubitSet &mo() const noexcept { return mo_; }
    [[nodiscard]] const QubitSet &dout() const noexcept { return do_; }

    /// Input-leg register index of discard qubit k (k = 0 is Di1).
    [[nodiscard]] int di_qubit(std::size_t k) const { return di_.at(k); }

  private:
    int n_;
    QubitSet mi_, di_, mo_, do_;
};

/// Pure state on 2n qubits with input leg low.
class ChoiState {
  public:
    /// Throws std::invalid_argument if the state is not a valid Choi state layout (odd qubit count).
    explicit ChoiState(StateVector psi);

    [[nodiscard]] int n() const noexcept { return psi_.num_qubits() / 2; }
    [[nodiscard]] const StateVector &state() const noexcept { return psi_; }

  private:
    StateVector psi_;
};

ChoiState choi_state(const UnitaryMatrix &u);

QubitSet set_union(std::span<const int> a, std::span<const int> b);

/// S(A) + S(B) - S(AB) from reduced_density. Raw value, may be slightly negative.
double mutual_information(const StateVector &psi, std::span<const int> a, std::span<const int> b);
double mutual_information(const ChoiState &psi, std::span<const int> a, std::span<const int> b);

/// Same quantity through the full density matrix and partial_trace; the
/// independent route for cross-checks.
double mutual_information_dense(const StateVector &psi, std::span<const int> a, std::span<const int> b);

struct MIRecord {
    int epoch = 0;
    double i_di_mo = 0.0;
    double i_mi_mo = 0.0;
    /// I(Di_k : Mo) for each discard qubit in ascending register order.
    std::vector<double> per_qubit;
};

/// Negative round-off reported as zero.
double clamp_mi(double raw);

MIRecord mi_record(const ChoiState &psi, const SubsystemPartition &partition, int epoch = 0);

/// One record per parameter snapshot: build U, its Choi state, and the MI values.
std::vector<MIRecord> mi_trace(std::span<const std::vector<double>> theta_snapshots, const Circuit &circuit,
                               const SubsystemPartition &partition);

/// Column names of the per-qubit values: I_Di1_Mo, I_Di2_Mo, ...
std::vector<std::string> per_qubit_columns(const SubsystemPartition &partition);

}  // namespace qnnmi
