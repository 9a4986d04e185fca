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
#include "qnnmi/infodyn.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

namespace qnnmi {

SubsystemPartition::SubsystemPartition(int n, QubitSet measured) : n_(n), mi_(std::move(measured)) {
    if (n < 2) {
        throw std::invalid_argument("partition needs n >= 2");
    }
    check_qubit_set(mi_, n);
    if (static_cast<int>(mi_.size()) == n) {
        throw std::invalid_argument("partition: discard subsystem would be empty");
    }
    for (int q = 0; q < n; ++q) {
        if (std::binary_search(mi_.begin(), mi_.end(), q)) {
            mo_.push_back(q + n);
        } else {
            di_.push_back(q);
            do_.push_back(q + n);
        }
    }
}

ChoiState::ChoiState(StateVector psi) : psi_(std::move(psi)) {
    if (psi_.num_qubits() % 2 != 0) {
        throw std::invalid_argument("Choi state needs an even qubit count");
    }
}

ChoiState choi_state(const UnitaryMatrix &u) {
    const int n = u.num_qubits();
    const std::size_t dim = u.dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<cplx> amps(dim * dim);
    for (std::size_t in = 0; in < dim; ++in) {
        for (std::size_t out = 0; out < dim; ++out) {
            amps[in + dim * out] = u(out, in) * scale;
        }
    }
    return ChoiState(StateVector(2 * n, std::move(amps)));
}

QubitSet set_union(std::span<const int> a, std::span<const int> b) {
    QubitSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace {

void check_disjoint(std::span<const int> a, std::span<const int> b) {
    QubitSet common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (!common.empty()) {
        throw std::invalid_argument("mutual_information: subsystems overlap");
    }
}

}  // namespace

double mutual_information(const StateVector &psi, std::span<const int> a, std::span<const int> b) {
    check_qubit_set(a, psi.num_qubits());
    check_qubit_set(b, psi.num_qubits());
    check_disjoint(a, b);
    const auto ab = set_union(a, b);
    return von_neumann_entropy(reduced_density(psi, a)) + von_neumann_entropy(reduced_density(psi, b)) -
           von_neumann_entropy(reduced_density(psi, ab));
}

double mutual_information(const ChoiState &psi, std::span<const int> a, std::span<const int> b) {
    return mutual_information(psi.state(), a, b);
}

double mutual_information_dense(const StateVector &psi, std::span<const int> a, std::span<const int> b) {
    check_qubit_set(a, psi.num_qubits());
    check_qubit_set(b, psi.num_qubits());
    check_disjoint(a, b);
    const auto rho = DensityMatrix::from_pure(psi);
    const auto ab = set_union(a, b);
    return von_neumann_entropy(partial_trace(rho, a)) + von_neumann_entropy(partial_trace(rho, b)) -
           von_neumann_entropy(partial_trace(rho, ab));
}

double clamp_mi(double raw) { return std::max(raw, 0.0); }

MIRecord mi_record(const ChoiState &psi, const SubsystemPartition &partition, int epoch) {
    if (psi.n() != partition.n()) {
        throw std::invalid_argument("mi_record: partition size differs from Choi state");
    }
    MIRecord rec;
    rec.epoch = epoch;
    rec.i_di_mo = mutual_information(psi, partition.di(), partition.mo());
    rec.i_mi_mo = mutual_information(psi, partition.mi(), partition.mo());
    for (const int q : partition.di()) {
        const QubitSet single{q};
        rec.per_qubit.push_back(mutual_information(psi, single, partition.mo()));
    }
    return rec;
}

std::vector<MIRecord> mi_trace(std::span<const std::vector<double>> theta_snapshots, const Circuit &circuit,
                               const SubsystemPartition &partition) {
    if (circuit.num_qubits() != partition.n()) {
        throw std::invalid_argument("mi_trace: partition size differs from circuit");
    }
    std::vector<MIRecord> out;
    out.reserve(theta_snapshots.size());
    int epoch = 0;
    for (const auto &theta : theta_snapshots) {
        const auto u = circuit_unitary(circuit, theta);
        out.push_back(mi_record(choi_state(u), partition, epoch++));
    }
    return out;
}

std::vector<std::string> per_qubit_columns(const SubsystemPartition &partition) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < partition.di().size(); ++k) {
        names.push_back("I_Di" + std::to_string(k + 1) + "_Mo");
    }
    return names;
}

}  // namespace qnnmi
