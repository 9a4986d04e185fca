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
#include "qnnmi/kernels.hpp"

#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qnnmi::kernels {

std::string_view backend_name(Backend b) { return b == Backend::Serial ? "serial" : "openmp"; }

Backend parse_backend(std::string_view name) {
    if (name == "serial") {
        return Backend::Serial;
    }
    if (name == "openmp" || name == "omp") {
        return Backend::OpenMP;
    }
    throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

SampleBatch::SampleBatch(std::span<const StateVector> states) {
    if (states.empty()) {
        return;
    }
    num_qubits_ = states.front().num_qubits();
    dim_ = states.front().dim();
    count_ = states.size();
    amps_.reserve(dim_ * count_);
    for (const auto &s : states) {
        if (s.num_qubits() != num_qubits_) {
            throw std::invalid_argument("SampleBatch: mixed register sizes");
        }
        amps_.insert(amps_.end(), s.amplitudes().begin(), s.amplitudes().end());
    }
}

Matrix unitary_by_columns(const Circuit &circuit, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(circuit.num_params())) {
        throw std::invalid_argument("unitary_by_columns: theta length mismatch");
    }
    const int n = circuit.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    Matrix u(dim);
    std::vector<cplx> col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), cplx{});
        col[j] = 1.0;
        for (const auto &gate : circuit.gates()) {
            apply_gate_inplace(col, n, gate, theta);
        }
        for (std::size_t r = 0; r < dim; ++r) {
            u(r, j) = col[r];
        }
    }
    return u;
}

std::vector<Matrix> shifted_unitaries(const Circuit &circuit, std::span<const double> theta, double shift) {
    std::vector<Matrix> out;
    out.reserve(1 + 2 * theta.size());
    out.push_back(unitary_by_columns(circuit, theta));
    std::vector<double> work(theta.begin(), theta.end());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        work[j] = theta[j] + shift;
        out.push_back(unitary_by_columns(circuit, work));
        work[j] = theta[j] - shift;
        out.push_back(unitary_by_columns(circuit, work));
        work[j] = theta[j];
    }
    return out;
}

namespace {

void check_shapes(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                  std::span<double> out) {
    if (out.size() != unitaries.size() * batch.size()) {
        throw std::invalid_argument("excited_probs: output span has the wrong size");
    }
    if (qubit < 0 || qubit >= batch.num_qubits()) {
        throw std::out_of_range("excited_probs: qubit out of range");
    }
    for (const auto &u : unitaries) {
        if (u.dim() != batch.dim()) {
            throw std::invalid_argument("excited_probs: unitary dimension differs from samples");
        }
    }
}

inline double excited_prob(const Matrix &u, std::span<const cplx> psi, std::size_t mask) {
    const std::size_t dim = u.dim();
    double p1 = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        if (!(r & mask)) {
            continue;
        }
        cplx amp = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            amp += u(r, c) * psi[c];
        }
        p1 += std::norm(amp);
    }
    return p1;
}

}  // namespace

void excited_probs_serial(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                          std::span<double> out) {
    check_shapes(unitaries, batch, qubit, out);
    const std::size_t mask = std::size_t{1} << qubit;
    const std::size_t count = batch.size();
    for (std::size_t u = 0; u < unitaries.size(); ++u) {
        for (std::size_t s = 0; s < count; ++s) {
            out[u * count + s] = excited_prob(unitaries[u], batch.sample(s), mask);
        }
    }
}

void excited_probs_omp(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                       std::span<double> out) {
    check_shapes(unitaries, batch, qubit, out);
    const std::size_t mask = std::size_t{1} << qubit;
    const auto count = static_cast<std::ptrdiff_t>(batch.size());
    const auto total = static_cast<std::ptrdiff_t>(unitaries.size()) * count;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const auto u = static_cast<std::size_t>(idx / count);
        const auto s = static_cast<std::size_t>(idx % count);
        out[idx] = excited_prob(unitaries[u], batch.sample(s), mask);
    }
}

std::vector<double> excited_probs(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                                  Backend backend) {
    std::vector<double> out(unitaries.size() * batch.size());
    if (backend == Backend::OpenMP) {
        excited_probs_omp(unitaries, batch, qubit, out);
    } else {
        excited_probs_serial(unitaries, batch, qubit, out);
    }
    return out;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace qnnmi::kernels
