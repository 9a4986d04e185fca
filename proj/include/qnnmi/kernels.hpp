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
 * Batched measurement kernels used by the training loop.
 *
 * Each kernel has a serial reference and an OpenMP version. Both write every
 * output element independently, so their results are bit-identical; the
 * serial one is kept for tests and benchmarks.
 */
#pragma once

#include "qnnmi/circuit.hpp"
#include "qnnmi/qcore.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace qnnmi::kernels {

enum class Backend { Serial, OpenMP };

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view name);

/// Encoded samples stored contiguously, sample-major.
class SampleBatch {
  public:
    SampleBatch() = default;
    explicit SampleBatch(std::span<const StateVector> states);

    [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return count_; }
    [[nodiscard]] std::span<const cplx> sample(std::size_t i) const {
        return std::span<const cplx>(amps_).subspan(i * dim_, dim_);
    }

  private:
    int num_qubits_ = 0;
    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::vector<cplx> amps_;
};

/// U(theta) built column by column with the statevector gate kernel.
Matrix unitary_by_columns(const Circuit &circuit, std::span<const double> theta);

/// Unitaries for theta and for theta +/- shift on every slot, in the order
/// [theta, +e_0, -e_0, +e_1, -e_1, ...].
std::vector<Matrix> shifted_unitaries(const Circuit &circuit, std::span<const double> theta, double shift);

/// out[u * batch.size() + s] = probability that `qubit` reads 1 after
/// unitaries[u] acts on sample s.
void excited_probs_serial(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                          std::span<double> out);
void excited_probs_omp(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                       std::span<double> out);

std::vector<double> excited_probs(std::span<const Matrix> unitaries, const SampleBatch &batch, int qubit,
                                  Backend backend);

/// Threads the OpenMP kernels would use right now (1 without OpenMP).
int max_threads();

}  // namespace qnnmi::kernels
