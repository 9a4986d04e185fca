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
 * Dense complex state and matrix primitives.
 *
 * Basis-index convention used everywhere in the library: qubit 0 is the
 * least-significant bit of the basis index. A subsystem selected by a sorted
 * qubit set keeps that ordering, i.e. keep[0] becomes local qubit 0.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qnnmi {

using cplx = std::complex<double>;

/// Sorted, duplicate-free list of qubit indices.
using QubitSet = std::vector<int>;

inline constexpr double kNormTol = 1e-9;
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-8;
inline constexpr double kEigenCutoff = 1e-12;
inline constexpr double kNegativeEigenTol = 1e-9;

/// Square dense complex matrix, row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    Matrix(std::size_t dim, std::vector<cplx> data);

    static Matrix identity(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    [[nodiscard]] const cplx &operator()(std::size_t r, std::size_t c) const {
        return data_[r * dim_ + c];
    }
    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }
    [[nodiscard]] std::span<cplx> data() noexcept { return data_; }

    [[nodiscard]] Matrix adjoint() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> v) const;

    friend Matrix operator*(const Matrix &a, const Matrix &b);

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Matrix &a, const Matrix &b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

/// Normalized pure state over 2^m basis states.
class StateVector {
  public:
    /// Throws std::invalid_argument unless the length is 2^m and the norm is 1.
    StateVector(int num_qubits, std::vector<cplx> amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(int num_qubits, std::uint64_t index = 0);

    [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const cplx &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm() const;

    /// |psi><psi| as a plain matrix.
    [[nodiscard]] Matrix projector() const;

  private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

/// Hermitian, unit-trace matrix. Positivity is checked where the spectrum is
/// computed anyway (entropy), not at construction.
class DensityMatrix {
  public:
    DensityMatrix(int num_qubits, Matrix entries);
    static DensityMatrix from_pure(const StateVector &psi);

    [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }
    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    [[nodiscard]] const cplx &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    int num_qubits_;
    Matrix m_;
};

class UnitaryMatrix {
  public:
    /// Throws std::invalid_argument if U^dagger U deviates from I by more than 1e-8.
    UnitaryMatrix(int num_qubits, Matrix entries);

    [[nodiscard]] int num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }
    [[nodiscard]] const Matrix &matrix() const noexcept { return m_; }
    [[nodiscard]] const cplx &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    int num_qubits_;
    Matrix m_;
};

/// max |(U^dagger U - I)_ij|
double unitarity_residual(const Matrix &u);

/// max |H_ij - conj(H_ji)|
double hermiticity_residual(const Matrix &h);

/// Validates a keep set against a register of m qubits: nonempty, sorted,
/// unique, in range. Throws std::invalid_argument / std::out_of_range.
void check_qubit_set(std::span<const int> keep, int m);

/// Tr_complement(|psi><psi|) computed directly from amplitudes.
DensityMatrix reduced_density(const StateVector &psi, std::span<const int> keep);

/// Tr_complement(rho).
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep);

struct EigenResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws std::invalid_argument on non-Hermitian input
/// and qnnmi::NumericalError when 100 sweeps do not converge.
EigenResult hermitian_eigen(const Matrix &h);

/// Descending real spectrum of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Matrix &h);
std::vector<double> hermitian_eigenvalues(const DensityMatrix &rho);

/// S(rho) = -sum lambda log2 lambda, in bits.
double von_neumann_entropy(const DensityMatrix &rho);

/// Entropy of a spectrum with the library's cutoff/clamp rules.
double entropy_bits(std::span<const double> eigenvalues);

}  // namespace qnnmi
