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
#include "qnnmi/qcore.hpp"

#include "qnnmi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qnnmi {

namespace {

bool is_power_of_two_dim(std::size_t dim, int num_qubits) {
    return num_qubits >= 0 && num_qubits < 63 && dim == (std::size_t{1} << num_qubits);
}

// Global basis-index offsets of every local index of a qubit subset.
std::vector<std::size_t> scatter_table(std::span<const int> qubits) {
    std::vector<std::size_t> table(std::size_t{1} << qubits.size());
    for (std::size_t local = 0; local < table.size(); ++local) {
        std::size_t global = 0;
        for (std::size_t t = 0; t < qubits.size(); ++t) {
            if ((local >> t) & 1U) {
                global |= std::size_t{1} << qubits[t];
            }
        }
        table[local] = global;
    }
    return table;
}

QubitSet complement(std::span<const int> keep, int m) {
    QubitSet rest;
    for (int q = 0; q < m; ++q) {
        if (!std::binary_search(keep.begin(), keep.end(), q)) {
            rest.push_back(q);
        }
    }
    return rest;
}

}  // namespace

Matrix::Matrix(std::size_t dim, std::vector<cplx> data) : dim_(dim), data_(std::move(data)) {
    if (data_.size() != dim_ * dim_) {
        throw std::invalid_argument("Matrix: data length is not dim*dim");
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

cplx Matrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

std::vector<cplx> Matrix::apply(std::span<const cplx> v) const {
    if (v.size() != dim_) {
        throw std::invalid_argument("Matrix::apply: dimension mismatch");
    }
    std::vector<cplx> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            acc += (*this)(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("Matrix product: dimension mismatch");
    }
    const std::size_t n = a.dim();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_abs_diff: size mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    return max_abs_diff(a.data(), b.data());
}

double unitarity_residual(const Matrix &u) {
    const Matrix g = u.adjoint() * u;
    return max_abs_diff(g, Matrix::identity(u.dim()));
}

double hermiticity_residual(const Matrix &h) {
    double worst = 0.0;
    for (std::size_t r = 0; r < h.dim(); ++r) {
        for (std::size_t c = r; c < h.dim(); ++c) {
            worst = std::max(worst, std::abs(h(r, c) - std::conj(h(c, r))));
        }
    }
    return worst;
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits_ < 1 || !is_power_of_two_dim(amps_.size(), num_qubits_)) {
        throw std::invalid_argument("StateVector: need num_qubits >= 1 and 2^num_qubits amplitudes");
    }
    double sq = 0.0;
    for (const auto &a : amps_) {
        sq += std::norm(a);
    }
    if (std::abs(sq - 1.0) > kNormTol) {
        throw std::invalid_argument("StateVector: amplitudes are not normalized (|psi|^2 = " +
                                    std::to_string(sq) + ")");
    }
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    if (num_qubits < 1 || num_qubits >= 63) {
        throw std::invalid_argument("StateVector::basis: bad qubit count");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
        throw std::out_of_range("StateVector::basis: index out of range");
    }
    std::vector<cplx> amps(dim);
    amps[index] = 1.0;
    return {num_qubits, std::move(amps)};
}

double StateVector::norm() const {
    double sq = 0.0;
    for (const auto &a : amps_) {
        sq += std::norm(a);
    }
    return std::sqrt(sq);
}

Matrix StateVector::projector() const {
    Matrix p(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            p(r, c) = amps_[r] * std::conj(amps_[c]);
        }
    }
    return p;
}

DensityMatrix::DensityMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), m_(std::move(entries)) {
    if (num_qubits_ < 1 || !is_power_of_two_dim(m_.dim(), num_qubits_)) {
        throw std::invalid_argument("DensityMatrix: dimension is not 2^num_qubits");
    }
    if (hermiticity_residual(m_) > kHermitianTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - 1.0) > kNormTol) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector &psi) {
    return {psi.num_qubits(), psi.projector()};
}

UnitaryMatrix::UnitaryMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), m_(std::move(entries)) {
    if (num_qubits_ < 1 || !is_power_of_two_dim(m_.dim(), num_qubits_)) {
        throw std::invalid_argument("UnitaryMatrix: dimension is not 2^num_qubits");
    }
    if (unitarity_residual(m_) > kUnitaryTol) {
        throw std::invalid_argument("UnitaryMatrix: matrix is not unitary");
    }
}

void check_qubit_set(std::span<const int> keep, int m) {
    if (keep.empty()) {
        throw std::invalid_argument("qubit set is empty");
    }
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= m) {
            throw std::out_of_range("qubit index " + std::to_string(keep[i]) +
                                    " out of range for " + std::to_string(m) + " qubits");
        }
        if (i > 0 && keep[i] <= keep[i - 1]) {
            throw std::invalid_argument("qubit set must be sorted and duplicate-free");
        }
    }
}

DensityMatrix reduced_density(const StateVector &psi, std::span<const int> keep) {
    check_qubit_set(keep, psi.num_qubits());
    const auto kept = scatter_table(keep);
    const auto rest = scatter_table(complement(keep, psi.num_qubits()));
    const auto amps = psi.amplitudes();

    Matrix rho(kept.size());
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a; b < kept.size(); ++b) {
            cplx acc = 0.0;
            for (const std::size_t c : rest) {
                acc += amps[kept[a] | c] * std::conj(amps[kept[b] | c]);
            }
            rho(a, b) = acc;
            rho(b, a) = std::conj(acc);
        }
    }
    return {static_cast<int>(keep.size()), std::move(rho)};
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep) {
    check_qubit_set(keep, rho.num_qubits());
    const auto kept = scatter_table(keep);
    const auto rest = scatter_table(complement(keep, rho.num_qubits()));

    Matrix out(kept.size());
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = 0; b < kept.size(); ++b) {
            cplx acc = 0.0;
            for (const std::size_t c : rest) {
                acc += rho(kept[a] | c, kept[b] | c);
            }
            out(a, b) = acc;
        }
    }
    return {static_cast<int>(keep.size()), std::move(out)};
}

EigenResult hermitian_eigen(const Matrix &h) {
    const std::size_t n = h.dim();
    double scale = 0.0;
    for (const auto &x : h.data()) {
        scale = std::max(scale, std::abs(x));
    }
    if (hermiticity_residual(h) > kHermitianTol * std::max(1.0, scale)) {
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
    }

    Matrix a = h;
    Matrix v = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }

    constexpr int kMaxSweeps = 100;
    const double threshold = 1e-12 * std::max(1.0, scale);
    EigenResult result;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                s += 2.0 * std::norm(a(p, q));
            }
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r < 1e-300) {
                    continue;
                }
                const cplx w = a(p, q) / r;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- A J, V <- V J
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(w) * akq;
                    a(k, q) = s * w * akp + c * akq;
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(w) * vkq;
                    v(k, q) = s * w * vkp + c * vkq;
                }
                // A <- J^dagger A
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * w * aqk;
                    a(q, k) = s * std::conj(w) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (off_norm() > threshold) {
        throw NumericalError("hermitian_eigen: Jacobi did not converge in 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    result.values.resize(n);
    result.vectors = Matrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            result.vectors(r, k) = v(r, order[k]);
        }
    }
    result.sweeps = sweep;
    return result;
}

std::vector<double> hermitian_eigenvalues(const Matrix &h) { return hermitian_eigen(h).values; }

std::vector<double> hermitian_eigenvalues(const DensityMatrix &rho) {
    return hermitian_eigenvalues(rho.matrix());
}

double entropy_bits(std::span<const double> eigenvalues) {
    double s = 0.0;
    for (const double lambda : eigenvalues) {
        if (lambda < -kNegativeEigenTol) {
            throw NumericalError("entropy: eigenvalue " + std::to_string(lambda) +
                                 " is below the positivity tolerance");
        }
        if (lambda > kEigenCutoff) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix &rho) {
    const auto spectrum = hermitian_eigenvalues(rho);
    return entropy_bits(spectrum);
}

}  // namespace qnnmi
