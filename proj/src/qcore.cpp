// Copyright 2026 The navqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "navqt/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace navqt {

namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kNegativeEigenTol = 1e-8;

}  // namespace

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
        default: throw std::invalid_argument(std::string("unknown Pauli letter '") + c + "'");
    }
}

CMatrix pauli_2x2(Pauli which) {
    const Complex i1{0.0, 1.0};
    CMatrix m(2, 2);
    switch (which) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i1, i1, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix pauli(Pauli which, int qubit, int n_qubits) {
    if (n_qubits < 1 || qubit < 0 || qubit >= n_qubits) {
        throw std::out_of_range("pauli: qubit " + std::to_string(qubit) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
    }
    // Build directly from bit operations rather than chained kron products.
    const auto dim = Eigen::Index{1} << n_qubits;
    const std::size_t mask = qubit_mask(qubit, n_qubits);
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const bool bit = (static_cast<std::size_t>(col) & mask) != 0;
        switch (which) {
            case Pauli::I: out(col, col) = 1.0; break;
            case Pauli::Z: out(col, col) = bit ? -1.0 : 1.0; break;
            case Pauli::X: out(static_cast<Eigen::Index>(col ^ mask), col) = 1.0; break;
            case Pauli::Y:
                // Y|0> = i|1>, Y|1> = -i|0>
                out(static_cast<Eigen::Index>(col ^ mask), col) = bit ? Complex{0, -1} : Complex{0, 1};
                break;
        }
    }
    return out;
}

int qubits_for_dim(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const CMatrix& m) {
    return max_abs(m - m.adjoint());
}

Eigensystem hermitian_eig(const CMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix is not square");
    const double residual = hermiticity_residual(m);
    if (!(residual <= kHermitianTol)) {
        std::ostringstream msg;
        msg << "hermitian_eig: input is not Hermitian (residual " << residual << ")";
        throw std::invalid_argument(msg.str());
    }
    // Symmetrize so roundoff in the input does not leak into the solver.
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix apply_spectrum(const Eigensystem& eig, const RVector& new_values) {
    return eig.vectors * new_values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

CMatrix matrix_fn(const CMatrix& m, const std::function<double(double)>& f, double eigen_floor) {
    Eigensystem eig = hermitian_eig(m);
    RVector mapped(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double w = eig.values[k];
        if (w < -kNegativeEigenTol) {
            std::ostringstream msg;
            msg << "matrix_fn: eigenvalue " << w << " is below -1e-8 (non-physical state)";
            throw std::domain_error(msg.str());
        }
        mapped[k] = f(std::max(w, eigen_floor));
    }
    CMatrix out = apply_spectrum(eig, mapped);
    return 0.5 * (out + out.adjoint());
}

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("DensityMatrix: matrix is not square");
    n_qubits_ = qubits_for_dim(matrix_.rows());
#ifndef NDEBUG
    validate();
#endif
}

DensityMatrix DensityMatrix::checked(CMatrix matrix) {
    DensityMatrix rho(std::move(matrix));
    rho.validate();
    return rho;
}

DensityMatrix DensityMatrix::zero_state(int n_qubits) {
    const auto dim = Eigen::Index{1} << n_qubits;
    CMatrix m = CMatrix::Zero(dim, dim);
    m(0, 0) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const auto dim = Eigen::Index{1} << n_qubits;
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
    return DensityMatrix(psi * psi.adjoint());
}

void DensityMatrix::validate() const {
    if (!matrix_.allFinite()) throw std::domain_error("DensityMatrix: non-finite entries");
    const double herm = hermiticity_residual(matrix_);
    if (herm > kTolerance) {
        std::ostringstream msg;
        msg << "DensityMatrix: not Hermitian (residual " << herm << ")";
        throw std::domain_error(msg.str());
    }
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << trace << " differs from 1";
        throw std::domain_error(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kTolerance) {
        std::ostringstream msg;
        msg << "DensityMatrix: eigenvalue " << min_eig << " is negative";
        throw std::domain_error(msg.str());
    }
}

bool DensityMatrix::is_valid() const {
    try {
        validate();
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    n_qubits_ = qubits_for_dim(amps_.size());
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kTolerance) {
        std::ostringstream msg;
        msg << "StateVector: norm " << norm << " differs from 1";
        throw std::domain_error(msg.str());
    }
}

StateVector StateVector::zero_state(int n_qubits) {
    CVector amps = CVector::Zero(Eigen::Index{1} << n_qubits);
    amps[0] = 1.0;
    return StateVector(std::move(amps));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw std::invalid_argument("partial_trace: duplicate qubit in keep set");
    }
    for (int q : kept) {
        if (q < 0 || q >= n) throw std::out_of_range("partial_trace: qubit index out of range");
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
    }

    const int nk = static_cast<int>(kept.size());
    const std::size_t out_dim = std::size_t{1} << nk;
    const std::size_t env_dim = std::size_t{1} << traced.size();

    // Scatter a local index (bits ordered like `qubits`) into a full basis index.
    auto scatter = [n](std::size_t local, const std::vector<int>& qubits) {
        std::size_t full = 0;
        const int count = static_cast<int>(qubits.size());
        for (int k = 0; k < count; ++k) {
            if (local & (std::size_t{1} << (count - 1 - k))) full |= qubit_mask(qubits[k], n);
        }
        return full;
    };

    std::vector<std::size_t> kept_index(out_dim), env_index(env_dim);
    for (std::size_t i = 0; i < out_dim; ++i) kept_index[i] = scatter(i, kept);
    for (std::size_t e = 0; e < env_dim; ++e) env_index[e] = scatter(e, traced);

    const CMatrix& m = rho.matrix();
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
    for (std::size_t i = 0; i < out_dim; ++i) {
        for (std::size_t j = 0; j < out_dim; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t e = 0; e < env_dim; ++e) {
                acc += m(static_cast<Eigen::Index>(kept_index[i] | env_index[e]),
                         static_cast<Eigen::Index>(kept_index[j] | env_index[e]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

}  // namespace navqt
