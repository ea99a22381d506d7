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

#ifndef NAVQT_QCORE_HPP
#define NAVQT_QCORE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace navqt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Qubit ordering: qubit 0 is the most significant bit of a basis index, so
/// that kron(A, B) places A on qubit 0.
inline std::size_t qubit_mask(int qubit, int n_qubits) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

Pauli pauli_from_char(char c);

/// 2x2 matrix of a single Pauli letter.
CMatrix pauli_2x2(Pauli which);

/// Full 2^n operator acting as `which` on `qubit` and identity elsewhere.
CMatrix pauli(Pauli which, int qubit, int n_qubits);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Number of qubits for a dimension; throws unless dim is a power of two.
int qubits_for_dim(Eigen::Index dim);

double max_abs(const CMatrix& m);
double hermiticity_residual(const CMatrix& m);

struct Eigensystem {
    RVector values;   // ascending
    CMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. Throws std::invalid_argument when
/// the input deviates from Hermitian by more than 1e-8 in max-norm.
Eigensystem hermitian_eig(const CMatrix& m);

/// Applies `f` to the eigenvalues of a Hermitian PSD matrix. Eigenvalues in
/// [-1e-8, eigen_floor) are raised to eigen_floor; anything below -1e-8 throws
/// std::domain_error.
CMatrix matrix_fn(const CMatrix& m, const std::function<double(double)>& f,
                  double eigen_floor = 0.0);

/// Reassembles V diag(f(w)) V^dagger from an existing eigensystem.
CMatrix apply_spectrum(const Eigensystem& eig, const RVector& new_values);

class DensityMatrix {
  public:
    static constexpr double kTolerance = 1e-10;

    DensityMatrix() = default;

    /// Wraps a matrix without the eigenvalue check; invariants are verified in
    /// debug builds only. Throws if the dimension is not a power of two.
    explicit DensityMatrix(CMatrix matrix);

    /// Wraps a matrix and always verifies the three invariants.
    static DensityMatrix checked(CMatrix matrix);

    static DensityMatrix zero_state(int n_qubits);
    static DensityMatrix maximally_mixed(int n_qubits);
    static DensityMatrix from_pure(const CVector& psi);

    const CMatrix& matrix() const { return matrix_; }
    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    /// Throws std::domain_error describing the first violated invariant.
    void validate() const;
    bool is_valid() const;

  private:
    CMatrix matrix_;
    int n_qubits_ = 0;
};

class StateVector {
  public:
    static constexpr double kTolerance = 1e-10;

    explicit StateVector(CVector amplitudes);
    static StateVector zero_state(int n_qubits);

    const CVector& amplitudes() const { return amps_; }
    CVector& mutable_amplitudes() { return amps_; }
    int n_qubits() const { return n_qubits_; }

  private:
    CVector amps_;
    int n_qubits_ = 0;
};

/// Reduced state on the qubits in `keep` (any order; output ordered ascending).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

}  // namespace navqt

#endif  // NAVQT_QCORE_HPP
