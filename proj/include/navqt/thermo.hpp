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

#ifndef NAVQT_THERMO_HPP
#define NAVQT_THERMO_HPP

#include "navqt/hamiltonian.hpp"
#include "navqt/qcore.hpp"

namespace navqt {

/// Thermal state together with the quantities computed on the way.
struct ThermalState {
    DensityMatrix rho;
    RVector hamiltonian_spectrum;  // ascending
    RVector populations;           // Boltzmann weights, same order
    double log_partition = 0.0;    // ln Z
    double beta = 0.0;
};

/// exp(-beta H) / Z computed through log rho = -beta H - ln Z, with ln Z taken
/// by log-sum-exp shifted by the ground energy so no exponent is positive.
ThermalState thermal_state_full(const PauliHamiltonian& h, double beta);
ThermalState thermal_state_full(const CMatrix& h, double beta);
DensityMatrix thermal_state(const PauliHamiltonian& h, double beta);

/// Tr[H rho]. Throws on dimension mismatch or an imaginary part above 1e-10.
double energy(const DensityMatrix& rho, const CMatrix& h);
double energy(const DensityMatrix& rho, const PauliHamiltonian& h);
double energy(const CMatrix& rho, const CMatrix& h);

/// -sum w ln w in nats with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const CMatrix& rho);
double entropy_of_spectrum(const RVector& eigenvalues);

/// 1 - (1 - lambda)^m, the strength of m stacked depolarizing channels.
double effective_noise(double lambda, int m);

/// Entropy of N qubits each sent through m depolarizing channels from |0>:
/// N * S1(L) with L = 1 - (1-lambda)^m,
/// S1(L) = -[(1 - L/2) ln(1 - L/2) + (L/2) ln(L/2)].
double approx_entropy(double lambda, int m, int n_qubits);

/// Closed-form d/dlambda of approx_entropy; requires lambda in (0, 1].
double approx_entropy_grad(double lambda, int m, int n_qubits);

double free_energy(double energy, double entropy, double beta);

/// Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), evaluated as the sum
/// of singular values of sqrt(rho1) sqrt(rho2).
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Fidelity against a fixed reference whose square root is computed once.
class FidelityReference {
  public:
    explicit FidelityReference(const DensityMatrix& reference);
    double operator()(const CMatrix& rho) const;

  private:
    CMatrix sqrt_reference_;
};

double free_energy_of_state(const DensityMatrix& rho, const PauliHamiltonian& h, double beta);
double free_energy_of_state(const CMatrix& rho, const CMatrix& h, double beta);

}  // namespace navqt

#endif  // NAVQT_THERMO_HPP
