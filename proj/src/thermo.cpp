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

#include "navqt/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace navqt {

namespace {

constexpr int kMaxDenseQubits = 10;
constexpr double kNegativeEigenTol = 1e-8;
constexpr double kImagTol = 1e-10;
constexpr double kFidelitySlack = 1e-9;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("inverse temperature must be positive and finite");
    }
}

CMatrix psd_sqrt(const CMatrix& m) {
    return matrix_fn(m, [](double w) { return std::sqrt(w); }, 0.0);
}

double clip_fidelity(double f) {
    if (f > 1.0 && f <= 1.0 + kFidelitySlack) return 1.0;
    if (f < 0.0 && f >= -kFidelitySlack) return 0.0;
    return f;
}

}  // namespace

ThermalState thermal_state_full(const CMatrix& h, double beta) {
    check_beta(beta);
    const int n = qubits_for_dim(h.rows());
    if (n > kMaxDenseQubits) throw std::invalid_argument("thermal_state: too many qubits for dense evaluation");
    Eigensystem eig = hermitian_eig(h);
    const RVector& w = eig.values;
    // log Z = -beta c + log sum exp(-beta (w_i - c)). With c the ground energy
    // every exponent is <= 0 and the leading term is exactly exp(0).
    const double c = w.minCoeff();
    double shifted_sum = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) shifted_sum += std::exp(-beta * (w[i] - c));
    const double log_shifted = std::log(shifted_sum);
    RVector populations(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        // log rho eigenvalue: -beta w_i - log Z
        populations[i] = std::exp(-beta * (w[i] - c) - log_shifted);
    }
    CMatrix rho = apply_spectrum(eig, populations);
    rho = 0.5 * (rho + rho.adjoint());
    ThermalState out{DensityMatrix(std::move(rho)), w, populations, -beta * c + log_shifted, beta};
    return out;
}

ThermalState thermal_state_full(const PauliHamiltonian& h, double beta) {
    return thermal_state_full(materialize(h), beta);
}

DensityMatrix thermal_state(const PauliHamiltonian& h, double beta) {
    return thermal_state_full(h, beta).rho;
}

double energy(const CMatrix& rho, const CMatrix& h) {
    if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
        throw std::invalid_argument("energy: state and Hamiltonian dimensions differ");
    }
    const Complex value = h.transpose().cwiseProduct(rho).sum();
    if (std::abs(value.imag()) > kImagTol) {
        std::ostringstream msg;
        msg << "energy: imaginary residue " << value.imag() << " exceeds 1e-10";
        throw std::domain_error(msg.str());
    }
    return value.real();
}

double energy(const DensityMatrix& rho, const CMatrix& h) { return energy(rho.matrix(), h); }

double energy(const DensityMatrix& rho, const PauliHamiltonian& h) {
    if (h.n_qubits != rho.n_qubits()) throw std::invalid_argument("energy: qubit counts differ");
    return energy(rho.matrix(), materialize(h));
}

double entropy_of_spectrum(const RVector& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double w = eigenvalues[i];
        if (w < -kNegativeEigenTol) {
            std::ostringstream msg;
            msg << "entropy: eigenvalue " << w << " is below -1e-8";
            throw std::domain_error(msg.str());
        }
        s -= xlogx(std::max(w, 0.0));
    }
    return s;
}

double von_neumann_entropy(const CMatrix& rho) {
    return entropy_of_spectrum(hermitian_eig(rho).values);
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double effective_noise(double lambda, int m) { return 1.0 - std::pow(1.0 - lambda, m); }

double approx_entropy(double lambda, int m, int n_qubits) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("approx_entropy: lambda outside [0, 1]");
    if (m < 1 || n_qubits < 1) throw std::invalid_argument("approx_entropy: need m >= 1 and N >= 1");
    const double big_lambda = effective_noise(lambda, m);
    const double single = -(xlogx(1.0 - 0.5 * big_lambda) + xlogx(0.5 * big_lambda));
    return n_qubits * single;
}

double approx_entropy_grad(double lambda, int m, int n_qubits) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::domain_error("approx_entropy_grad: lambda must lie in (0, 1]; clamp to lambda_min first");
    }
    if (m < 1 || n_qubits < 1) throw std::invalid_argument("approx_entropy_grad: need m >= 1 and N >= 1");
    constexpr double d = 2.0;
    const double survive = std::pow(1.0 - lambda, m);
    const double big_lambda = 1.0 - survive;
    const double bracket = -std::log(big_lambda / d) + std::log((big_lambda + d * survive) / d);
    return n_qubits * (d - 1.0) / d * m * std::pow(1.0 - lambda, m - 1) * bracket;
}

double free_energy(double energy_value, double entropy, double beta) {
    check_beta(beta);
    return energy_value - entropy / beta;
}

FidelityReference::FidelityReference(const DensityMatrix& reference)
    : sqrt_reference_(psd_sqrt(reference.matrix())) {}

double FidelityReference::operator()(const CMatrix& rho) const {
    if (rho.rows() != sqrt_reference_.rows()) throw std::invalid_argument("fidelity: dimensions differ");
    const CMatrix product = sqrt_reference_ * psd_sqrt(rho);
    Eigen::JacobiSVD<CMatrix> svd(product);
    return clip_fidelity(svd.singularValues().sum());
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw std::invalid_argument("fidelity: dimensions differ");
    return FidelityReference(rho1)(rho2.matrix());
}

double free_energy_of_state(const CMatrix& rho, const CMatrix& h, double beta) {
    return free_energy(energy(rho, h), von_neumann_entropy(rho), beta);
}

double free_energy_of_state(const DensityMatrix& rho, const PauliHamiltonian& h, double beta) {
    if (h.n_qubits != rho.n_qubits()) throw std::invalid_argument("free_energy_of_state: qubit counts differ");
    return free_energy_of_state(rho.matrix(), materialize(h), beta);
}

}  // namespace navqt
