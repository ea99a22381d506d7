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

#ifndef NAVQT_OPTIMIZER_HPP
#define NAVQT_OPTIMIZER_HPP

#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "navqt/ansatz.hpp"
#include "navqt/hamiltonian.hpp"
#include "navqt/record.hpp"
#include "navqt/simulator.hpp"
#include "navqt/thermo.hpp"

namespace navqt {

inline constexpr double kLambdaFdStep = 1e-4;
inline constexpr double kThetaFdStep = 1e-5;
inline constexpr double kShift = std::numbers::pi / 4.0;  // exp(-i theta P) with P^2 = I

struct BackendSpec {
    Backend kind = Backend::Exact;
    int K = 0;  // 0 means 500 N
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Energy Tr[H rho(theta, lambda)] on the chosen backend. `stream` selects the
/// trajectory sample set; the exact backend ignores it.
double evaluate_energy(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda, const CMatrix& h,
                       const BackendSpec& backend, std::uint64_t stream = 0);

/// Parameter-shift gradient dE/dtheta per slot: for every gate g tied to the
/// slot, E(angle_g + pi/4) - E(angle_g - pi/4), summed over the slot's gates.
std::vector<double> energy_grad_theta(const NoisyAnsatz& a, const CMatrix& h, const BackendSpec& backend,
                                      std::uint64_t stream = 0);
std::vector<double> energy_grad_theta(const NoisyAnsatz& a, const PauliHamiltonian& h, const BackendSpec& backend);

/// Finite difference dE/dlambda: central inside [lambda_min, 1], one-sided at
/// the boundary.
double energy_grad_lambda(const NoisyAnsatz& a, const CMatrix& h, const BackendSpec& backend,
                          double h_fd = kLambdaFdStep, std::uint64_t stream = 0);
double energy_grad_lambda(const NoisyAnsatz& a, const PauliHamiltonian& h, const BackendSpec& backend,
                          double h_fd = kLambdaFdStep);

/// Finite difference (central when possible) of a scalar function of lambda.
template <class Fn>
double lambda_difference(Fn&& f, double lambda, double lambda_min, double h_fd);

struct GradReport {
    std::vector<double> grad_theta;
    double grad_lambda_energy = 0.0;
    double grad_lambda_entropy = 0.0;
};

struct OptState {
    std::vector<double> theta;
    double lambda = 0.0;
    double eta_theta = 0.0;
    double eta_lambda = 0.0;
    int iter = 0;
    std::vector<IterationMetrics> history;
};

OptState initial_state(const NoisyAnsatz& a, double eta_theta, double eta_lambda);

struct StepOptions {
    double h_fd_lambda = kLambdaFdStep;
    const FidelityReference* fidelity = nullptr;  // exact backend only
    bool track_fidelity = false;
};

/// Gradients at the state's parameters and the energy there.
GradReport compute_gradients(const NoisyAnsatz& a, const CMatrix& h, double beta, const BackendSpec& backend,
                             double h_fd_lambda, std::uint64_t stream, double* energy_out = nullptr,
                             CMatrix* rho_out = nullptr);

/// One NAVQT update:
///   theta  <- theta - eta_theta * dE/dtheta
///   lambda <- clamp(lambda - eta_lambda * (dE/dlambda - dS~/dlambda / beta))
/// and appends (E, S~, E - S~/beta) evaluated before the update.
OptState navqt_step(const OptState& s, const NoisyAnsatz& a, const CMatrix& h, double beta, const BackendSpec& backend,
                    const StepOptions& options = {});
OptState navqt_step(const OptState& s, const NoisyAnsatz& a, const PauliHamiltonian& h, double beta,
                    const BackendSpec& backend, const StepOptions& options = {});

BackendSpec backend_for(const ExperimentConfig& config);
NoisyAnsatz ansatz_for(const ExperimentConfig& config);

/// Approximate-free-energy training; keeps the lowest-cost iterate.
RunRecord train(const ExperimentConfig& config, const PauliHamiltonian& h);
RunRecord train(const ExperimentConfig& config);

/// E(rho) - S(rho)/beta on the exact backend, gradients by central differences.
RunRecord train_true_free_energy(const ExperimentConfig& config, const PauliHamiltonian& h);

/// Dispatches on config.mode.
RunRecord run_experiment(const ExperimentConfig& config, const PauliHamiltonian& h);

struct ScanResult {
    std::vector<double> theta;
    double lambda = 0.0;
    double free_energy = 0.0;  // approximate
    long evaluated = 0;
};

/// Brute-force scan of the approximate free energy over a Cartesian grid: every
/// slot takes each value of `theta_values`, lambda each value of `lambda_values`.
ScanResult scan_parameters(const NoisyAnsatz& a, const CMatrix& h, double beta, std::span<const double> theta_values,
                           std::span<const double> lambda_values, long max_points = 10'000'000);

template <class Fn>
double lambda_difference(Fn&& f, double lambda, double lambda_min, double h_fd) {
    if (!(h_fd > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    const bool has_low = lambda - h_fd >= lambda_min;
    const bool has_high = lambda + h_fd <= 1.0;
    if (has_low && has_high) return (f(lambda + h_fd) - f(lambda - h_fd)) / (2.0 * h_fd);
    if (has_high) return (f(lambda + h_fd) - f(lambda)) / h_fd;
    if (has_low) return (f(lambda) - f(lambda - h_fd)) / h_fd;
    throw std::invalid_argument("finite-difference step does not fit inside [lambda_min, 1]");
}

}  // namespace navqt

#endif  // NAVQT_OPTIMIZER_HPP
