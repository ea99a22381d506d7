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

#ifndef NAVQT_SIMULATOR_HPP
#define NAVQT_SIMULATOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navqt/ansatz.hpp"
#include "navqt/qcore.hpp"

namespace navqt {

enum class Backend { Exact, Trajectories };

std::string to_string(Backend backend);
Backend parse_backend(std::string_view text);

/// Sampling plan for the Pauli-trajectory backend. Each trajectory k draws from
/// its own engine seeded with derive_seed(rng_seed, k), so results do not depend
/// on `threads`.
struct TrajectoryPlan {
    int K = 1;
    std::uint64_t rng_seed = 0;
    int threads = 1;
};

/// K = 500 N
int default_trajectory_count(int n_qubits);

struct TrajectoryEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// One-qubit depolarizing channel in its Pauli form,
/// (1 - 3l/4) rho + (l/4)(X rho X + Y rho Y + Z rho Z).
DensityMatrix apply_depolarizing(const DensityMatrix& rho, int qubit, double lambda);

/// Runs the noisy circuit from |0...0><0...0| on the dense density matrix.
DensityMatrix simulate_exact(const NoisyAnsatz& a);

/// Same, with explicit per-gate angles and noise strength (gradient shifts).
CMatrix simulate_exact_matrix(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda);

/// Mean and standard error of <psi|O|psi> over K sampled trajectories.
TrajectoryEstimate simulate_trajectories(const NoisyAnsatz& a, const TrajectoryPlan& plan, const CMatrix& observable);
TrajectoryEstimate simulate_trajectories(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda,
                                         const TrajectoryPlan& plan, const CMatrix& observable);

/// Average of the K trajectory projectors. Limited to 8 qubits.
DensityMatrix trajectory_density_matrix(const NoisyAnsatz& a, const TrajectoryPlan& plan);

/// Final statevector of one trajectory (exposed for tests).
CVector run_trajectory(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda,
                       std::uint64_t trajectory_seed);

double pairwise_sum(std::span<const double> values);

namespace kernels {

/// rho <- D rho D^dagger for D = diag(phase).
void apply_diagonal(CMatrix& rho, std::span<const Complex> phase);
/// rho <- R rho R^dagger with R = exp(-i angle X_q).
void apply_rx(CMatrix& rho, int qubit, int n_qubits, double angle);
/// In-place depolarizing channel on one qubit, Pauli form.
void depolarize(CMatrix& rho, int qubit, int n_qubits, double lambda);

/// Diagonal of the product of the Z-type gates gates[begin, end).
void diagonal_phases(std::span<const GateSpec> gates, std::span<const double> angles, int n_qubits,
                     std::vector<Complex>& phase);

void apply_diagonal(CVector& psi, std::span<const Complex> phase);
void apply_rx(CVector& psi, int qubit, int n_qubits, double angle);
void apply_pauli(CVector& psi, int qubit, int n_qubits, Pauli p);

}  // namespace kernels

}  // namespace navqt

#endif  // NAVQT_SIMULATOR_HPP
