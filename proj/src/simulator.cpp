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

#include "navqt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "navqt/rng.hpp"

namespace navqt {

namespace {

constexpr int kMaxTrajectoryDensityQubits = 8;
constexpr int kTrajectoryBlock = 256;

void check_lambda_range(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("depolarizing strength must lie in [0, 1], got " + std::to_string(lambda));
    }
}

bool is_diagonal(GateKind kind) { return kind == GateKind::RZZ || kind == GateKind::RZ; }

// Applies one unitary layer to a density matrix or a statevector. Runs of
// Z-diagonal gates are fused into a single phase pass.
template <class State>
void apply_layer(State& state, const AnsatzLayer& layer, std::span<const double> angles, int n,
                 std::vector<Complex>& phase) {
    const auto& gates = layer.gates;
    std::size_t g = 0;
    while (g < gates.size()) {
        if (is_diagonal(gates[g].kind)) {
            std::size_t end = g;
            while (end < gates.size() && is_diagonal(gates[end].kind)) ++end;
            kernels::diagonal_phases(std::span(gates).subspan(g, end - g), angles.subspan(g, end - g), n, phase);
            kernels::apply_diagonal(state, phase);
            g = end;
        } else {
            kernels::apply_rx(state, gates[g].q0, n, angles[g]);
            ++g;
        }
    }
}

void check_angles(const NoisyAnsatz& a, std::span<const double> gate_angles) {
    if (static_cast<int>(gate_angles.size()) != a.n_gates()) {
        throw std::invalid_argument("gate angle vector has wrong length");
    }
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(count, 1));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::string to_string(Backend backend) {
    return backend == Backend::Exact ? "exact" : "trajectories";
}

Backend parse_backend(std::string_view text) {
    if (text == "exact") return Backend::Exact;
    if (text == "trajectories") return Backend::Trajectories;
    throw std::invalid_argument("unknown backend '" + std::string(text) + "'");
}

int default_trajectory_count(int n_qubits) { return 500 * n_qubits; }

namespace kernels {

void apply_diagonal(CMatrix& rho, std::span<const Complex> phase) {
    const Eigen::Index dim = rho.rows();
    for (Eigen::Index c = 0; c < dim; ++c) {
        const Complex pc = std::conj(phase[static_cast<std::size_t>(c)]);
        Complex* col = rho.col(c).data();
        for (Eigen::Index r = 0; r < dim; ++r) col[r] *= phase[static_cast<std::size_t>(r)] * pc;
    }
}

void apply_rx(CMatrix& rho, int qubit, int n_qubits, double angle) {
    const auto dim = static_cast<std::size_t>(rho.rows());
    const std::size_t m = qubit_mask(qubit, n_qubits);
    const double c = std::cos(angle);
    const Complex is{0.0, std::sin(angle)};
    Complex* data = rho.data();
    // Left: R = c I - i s X on rows.
    for (std::size_t col = 0; col < dim; ++col) {
        Complex* v = data + col * dim;
        for (std::size_t r0 = 0; r0 < dim; ++r0) {
            if (r0 & m) continue;
            const Complex a0 = v[r0], a1 = v[r0 | m];
            v[r0] = c * a0 - is * a1;
            v[r0 | m] = c * a1 - is * a0;
        }
    }
    // Right: R^dagger = c I + i s X on columns.
    for (std::size_t c0 = 0; c0 < dim; ++c0) {
        if (c0 & m) continue;
        Complex* v0 = data + c0 * dim;
        Complex* v1 = data + (c0 | m) * dim;
        for (std::size_t r = 0; r < dim; ++r) {
            const Complex b0 = v0[r], b1 = v1[r];
            v0[r] = c * b0 + is * b1;
            v1[r] = c * b1 + is * b0;
        }
    }
}

void depolarize(CMatrix& rho, int qubit, int n_qubits, double lambda) {
    const auto dim = static_cast<std::size_t>(rho.rows());
    const std::size_t m = qubit_mask(qubit, n_qubits);
    const double keep = 1.0 - 0.75 * lambda;
    const double quarter = 0.25 * lambda;
    Complex* data = rho.data();
    auto at = [&](std::size_t r, std::size_t c) -> Complex& { return data[c * dim + r]; };
    // Entry (a,b) of X rho X is rho(a^m, b^m); Y rho Y and Z rho Z carry the
    // sign +1 when bit q of a and b agree and -1 otherwise (Z rho Z keeps (a,b)).
    for (std::size_t b0 = 0; b0 < dim; ++b0) {
        if (b0 & m) continue;
        const std::size_t b1 = b0 | m;
        for (std::size_t a0 = 0; a0 < dim; ++a0) {
            if (a0 & m) continue;
            const std::size_t a1 = a0 | m;
            const Complex r00 = at(a0, b0), r11 = at(a1, b1), r01 = at(a0, b1), r10 = at(a1, b0);
            // bits agree: sign +1
            at(a0, b0) = keep * r00 + quarter * (r11 + r11 + r00);
            at(a1, b1) = keep * r11 + quarter * (r00 + r00 + r11);
            // bits differ: sign -1
            at(a0, b1) = keep * r01 + quarter * (r10 - r10 - r01);
            at(a1, b0) = keep * r10 + quarter * (r01 - r01 - r10);
        }
    }
}

void diagonal_phases(std::span<const GateSpec> gates, std::span<const double> angles, int n_qubits,
                     std::vector<Complex>& phase) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    phase.assign(dim, Complex{});
    for (std::size_t x = 0; x < dim; ++x) {
        double generator_sum = 0.0;
        for (std::size_t g = 0; g < gates.size(); ++g) {
            const auto& gate = gates[g];
            double eig = (x & qubit_mask(gate.q0, n_qubits)) ? -1.0 : 1.0;
            if (gate.kind == GateKind::RZZ && (x & qubit_mask(gate.q1, n_qubits))) eig = -eig;
            generator_sum += angles[g] * eig;
        }
        phase[x] = std::polar(1.0, -generator_sum);
    }
}

void apply_diagonal(CVector& psi, std::span<const Complex> phase) {
    for (Eigen::Index k = 0; k < psi.size(); ++k) psi[k] *= phase[static_cast<std::size_t>(k)];
}

void apply_rx(CVector& psi, int qubit, int n_qubits, double angle) {
    const auto dim = static_cast<std::size_t>(psi.size());
    const std::size_t m = qubit_mask(qubit, n_qubits);
    const double c = std::cos(angle);
    const Complex is{0.0, std::sin(angle)};
    Complex* v = psi.data();
    for (std::size_t r0 = 0; r0 < dim; ++r0) {
        if (r0 & m) continue;
        const Complex a0 = v[r0], a1 = v[r0 | m];
        v[r0] = c * a0 - is * a1;
        v[r0 | m] = c * a1 - is * a0;
    }
}

void apply_pauli(CVector& psi, int qubit, int n_qubits, Pauli p) {
    const auto dim = static_cast<std::size_t>(psi.size());
    const std::size_t m = qubit_mask(qubit, n_qubits);
    Complex* v = psi.data();
    for (std::size_t r0 = 0; r0 < dim; ++r0) {
        if (r0 & m) continue;
        const Complex a0 = v[r0], a1 = v[r0 | m];
        switch (p) {
            case Pauli::I: break;
            case Pauli::X: v[r0] = a1; v[r0 | m] = a0; break;
            case Pauli::Y: v[r0] = Complex{0, -1} * a1; v[r0 | m] = Complex{0, 1} * a0; break;
            case Pauli::Z: v[r0 | m] = -a1; break;
        }
    }
}

}  // namespace kernels

DensityMatrix apply_depolarizing(const DensityMatrix& rho, int qubit, double lambda) {
    check_lambda_range(lambda);
    if (qubit < 0 || qubit >= rho.n_qubits()) throw std::out_of_range("apply_depolarizing: qubit out of range");
    CMatrix out = rho.matrix();
    kernels::depolarize(out, qubit, rho.n_qubits(), lambda);
    return DensityMatrix(std::move(out));
}

CMatrix simulate_exact_matrix(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda) {
    check_angles(a, gate_angles);
    check_lambda_range(lambda);
    const int n = a.n_qubits();
    const auto dim = Eigen::Index{1} << n;
    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    std::vector<Complex> phase;
    std::size_t offset = 0;
    for (const auto& layer : a.layers()) {
        apply_layer(rho, layer, gate_angles.subspan(offset, layer.gates.size()), n, phase);
        offset += layer.gates.size();
        if (lambda > 0.0) {
            for (int q = 0; q < n; ++q) kernels::depolarize(rho, q, n, lambda);
        }
    }
    return rho;
}

DensityMatrix simulate_exact(const NoisyAnsatz& a) {
    const auto angles = a.gate_angles();
    return DensityMatrix(simulate_exact_matrix(a, angles, a.lambda()));
}

CVector run_trajectory(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda,
                       std::uint64_t trajectory_seed) {
    const int n = a.n_qubits();
    CVector psi = CVector::Zero(Eigen::Index{1} << n);
    psi[0] = 1.0;
    Engine engine(trajectory_seed);
    const double none = 1.0 - 0.75 * lambda;
    const double quarter = 0.25 * lambda;
    std::vector<Complex> phase;
    std::size_t offset = 0;
    for (const auto& layer : a.layers()) {
        apply_layer(psi, layer, gate_angles.subspan(offset, layer.gates.size()), n, phase);
        offset += layer.gates.size();
        for (int q = 0; q < n; ++q) {
            const double u = uniform01(engine);
            if (u < none) continue;
            const Pauli p = u < none + quarter ? Pauli::X : (u < none + 2.0 * quarter ? Pauli::Y : Pauli::Z);
            kernels::apply_pauli(psi, q, n, p);
        }
    }
    return psi;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

TrajectoryEstimate simulate_trajectories(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda,
                                         const TrajectoryPlan& plan, const CMatrix& observable) {
    if (plan.K < 1) throw std::invalid_argument("trajectory plan needs K >= 1");
    check_angles(a, gate_angles);
    check_lambda_range(lambda);
    const auto dim = Eigen::Index{1} << a.n_qubits();
    if (observable.rows() != dim || observable.cols() != dim) {
        throw std::invalid_argument("observable dimension does not match the circuit");
    }
    if (hermiticity_residual(observable) > 1e-8) throw std::invalid_argument("observable is not Hermitian");

    std::vector<double> samples(static_cast<std::size_t>(plan.K));
    parallel_for(plan.K, plan.threads, [&](int k) {
        const CVector psi = run_trajectory(a, gate_angles, lambda, derive_seed(plan.rng_seed, static_cast<std::uint64_t>(k)));
        samples[static_cast<std::size_t>(k)] = psi.dot(observable * psi).real();
    });

    const double mean = pairwise_sum(samples) / plan.K;
    TrajectoryEstimate out{mean, std::numeric_limits<double>::infinity()};
    if (plan.K > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) sq[k] = (samples[k] - mean) * (samples[k] - mean);
        const double var = pairwise_sum(sq) / (plan.K - 1);
        out.std_error = std::sqrt(var / plan.K);
    }
    return out;
}

TrajectoryEstimate simulate_trajectories(const NoisyAnsatz& a, const TrajectoryPlan& plan, const CMatrix& observable) {
    const auto angles = a.gate_angles();
    return simulate_trajectories(a, angles, a.lambda(), plan, observable);
}

DensityMatrix trajectory_density_matrix(const NoisyAnsatz& a, const TrajectoryPlan& plan) {
    if (a.n_qubits() > kMaxTrajectoryDensityQubits) {
        throw std::invalid_argument("trajectory_density_matrix supports at most 8 qubits");
    }
    if (plan.K < 1) throw std::invalid_argument("trajectory plan needs K >= 1");
    const auto angles = a.gate_angles();
    const auto dim = Eigen::Index{1} << a.n_qubits();
    const int n_blocks = (plan.K + kTrajectoryBlock - 1) / kTrajectoryBlock;
    std::vector<CMatrix> blocks(static_cast<std::size_t>(n_blocks));
    // Fixed block layout keeps the summation order independent of thread count.
    parallel_for(n_blocks, plan.threads, [&](int b) {
        CMatrix acc = CMatrix::Zero(dim, dim);
        const int end = std::min(plan.K, (b + 1) * kTrajectoryBlock);
        for (int k = b * kTrajectoryBlock; k < end; ++k) {
            const CVector psi = run_trajectory(a, angles, a.lambda(), derive_seed(plan.rng_seed, static_cast<std::uint64_t>(k)));
            acc.noalias() += psi * psi.adjoint();
        }
        blocks[static_cast<std::size_t>(b)] = std::move(acc);
    });
    for (std::size_t stride = 1; stride < blocks.size(); stride *= 2) {
        for (std::size_t i = 0; i + stride < blocks.size(); i += 2 * stride) blocks[i] += blocks[i + stride];
    }
    CMatrix rho = blocks.front() / static_cast<double>(plan.K);
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace navqt
