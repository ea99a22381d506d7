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

#include "navqt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "navqt/rng.hpp"

namespace navqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> expand_angles(const NoisyAnsatz& a, std::span<const double> theta) {
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(a.n_gates()));
    for (const auto& layer : a.layers()) {
        for (const auto& g : layer.gates) angles.push_back(theta[static_cast<std::size_t>(g.slot)]);
    }
    return angles;
}

void apply_gate(CMatrix& m, const GateSpec& gate, double angle, int n, std::vector<Complex>& phase) {
    if (gate.kind == GateKind::RX) {
        kernels::apply_rx(m, gate.q0, n, angle);
    } else {
        const double angles[1] = {angle};
        kernels::diagonal_phases(std::span(&gate, 1), angles, n, phase);
        kernels::apply_diagonal(m, phase);
    }
}

double trace_product(const CMatrix& observable, const CMatrix& rho) {
    return observable.transpose().cwiseProduct(rho).sum().real();
}

int trajectory_count(const BackendSpec& backend, int n) {
    return backend.K > 0 ? backend.K : default_trajectory_count(n);
}

// Parameter-shift differences on the exact backend. Shifted energies are
// E_g(+/-) = Tr[O_g R_g(angle_g +/- pi/4) rho_g R_g^dagger], where rho_g is the
// state just before gate g and O_g is H propagated backwards (Heisenberg
// picture) through everything after gate g. The depolarizing channel is its own
// adjoint, so the backward sweep reuses the forward kernel.
struct ShiftSweep {
    std::vector<double> gate_differences;
    CMatrix rho_out;
    double energy = 0.0;
};

ShiftSweep exact_shift_sweep(const NoisyAnsatz& a, std::span<const double> angles, double lambda, const CMatrix& h) {
    const int n = a.n_qubits();
    const auto dim = Eigen::Index{1} << n;
    const auto n_gates = static_cast<std::size_t>(a.n_gates());
    std::vector<CMatrix> before(n_gates), after(n_gates);
    std::vector<Complex> phase;

    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    std::size_t g = 0;
    for (const auto& layer : a.layers()) {
        for (const auto& gate : layer.gates) {
            before[g] = rho;
            apply_gate(rho, gate, angles[g], n, phase);
            ++g;
        }
        if (lambda > 0.0) {
            for (int q = 0; q < n; ++q) kernels::depolarize(rho, q, n, lambda);
        }
    }

    CMatrix obs = h;
    g = n_gates;
    for (auto layer = a.layers().rbegin(); layer != a.layers().rend(); ++layer) {
        if (lambda > 0.0) {
            for (int q = 0; q < n; ++q) kernels::depolarize(obs, q, n, lambda);
        }
        for (auto gate = layer->gates.rbegin(); gate != layer->gates.rend(); ++gate) {
            --g;
            after[g] = obs;
            apply_gate(obs, *gate, -angles[g], n, phase);  // R^dagger O R
        }
    }

    ShiftSweep out;
    out.gate_differences.resize(n_gates);
    g = 0;
    CMatrix work;
    for (const auto& layer : a.layers()) {
        for (const auto& gate : layer.gates) {
            work = before[g];
            apply_gate(work, gate, angles[g] + kShift, n, phase);
            const double plus = trace_product(after[g], work);
            work = before[g];
            apply_gate(work, gate, angles[g] - kShift, n, phase);
            const double minus = trace_product(after[g], work);
            out.gate_differences[g] = plus - minus;
            ++g;
        }
    }
    out.energy = trace_product(h, rho);
    out.rho_out = std::move(rho);
    return out;
}

std::vector<double> sum_into_slots(const NoisyAnsatz& a, std::span<const double> per_gate) {
    std::vector<double> grad(static_cast<std::size_t>(a.n_slots()), 0.0);
    std::size_t g = 0;
    for (const auto& layer : a.layers()) {
        for (const auto& gate : layer.gates) grad[static_cast<std::size_t>(gate.slot)] += per_gate[g++];
    }
    return grad;
}

std::vector<double> trajectory_shift_differences(const NoisyAnsatz& a, std::span<const double> angles, double lambda,
                                                 const CMatrix& h, const BackendSpec& backend, std::uint64_t stream) {
    std::vector<double> diffs(angles.size());
    std::vector<double> shifted(angles.begin(), angles.end());
    for (std::size_t g = 0; g < angles.size(); ++g) {
        shifted[g] = angles[g] + kShift;
        const double plus = evaluate_energy(a, shifted, lambda, h, backend, derive_seed(stream, 2 * g));
        shifted[g] = angles[g] - kShift;
        const double minus = evaluate_energy(a, shifted, lambda, h, backend, derive_seed(stream, 2 * g + 1));
        shifted[g] = angles[g];
        diffs[g] = plus - minus;
    }
    return diffs;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_finite(bool ok, int iter, const std::string& what) {
    if (!ok) {
        std::ostringstream msg;
        msg << "non-finite " << what << " at iteration " << iter << "; aborting run";
        throw std::runtime_error(msg.str());
    }
}

void check_config(const ExperimentConfig& c, const PauliHamiltonian& h) {
    if (c.n != h.n_qubits) throw std::invalid_argument("config qubit count does not match the Hamiltonian");
    if (!(c.beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (c.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
    if (c.fidelity_stride < 0) throw std::invalid_argument("fidelity_stride must be non-negative");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool tracks_fidelity(const ExperimentConfig& c, int iter) {
    return c.backend == Backend::Exact && c.fidelity_stride > 0 && iter % c.fidelity_stride == 0;
}

}  // namespace

double evaluate_energy(const NoisyAnsatz& a, std::span<const double> gate_angles, double lambda, const CMatrix& h,
                       const BackendSpec& backend, std::uint64_t stream) {
    if (backend.kind == Backend::Exact) return energy(simulate_exact_matrix(a, gate_angles, lambda), h);
    TrajectoryPlan plan{trajectory_count(backend, a.n_qubits()), derive_seed(backend.seed, stream), backend.threads};
    return simulate_trajectories(a, gate_angles, lambda, plan, h).estimate;
}

std::vector<double> energy_grad_theta(const NoisyAnsatz& a, const CMatrix& h, const BackendSpec& backend,
                                      std::uint64_t stream) {
    const auto angles = a.gate_angles();
    if (backend.kind == Backend::Exact) {
        return sum_into_slots(a, exact_shift_sweep(a, angles, a.lambda(), h).gate_differences);
    }
    return sum_into_slots(a, trajectory_shift_differences(a, angles, a.lambda(), h, backend, stream));
}

std::vector<double> energy_grad_theta(const NoisyAnsatz& a, const PauliHamiltonian& h, const BackendSpec& backend) {
    return energy_grad_theta(a, materialize(h), backend);
}

double energy_grad_lambda(const NoisyAnsatz& a, const CMatrix& h, const BackendSpec& backend, double h_fd,
                          std::uint64_t stream) {
    const auto angles = a.gate_angles();
    // One sample stream for every point of the difference (common random numbers).
    const std::uint64_t lambda_stream = derive_seed(stream, 0x1a3bdaULL);
    return lambda_difference(
        [&](double l) { return evaluate_energy(a, angles, l, h, backend, lambda_stream); }, a.lambda(),
        a.lambda_min(), h_fd);
}

double energy_grad_lambda(const NoisyAnsatz& a, const PauliHamiltonian& h, const BackendSpec& backend, double h_fd) {
    return energy_grad_lambda(a, materialize(h), backend, h_fd);
}

OptState initial_state(const NoisyAnsatz& a, double eta_theta, double eta_lambda) {
    OptState s;
    s.theta = a.theta();
    s.lambda = a.lambda();
    s.eta_theta = eta_theta;
    s.eta_lambda = eta_lambda;
    return s;
}

GradReport compute_gradients(const NoisyAnsatz& a, const CMatrix& h, double /*beta*/, const BackendSpec& backend,
                             double h_fd_lambda, std::uint64_t stream, double* energy_out, CMatrix* rho_out) {
    GradReport report;
    const auto angles = a.gate_angles();
    if (backend.kind == Backend::Exact) {
        ShiftSweep sweep = exact_shift_sweep(a, angles, a.lambda(), h);
        report.grad_theta = sum_into_slots(a, sweep.gate_differences);
        if (energy_out) *energy_out = sweep.energy;
        if (rho_out) *rho_out = std::move(sweep.rho_out);
    } else {
        report.grad_theta = sum_into_slots(a, trajectory_shift_differences(a, angles, a.lambda(), h, backend, stream));
        if (energy_out) *energy_out = evaluate_energy(a, angles, a.lambda(), h, backend, derive_seed(stream, 0xe0ULL));
    }
    report.grad_lambda_energy = energy_grad_lambda(a, h, backend, h_fd_lambda, stream);
    report.grad_lambda_entropy = approx_entropy_grad(a.lambda(), a.n_layers(), a.n_qubits());
    return report;
}

OptState navqt_step(const OptState& s, const NoisyAnsatz& a, const CMatrix& h, double beta, const BackendSpec& backend,
                    const StepOptions& options) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const NoisyAnsatz current = a.with_theta(s.theta).with_lambda(clamp_lambda(a, s.lambda));
    const std::uint64_t stream = derive_seed(backend.seed, static_cast<std::uint64_t>(s.iter));

    double e = 0.0;
    CMatrix rho;
    GradReport grad;
    try {
        grad = compute_gradients(current, h, beta, backend, options.h_fd_lambda, stream, &e, &rho);
    } catch (const std::domain_error& err) {
        require_finite(false, s.iter, std::string("gradient (") + err.what() + ")");
    }
    require_finite(all_finite(grad.grad_theta), s.iter, "theta gradient");
    require_finite(std::isfinite(grad.grad_lambda_energy) && std::isfinite(grad.grad_lambda_entropy), s.iter,
                   "lambda gradient");

    const double s_approx = approx_entropy(current.lambda(), current.n_layers(), current.n_qubits());
    const double f_approx = free_energy(e, s_approx, beta);
    require_finite(std::isfinite(e) && std::isfinite(f_approx), s.iter, "approximate free energy");

    double fid = kNaN;
    if (options.track_fidelity && options.fidelity != nullptr && backend.kind == Backend::Exact) {
        fid = (*options.fidelity)(rho);
    }

    OptState next = s;
    for (std::size_t k = 0; k < next.theta.size(); ++k) next.theta[k] -= s.eta_theta * grad.grad_theta[k];
    const double lambda_grad = grad.grad_lambda_energy - grad.grad_lambda_entropy / beta;
    next.lambda = clamp_lambda(current, current.lambda() - s.eta_lambda * lambda_grad);
    next.history.push_back({s.iter, e, s_approx, f_approx, current.lambda(), fid});
    next.iter = s.iter + 1;
    return next;
}

OptState navqt_step(const OptState& s, const NoisyAnsatz& a, const PauliHamiltonian& h, double beta,
                    const BackendSpec& backend, const StepOptions& options) {
    return navqt_step(s, a, materialize(h), beta, backend, options);
}

BackendSpec backend_for(const ExperimentConfig& config) {
    return {config.backend, config.K, config.trajectory_seed, 1};
}

NoisyAnsatz ansatz_for(const ExperimentConfig& config) {
    std::optional<int> layers;
    if (config.layers > 0) layers = config.layers;
    return build_ansatz(config.n, layers, config.binding, config.lambda_init, config.theta_seed, config.lambda_min);
}

RunRecord train(const ExperimentConfig& config, const PauliHamiltonian& h) {
    if (config.mode != TrainMode::Approx) throw std::invalid_argument("train() runs the approximate mode only");
    check_config(config, h);
    const auto start = std::chrono::steady_clock::now();
    const CMatrix hm = materialize(h);
    const FidelityReference reference(thermal_state_full(hm, config.beta).rho);
    const NoisyAnsatz ansatz = ansatz_for(config);
    const BackendSpec backend = backend_for(config);
    const int m = ansatz.n_layers();
    const int n = ansatz.n_qubits();

    OptState state = initial_state(ansatz, config.eta_theta, config.eta_lambda);
    IterateSummary best;
    best.free_energy = std::numeric_limits<double>::infinity();
    auto consider = [&](const IterationMetrics& metrics, const std::vector<double>& theta) {
        if (metrics.free_energy < best.free_energy) {
            best = {metrics.iter, metrics.energy, metrics.entropy, metrics.free_energy, metrics.lambda, metrics.fidelity, theta};
        }
    };

    for (int t = 0; t < config.max_iters; ++t) {
        StepOptions options;
        options.fidelity = &reference;
        options.track_fidelity = tracks_fidelity(config, t);
        const std::vector<double> theta_before = state.theta;
        state = navqt_step(state, ansatz, hm, config.beta, backend, options);
        consider(state.history.back(), theta_before);
    }

    // The iterate produced by the last update is a candidate too.
    const NoisyAnsatz final_ansatz = ansatz.with_theta(state.theta).with_lambda(state.lambda);
    const auto final_angles = final_ansatz.gate_angles();
    const CMatrix final_rho = simulate_exact_matrix(final_ansatz, final_angles, state.lambda);
    const double final_e = backend.kind == Backend::Exact
                               ? energy(final_rho, hm)
                               : evaluate_energy(final_ansatz, final_angles, state.lambda, hm, backend,
                                                 derive_seed(backend.seed, static_cast<std::uint64_t>(state.iter)));
    const double final_s = approx_entropy(state.lambda, m, n);
    IterationMetrics last_metrics{state.iter, final_e, final_s, free_energy(final_e, final_s, config.beta), state.lambda,
                                  reference(final_rho)};
    require_finite(std::isfinite(last_metrics.free_energy), state.iter, "approximate free energy");
    consider(last_metrics, state.theta);

    // Reported fidelity always comes from the exact state of the chosen iterate.
    const NoisyAnsatz best_ansatz = ansatz.with_theta(best.theta).with_lambda(best.lambda);
    best.fidelity = reference(simulate_exact_matrix(best_ansatz, best_ansatz.gate_angles(), best.lambda));

    RunRecord record;
    record.config = config;
    record.history = std::move(state.history);
    record.best = best;
    record.last = {last_metrics.iter, last_metrics.energy, last_metrics.entropy, last_metrics.free_energy,
                   last_metrics.lambda, last_metrics.fidelity, state.theta};
    record.final_lambda = best.lambda;
    record.final_fidelity = best.fidelity;
    record.final_free_energy = best.free_energy;
    record.hamiltonian = to_json(h);
    record.wall_time = seconds_since(start);
    return record;
}

RunRecord train(const ExperimentConfig& config) {
    return train(config, resolve_instance(config.model, config.coeffs, config.n));
}

RunRecord train_true_free_energy(const ExperimentConfig& config, const PauliHamiltonian& h) {
    if (config.mode != TrainMode::TrueFreeEnergy) {
        throw std::invalid_argument("train_true_free_energy() runs the true_fe mode only");
    }
    if (config.backend != Backend::Exact) throw std::invalid_argument("true free-energy mode needs the exact backend");
    check_config(config, h);
    const auto start = std::chrono::steady_clock::now();
    const CMatrix hm = materialize(h);
    const FidelityReference reference(thermal_state_full(hm, config.beta).rho);
    const NoisyAnsatz ansatz = ansatz_for(config);
    const double beta = config.beta;

    struct Cost {
        double energy, entropy, free_energy;
        CMatrix rho;
    };
    auto cost_at = [&](std::span<const double> theta, double lambda) {
        const auto angles = expand_angles(ansatz, theta);
        CMatrix rho = simulate_exact_matrix(ansatz, angles, lambda);
        const double e = energy(rho, hm);
        const double s = von_neumann_entropy(rho);
        return Cost{e, s, free_energy(e, s, beta), std::move(rho)};
    };

    std::vector<double> theta = ansatz.theta();
    double lambda = ansatz.lambda();
    std::vector<IterationMetrics> history;
    IterateSummary best;
    best.free_energy = std::numeric_limits<double>::infinity();
    auto consider = [&](const IterationMetrics& metrics, const std::vector<double>& th) {
        if (metrics.free_energy < best.free_energy) {
            best = {metrics.iter, metrics.energy, metrics.entropy, metrics.free_energy, metrics.lambda, metrics.fidelity, th};
        }
    };

    for (int t = 0; t < config.max_iters; ++t) {
        const Cost here = cost_at(theta, lambda);
        std::vector<double> grad(theta.size());
        std::vector<double> probe = theta;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            probe[k] = theta[k] + kThetaFdStep;
            const double up = cost_at(probe, lambda).free_energy;
            probe[k] = theta[k] - kThetaFdStep;
            const double down = cost_at(probe, lambda).free_energy;
            probe[k] = theta[k];
            grad[k] = (up - down) / (2.0 * kThetaFdStep);
        }
        const double grad_lambda = lambda_difference(
            [&](double l) { return l == lambda ? here.free_energy : cost_at(theta, l).free_energy; }, lambda,
            config.lambda_min, kLambdaFdStep);
        require_finite(all_finite(grad) && std::isfinite(grad_lambda), t, "finite-difference gradient");
        require_finite(std::isfinite(here.free_energy), t, "free energy");

        const double fid = tracks_fidelity(config, t) ? reference(here.rho) : kNaN;
        history.push_back({t, here.energy, here.entropy, here.free_energy, lambda, fid});
        consider(history.back(), theta);

        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= config.eta_theta * grad[k];
        lambda = std::clamp(lambda - config.eta_lambda * grad_lambda, config.lambda_min, 1.0);
    }

    const Cost last_cost = cost_at(theta, lambda);
    IterationMetrics last_metrics{config.max_iters, last_cost.energy, last_cost.entropy, last_cost.free_energy, lambda,
                                  reference(last_cost.rho)};
    consider(last_metrics, theta);
    best.fidelity = reference(cost_at(best.theta, best.lambda).rho);

    RunRecord record;
    record.config = config;
    record.history = std::move(history);
    record.best = best;
    record.last = {last_metrics.iter, last_metrics.energy, last_metrics.entropy, last_metrics.free_energy,
                   last_metrics.lambda, last_metrics.fidelity, theta};
    record.final_lambda = best.lambda;
    record.final_fidelity = best.fidelity;
    record.final_free_energy = best.free_energy;
    record.hamiltonian = to_json(h);
    record.wall_time = seconds_since(start);
    return record;
}

RunRecord run_experiment(const ExperimentConfig& config, const PauliHamiltonian& h) {
    return config.mode == TrainMode::Approx ? train(config, h) : train_true_free_energy(config, h);
}

ScanResult scan_parameters(const NoisyAnsatz& a, const CMatrix& h, double beta, std::span<const double> theta_values,
                           std::span<const double> lambda_values, long max_points) {
    if (theta_values.empty() || lambda_values.empty()) throw std::invalid_argument("scan grid axes must be nonempty");
    const std::size_t slots = static_cast<std::size_t>(a.n_slots());
    double total = static_cast<double>(lambda_values.size());
    for (std::size_t k = 0; k < slots; ++k) total *= static_cast<double>(theta_values.size());
    if (total > static_cast<double>(max_points)) {
        throw std::invalid_argument("scan grid has " + format_double(total) + " points, above the limit");
    }

    ScanResult best;
    best.free_energy = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> digit(slots, 0);
    std::vector<double> theta(slots, theta_values[0]);
    while (true) {
        const auto angles = expand_angles(a, theta);
        for (double lambda : lambda_values) {
            const double l = clamp_lambda(a, lambda);
            const double e = energy(simulate_exact_matrix(a, angles, l), h);
            const double f = free_energy(e, approx_entropy(l, a.n_layers(), a.n_qubits()), beta);
            ++best.evaluated;
            if (f < best.free_energy) {
                best.free_energy = f;
                best.theta = theta;
                best.lambda = l;
            }
        }
        std::size_t k = 0;
        while (k < slots && ++digit[k] == theta_values.size()) {
            digit[k] = 0;
            theta[k] = theta_values[0];
            ++k;
        }
        if (k == slots) break;
        theta[k] = theta_values[digit[k]];
    }
    return best;
}

}  // namespace navqt
