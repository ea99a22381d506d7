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

#ifndef NAVQT_ANSATZ_HPP
#define NAVQT_ANSATZ_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "navqt/qcore.hpp"

namespace navqt {

enum class Binding { Restricted, Flexible };
enum class GateKind { RZZ, RZ, RX };

std::string to_string(Binding binding);
std::string to_string(GateKind kind);
Binding parse_binding(std::string_view text);

inline constexpr double kDefaultLambdaMin = 1e-8;
inline constexpr double kThetaInitLow = 0.0001;
inline constexpr double kThetaInitHigh = 0.05;

/// A rotation exp(-i * angle * P) with P in {Z_i Z_j, Z_i, X_i}.
struct GateSpec {
    GateKind kind = GateKind::RZ;
    int q0 = 0;
    int q1 = -1;  // second qubit of RZZ only
    int slot = 0;
};

/// Gates of one unitary layer in application order. Every layer is followed by
/// a depolarizing channel on every qubit.
struct AnsatzLayer {
    std::vector<GateSpec> gates;
};

struct CircuitStructure {
    int n_qubits = 0;
    Binding binding = Binding::Restricted;
    std::vector<AnsatzLayer> layers;
    int n_slots = 0;
    int n_gates = 0;
};

/// Layered noisy circuit: m unitary layers (RZZ on ring bonds, RZ, RX) each
/// followed by depolarizing noise of strength lambda on every qubit. The gate
/// structure is shared between copies; parameter updates produce new values.
class NoisyAnsatz {
  public:
    NoisyAnsatz(int n_qubits, int n_layers, Binding binding, std::vector<double> theta,
                double lambda, double lambda_min = kDefaultLambdaMin);

    int n_qubits() const { return structure_->n_qubits; }
    int n_layers() const { return static_cast<int>(structure_->layers.size()); }
    Binding binding() const { return structure_->binding; }
    int n_slots() const { return structure_->n_slots; }
    int n_gates() const { return structure_->n_gates; }
    const std::vector<AnsatzLayer>& layers() const { return structure_->layers; }

    const std::vector<double>& theta() const { return theta_; }
    double lambda() const { return lambda_; }
    double lambda_min() const { return lambda_min_; }

    /// Per-gate angles in layer-major gate order.
    std::vector<double> gate_angles() const;

    NoisyAnsatz with_theta(std::vector<double> theta) const;
    NoisyAnsatz with_lambda(double lambda) const;

  private:
    NoisyAnsatz(std::shared_ptr<const CircuitStructure> structure, std::vector<double> theta,
                double lambda, double lambda_min);

    std::shared_ptr<const CircuitStructure> structure_;
    std::vector<double> theta_;
    double lambda_ = 0.0;
    double lambda_min_ = kDefaultLambdaMin;
};

/// ceil(n / 2)
int auto_layer_count(int n_qubits);

/// Builds the ansatz with theta drawn i.i.d. uniform on [1e-4, 0.05].
/// `layers` defaults to ceil(n/2).
NoisyAnsatz build_ansatz(int n_qubits, std::optional<int> layers, Binding binding, double lambda_init,
                         std::uint64_t theta_seed, double lambda_min = kDefaultLambdaMin);

CMatrix gate_matrix(const GateSpec& gate, double angle, int n_qubits);

/// Product of the layer's gate matrices, last gate leftmost.
CMatrix layer_unitary(const NoisyAnsatz& a, int layer);

/// Product of all layer unitaries (the noiseless circuit).
CMatrix circuit_unitary(const NoisyAnsatz& a);

double clamp_lambda(const NoisyAnsatz& a, double value);

nlohmann::json to_json(const NoisyAnsatz& a);
NoisyAnsatz ansatz_from_json(const nlohmann::json& j);

}  // namespace navqt

#endif  // NAVQT_ANSATZ_HPP
