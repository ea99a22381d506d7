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

#include "navqt/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "navqt/hamiltonian.hpp"
#include "navqt/rng.hpp"

namespace navqt {

namespace {

std::shared_ptr<const CircuitStructure> make_structure(int n, int n_layers, Binding binding) {
    auto s = std::make_shared<CircuitStructure>();
    s->n_qubits = n;
    s->binding = binding;
    const auto bonds = ring_bonds(n);
    int gate_index = 0;
    for (int l = 0; l < n_layers; ++l) {
        AnsatzLayer layer;
        const int z_slot = 2 * l;
        const int x_slot = 2 * l + 1;
        auto slot_for = [&](int restricted_slot) {
            return binding == Binding::Restricted ? restricted_slot : gate_index;
        };
        for (const auto& [a, b] : bonds) {
            layer.gates.push_back({GateKind::RZZ, a, b, slot_for(z_slot)});
            ++gate_index;
        }
        for (int q = 0; q < n; ++q) {
            layer.gates.push_back({GateKind::RZ, q, -1, slot_for(z_slot)});
            ++gate_index;
        }
        for (int q = 0; q < n; ++q) {
            layer.gates.push_back({GateKind::RX, q, -1, slot_for(x_slot)});
            ++gate_index;
        }
        s->layers.push_back(std::move(layer));
    }
    s->n_gates = gate_index;
    s->n_slots = binding == Binding::Restricted ? 2 * n_layers : gate_index;
    return s;
}

void check_lambda(double lambda, double lambda_min) {
    if (!(lambda_min >= 0.0 && lambda_min <= 1.0)) {
        throw std::invalid_argument("lambda_min must lie in [0, 1]");
    }
    if (!(lambda >= lambda_min && lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "lambda " << lambda << " outside [" << lambda_min << ", 1]";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

std::string to_string(Binding binding) {
    return binding == Binding::Restricted ? "restricted" : "flexible";
}

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::RZZ: return "RZZ";
        case GateKind::RZ: return "RZ";
        case GateKind::RX: return "RX";
    }
    return "?";
}

Binding parse_binding(std::string_view text) {
    if (text == "restricted") return Binding::Restricted;
    if (text == "flexible") return Binding::Flexible;
    throw std::invalid_argument("unknown binding '" + std::string(text) + "'");
}

NoisyAnsatz::NoisyAnsatz(int n_qubits, int n_layers, Binding binding, std::vector<double> theta,
                         double lambda, double lambda_min)
    : NoisyAnsatz(nullptr, std::move(theta), lambda, lambda_min) {
    if (n_qubits < 1) throw std::invalid_argument("ansatz needs at least one qubit");
    if (n_layers < 1) throw std::invalid_argument("ansatz needs at least one layer");
    structure_ = make_structure(n_qubits, n_layers, binding);
    if (static_cast<int>(theta_.size()) != structure_->n_slots) {
        throw std::invalid_argument("theta has " + std::to_string(theta_.size()) + " entries, expected " +
                                    std::to_string(structure_->n_slots));
    }
}

NoisyAnsatz::NoisyAnsatz(std::shared_ptr<const CircuitStructure> structure, std::vector<double> theta,
                         double lambda, double lambda_min)
    : structure_(std::move(structure)), theta_(std::move(theta)), lambda_(lambda), lambda_min_(lambda_min) {
    check_lambda(lambda_, lambda_min_);
}

std::vector<double> NoisyAnsatz::gate_angles() const {
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(n_gates()));
    for (const auto& layer : layers()) {
        for (const auto& g : layer.gates) angles.push_back(theta_[static_cast<std::size_t>(g.slot)]);
    }
    return angles;
}

NoisyAnsatz NoisyAnsatz::with_theta(std::vector<double> theta) const {
    if (theta.size() != theta_.size()) throw std::invalid_argument("with_theta: wrong parameter count");
    return NoisyAnsatz(structure_, std::move(theta), lambda_, lambda_min_);
}

NoisyAnsatz NoisyAnsatz::with_lambda(double lambda) const {
    return NoisyAnsatz(structure_, theta_, lambda, lambda_min_);
}

int auto_layer_count(int n_qubits) { return (n_qubits + 1) / 2; }

NoisyAnsatz build_ansatz(int n_qubits, std::optional<int> layers, Binding binding, double lambda_init,
                         std::uint64_t theta_seed, double lambda_min) {
    check_lambda(lambda_init, lambda_min);
    const int m = layers.value_or(auto_layer_count(n_qubits));
    // Slot count depends only on the structure; build a throwaway to size theta.
    const auto structure = make_structure(n_qubits, m, binding);
    Engine engine(theta_seed);
    std::vector<double> theta(static_cast<std::size_t>(structure->n_slots));
    for (auto& t : theta) t = uniform(engine, kThetaInitLow, kThetaInitHigh);
    return NoisyAnsatz(n_qubits, m, binding, std::move(theta), lambda_init, lambda_min);
}

CMatrix gate_matrix(const GateSpec& gate, double angle, int n_qubits) {
    const auto dim = Eigen::Index{1} << n_qubits;
    CMatrix generator;
    switch (gate.kind) {
        case GateKind::RZZ:
            generator = pauli(Pauli::Z, gate.q0, n_qubits) * pauli(Pauli::Z, gate.q1, n_qubits);
            break;
        case GateKind::RZ: generator = pauli(Pauli::Z, gate.q0, n_qubits); break;
        case GateKind::RX: generator = pauli(Pauli::X, gate.q0, n_qubits); break;
    }
    // exp(-i a P) = cos(a) I - i sin(a) P for P^2 = I
    return std::cos(angle) * CMatrix::Identity(dim, dim) - Complex{0.0, std::sin(angle)} * generator;
}

CMatrix layer_unitary(const NoisyAnsatz& a, int layer) {
    if (layer < 0 || layer >= a.n_layers()) throw std::out_of_range("layer index out of range");
    const int n = a.n_qubits();
    const auto dim = Eigen::Index{1} << n;
    CMatrix u = CMatrix::Identity(dim, dim);
    for (const auto& g : a.layers()[static_cast<std::size_t>(layer)].gates) {
        u = gate_matrix(g, a.theta()[static_cast<std::size_t>(g.slot)], n) * u;
    }
    return u;
}

CMatrix circuit_unitary(const NoisyAnsatz& a) {
    const auto dim = Eigen::Index{1} << a.n_qubits();
    CMatrix u = CMatrix::Identity(dim, dim);
    for (int l = 0; l < a.n_layers(); ++l) u = layer_unitary(a, l) * u;
    return u;
}

double clamp_lambda(const NoisyAnsatz& a, double value) {
    return std::clamp(value, a.lambda_min(), 1.0);
}

nlohmann::json to_json(const NoisyAnsatz& a) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : a.layers()) {
        nlohmann::json gates = nlohmann::json::array();
        for (const auto& g : layer.gates) {
            nlohmann::json qubits = g.kind == GateKind::RZZ ? nlohmann::json{g.q0, g.q1} : nlohmann::json{g.q0};
            gates.push_back({{"kind", to_string(g.kind)}, {"qubits", qubits}, {"slot", g.slot}});
        }
        layers.push_back({{"gates", gates}, {"noise", "depolarizing_all_qubits"}});
    }
    return {
        {"n_qubits", a.n_qubits()}, {"n_layers", a.n_layers()}, {"binding", to_string(a.binding())},
        {"theta", a.theta()},       {"lambda", a.lambda()},     {"lambda_min", a.lambda_min()},
        {"layers", layers},
    };
}

NoisyAnsatz ansatz_from_json(const nlohmann::json& j) {
    NoisyAnsatz a(j.at("n_qubits").get<int>(), j.at("n_layers").get<int>(),
                  parse_binding(j.at("binding").get<std::string>()), j.at("theta").get<std::vector<double>>(),
                  j.at("lambda").get<double>(), j.at("lambda_min").get<double>());
    if (j.contains("layers") && j.at("layers") != to_json(a).at("layers")) {
        throw std::invalid_argument("ansatz JSON gate structure does not match its declared shape");
    }
    return a;
}

}  // namespace navqt
