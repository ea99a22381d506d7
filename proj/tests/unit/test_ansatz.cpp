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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "navqt/ansatz.hpp"
#include "test_util.hpp"

namespace navqt {
namespace {

using testing::max_diff;

std::vector<double> random_theta(std::size_t size, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<double> t(size);
    for (auto& x : t) x = u(rng);
    return t;
}

TEST(Ansatz, AutoLayerCount) {
    EXPECT_EQ(auto_layer_count(4), 2);
    EXPECT_EQ(auto_layer_count(3), 2);
    EXPECT_EQ(auto_layer_count(1), 1);
    EXPECT_EQ(auto_layer_count(7), 4);
    EXPECT_EQ(build_ansatz(4, std::nullopt, Binding::Restricted, 0.1, 0).n_layers(), 2);
}

TEST(Ansatz, SlotCounts) {
    EXPECT_EQ(build_ansatz(4, 2, Binding::Restricted, 0.1, 0).n_slots(), 4);
    const NoisyAnsatz flex = build_ansatz(4, 2, Binding::Flexible, 0.1, 0);
    EXPECT_EQ(flex.n_slots(), 24);
    EXPECT_EQ(flex.n_gates(), 24);
}

TEST(Ansatz, LayerStructureOrder) {
    const NoisyAnsatz a = build_ansatz(3, 1, Binding::Restricted, 0.1, 0);
    const auto& gates = a.layers()[0].gates;
    ASSERT_EQ(gates.size(), 9u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(gates[static_cast<std::size_t>(i)].kind, GateKind::RZZ);
    for (int i = 3; i < 6; ++i) EXPECT_EQ(gates[static_cast<std::size_t>(i)].kind, GateKind::RZ);
    for (int i = 6; i < 9; ++i) EXPECT_EQ(gates[static_cast<std::size_t>(i)].kind, GateKind::RX);
    // restricted: cost slot shared by RZZ and RZ, mixer slot by RX
    for (int i = 0; i < 6; ++i) EXPECT_EQ(gates[static_cast<std::size_t>(i)].slot, 0);
    for (int i = 6; i < 9; ++i) EXPECT_EQ(gates[static_cast<std::size_t>(i)].slot, 1);
}

TEST(Ansatz, InitialThetaInInterval) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const NoisyAnsatz a = build_ansatz(5, std::nullopt, Binding::Flexible, 0.1, seed);
        for (double t : a.theta()) {
            EXPECT_GE(t, kThetaInitLow);
            EXPECT_LE(t, kThetaInitHigh);
        }
    }
    EXPECT_EQ(build_ansatz(3, 2, Binding::Restricted, 0.1, 4).theta(),
              build_ansatz(3, 2, Binding::Restricted, 0.1, 4).theta());
    EXPECT_NE(build_ansatz(3, 2, Binding::Restricted, 0.1, 4).theta(),
              build_ansatz(3, 2, Binding::Restricted, 0.1, 5).theta());
}

TEST(Ansatz, RejectsBadParameters) {
    EXPECT_THROW(NoisyAnsatz(3, 2, Binding::Restricted, {0.1, 0.2}, 0.1), std::invalid_argument);
    EXPECT_THROW(NoisyAnsatz(3, 1, Binding::Restricted, {0.1, 0.2}, 1.5), std::invalid_argument);
    EXPECT_THROW(NoisyAnsatz(3, 1, Binding::Restricted, {0.1, 0.2}, 1e-9), std::invalid_argument);
    EXPECT_THROW(NoisyAnsatz(3, 0, Binding::Restricted, {}, 0.1), std::invalid_argument);
}

TEST(LayerUnitary, ZeroAnglesGiveIdentity) {
    const NoisyAnsatz a = build_ansatz(4, 2, Binding::Flexible, 0.1, 0).with_theta(std::vector<double>(24, 0.0));
    for (int l = 0; l < a.n_layers(); ++l) EXPECT_LT(max_diff(layer_unitary(a, l), CMatrix::Identity(16, 16)), 1e-15);
}

TEST(LayerUnitary, QuarterTurnSplitsPopulation) {
    // exp(-i pi/4 X)|0> = (|0> - i|1>)/sqrt(2)
    const NoisyAnsatz a(1, 1, Binding::Restricted, {0.0, std::numbers::pi / 4}, 0.0, 0.0);
    const CVector psi = layer_unitary(a, 0).col(0);
    EXPECT_NEAR(std::norm(psi(0)), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(psi(1)), 0.5, 1e-15);
}

TEST(LayerUnitary, UnitaryForRandomAngles) {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 4; ++n) {
        const NoisyAnsatz base = build_ansatz(n, 2, Binding::Flexible, 0.1, 0);
        const NoisyAnsatz a = base.with_theta(random_theta(base.theta().size(), rng));
        const CMatrix u = circuit_unitary(a);
        EXPECT_LT(max_diff(u.adjoint() * u, CMatrix::Identity(u.rows(), u.cols())), 1e-10);
    }
}

TEST(LayerUnitary, MatchesKroneckerOracle) {
    std::mt19937_64 rng(2);
    for (Binding b : {Binding::Restricted, Binding::Flexible}) {
        const NoisyAnsatz base = build_ansatz(4, 2, b, 0.1, 0);
        const NoisyAnsatz a = base.with_theta(random_theta(base.theta().size(), rng));
        const auto angles = a.gate_angles();
        std::size_t g = 0;
        for (int l = 0; l < a.n_layers(); ++l) {
            CMatrix u = CMatrix::Identity(16, 16);
            for (const auto& gate : a.layers()[static_cast<std::size_t>(l)].gates)
                u = testing::oracle_gate(gate, angles[g++], 4) * u;
            EXPECT_LT(max_diff(layer_unitary(a, l), u), 1e-12);
        }
    }
}

TEST(LayerUnitary, DiagonalBlocksCommute) {
    // Moving the RZ block in front of the RZZ block leaves the layer unchanged.
    std::mt19937_64 rng(3);
    const NoisyAnsatz base = build_ansatz(4, 1, Binding::Flexible, 0.1, 0);
    const NoisyAnsatz a = base.with_theta(random_theta(base.theta().size(), rng));
    const auto angles = a.gate_angles();
    auto gates = a.layers()[0].gates;
    std::vector<std::size_t> order(gates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return gates[i].kind == GateKind::RZ; });
    CMatrix u = CMatrix::Identity(16, 16);
    for (std::size_t i : order) u = gate_matrix(gates[i], angles[i], 4) * u;
    EXPECT_LT(max_diff(u, layer_unitary(a, 0)), 1e-12);
}

TEST(Binding, RestrictedEqualsTiedFlexible) {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 4; ++n) {
        const NoisyAnsatz r0 = build_ansatz(n, 2, Binding::Restricted, 0.1, 0);
        const NoisyAnsatz r = r0.with_theta(random_theta(r0.theta().size(), rng));
        const NoisyAnsatz f = build_ansatz(n, 2, Binding::Flexible, 0.1, 0).with_theta(r.gate_angles());
        EXPECT_LT(max_diff(circuit_unitary(r), circuit_unitary(f)), 1e-12);
    }
}

TEST(ClampLambda, Examples) {
    const NoisyAnsatz a = build_ansatz(2, 1, Binding::Restricted, 0.1, 0);
    EXPECT_EQ(clamp_lambda(a, 1.3), 1.0);
    EXPECT_EQ(clamp_lambda(a, -0.2), 1e-8);
    EXPECT_EQ(clamp_lambda(a, 0.5), 0.5);
}

TEST(AnsatzJson, RoundTrip) {
    const NoisyAnsatz a = build_ansatz(3, 2, Binding::Flexible, 0.25, 7);
    const NoisyAnsatz b = ansatz_from_json(nlohmann::json::parse(to_json(a).dump()));
    EXPECT_EQ(b.theta(), a.theta());
    EXPECT_EQ(b.lambda(), a.lambda());
    EXPECT_EQ(b.binding(), a.binding());
    EXPECT_EQ(b.n_layers(), a.n_layers());
    EXPECT_EQ(max_diff(circuit_unitary(a), circuit_unitary(b)), 0.0);
}

TEST(Ansatz, WithThetaKeepsStructure) {
    const NoisyAnsatz a = build_ansatz(3, 2, Binding::Restricted, 0.25, 7);
    const NoisyAnsatz b = a.with_theta({1, 2, 3, 4});
    EXPECT_EQ(&a.layers(), &b.layers());
    EXPECT_THROW(a.with_theta({1.0}), std::invalid_argument);
    EXPECT_EQ(a.with_lambda(0.5).lambda(), 0.5);
}

}  // namespace
}  // namespace navqt
