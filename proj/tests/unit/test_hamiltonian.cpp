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
#include <vector>

#include <gtest/gtest.h>

#include "navqt/hamiltonian.hpp"
#include "test_util.hpp"

namespace navqt {
namespace {

using testing::max_diff;

// Dense rebuild of a Hamiltonian from its term list.
CMatrix oracle_matrix(const PauliHamiltonian& h) {
    const Eigen::Index d = Eigen::Index{1} << h.n_qubits;
    CMatrix m = CMatrix::Zero(d, d);
    for (const auto& t : h.terms) m += t.coefficient * testing::pauli_word(t.ops);
    return m;
}

double oracle_gap(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    const auto& w = es.eigenvalues();
    for (Eigen::Index i = 1; i < w.size(); ++i)
        if (w[i] - w[0] > 1e-9) return w[i] - w[0];
    return 0.0;
}

int count_terms(const PauliHamiltonian& h, auto pred) {
    return static_cast<int>(std::count_if(h.terms.begin(), h.terms.end(), pred));
}

bool is_zz(const PauliString& t) { return std::count(t.ops.begin(), t.ops.end(), 'Z') == 2; }
bool is_single(const PauliString& t, char c) {
    return std::count(t.ops.begin(), t.ops.end(), c) == 1 &&
           std::count(t.ops.begin(), t.ops.end(), 'I') == static_cast<long>(t.ops.size()) - 1;
}

TEST(RingBonds, Conventions) {
    EXPECT_TRUE(ring_bonds(1).empty());
    EXPECT_EQ(ring_bonds(2), (std::vector<std::pair<int, int>>{{0, 1}}));
    EXPECT_EQ(ring_bonds(4), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
}

TEST(Ising, UniformThreeSiteTerms) {
    const PauliHamiltonian h = build_ising(3, CoeffMode::Uniform, 0);
    EXPECT_EQ(h.terms.size(), 6u);
    EXPECT_EQ(count_terms(h, is_zz), 3);
    EXPECT_EQ(count_terms(h, [](const PauliString& t) { return is_single(t, 'Z'); }), 3);
    for (const auto& t : h.terms) EXPECT_EQ(t.coefficient, -1.0);
}

TEST(Ising, UniformThreeSiteGroundEnergy) {
    const CMatrix m = materialize(build_ising(3, CoeffMode::Uniform, 0));
    EXPECT_NEAR(m(0, 0).real(), -6.0, 1e-15);
    EXPECT_NEAR(hermitian_eig(m).values[0], -6.0, 1e-12);
}

TEST(Ising, TwoSitesHaveOneBond) {
    const PauliHamiltonian h = build_ising(2, CoeffMode::Uniform, 0);
    EXPECT_EQ(count_terms(h, is_zz), 1);
    EXPECT_EQ(count_terms(h, [](const PauliString& t) { return is_single(t, 'Z'); }), 2);
}

TEST(Ising, DiagonalWithClassicalSpectrum) {
    for (CoeffMode mode : {CoeffMode::Uniform, CoeffMode::Random}) {
        const PauliHamiltonian h = build_ising(4, mode, 3);
        const CMatrix m = materialize(h);
        const auto j = h.groups[0].values;
        const auto f = h.groups[1].values;
        const auto bonds = ring_bonds(4);
        for (Eigen::Index s = 0; s < 16; ++s) {
            auto spin = [&](int q) { return (s >> (3 - q)) & 1 ? -1.0 : 1.0; };
            double e = 0.0;
            for (std::size_t b = 0; b < bonds.size(); ++b) e -= j[b] * spin(bonds[b].first) * spin(bonds[b].second);
            for (int q = 0; q < 4; ++q) e -= f[static_cast<std::size_t>(q)] * spin(q);
            EXPECT_NEAR(m(s, s).real(), e, 1e-12);
            for (Eigen::Index c = 0; c < 16; ++c)
                if (c != s) {
                    EXPECT_EQ(m(s, c), Complex(0.0));
                }
        }
    }
}

TEST(Tfi, UniformThreeSiteHasNineTerms) {
    EXPECT_EQ(build_tfi(3, CoeffMode::Uniform, 0).terms.size(), 9u);
}

TEST(Models, SingleSiteRejected) {
    EXPECT_THROW(build_ising(1, CoeffMode::Uniform, 0), std::invalid_argument);
    EXPECT_THROW(build_tfi(1, CoeffMode::Uniform, 0), std::invalid_argument);
    EXPECT_THROW(build_heisenberg(1, CoeffMode::Uniform, 0), std::invalid_argument);
}

TEST(Tfi, FourSiteGroundEnergy) {
    // Dense diagonalization of -sum ZZ - sum Z - sum X on a 4-ring.
    constexpr double kGround = -8.665952457274587;
    EXPECT_NEAR(hermitian_eig(materialize(build_tfi(4, CoeffMode::Uniform, 0))).values[0], kGround, 1e-10);
}

TEST(Tfi, ThreeSiteGap) {
    constexpr double kGap = 4.8906364042144679;
    EXPECT_NEAR(spectral_gap(build_tfi(3, CoeffMode::Uniform, 0)), kGap, 1e-10);
}

TEST(Heisenberg, UniformThreeSite) {
    const PauliHamiltonian h = build_heisenberg(3, CoeffMode::Uniform, 0);
    EXPECT_EQ(h.terms.size(), 12u);
    const CMatrix m = materialize(h);
    EXPECT_LT(max_diff(m, m.adjoint()), 1e-12);
    EXPECT_NEAR(hermitian_eig(m).values[0], -6.0, 1e-10);
}

TEST(Heisenberg, PureCouplingCommutesWithSpinFlip) {
    // Sanity only: without the field, prod_i X_i is a symmetry.
    const int n = 3;
    PauliHamiltonian h = build_heisenberg(n, CoeffMode::Uniform, 0);
    std::erase_if(h.terms, [](const PauliString& t) { return is_single(t, 'X'); });
    const CMatrix m = materialize(h);
    const CMatrix flip = testing::pauli_word("XXX");
    EXPECT_LT(max_diff(m * flip, flip * m), 1e-12);
}

TEST(Materialize, SingleTerm) {
    PauliHamiltonian h;
    h.n_qubits = 1;
    h.terms = {{"Z", 0.7}};
    const CMatrix m = materialize(h);
    EXPECT_EQ(m(0, 0), Complex(0.7));
    EXPECT_EQ(m(1, 1), Complex(-0.7));
}

TEST(Materialize, EmptyTermsGiveZero) {
    PauliHamiltonian h;
    h.n_qubits = 2;
    EXPECT_EQ(max_abs(materialize(h)), 0.0);
}

TEST(Materialize, MatchesKroneckerOracleAndIsHermitian) {
    for (Model model : {Model::IC, Model::TFI, Model::Heisenberg}) {
        for (CoeffMode mode : {CoeffMode::Uniform, CoeffMode::Random}) {
            for (int n = 2; n <= 5; ++n) {
                const PauliHamiltonian h = build_model(model, n, mode, 7);
                const CMatrix m = materialize(h);
                EXPECT_LT(max_diff(m, oracle_matrix(h)), 1e-13);
                EXPECT_LT(max_diff(m, m.adjoint()), 1e-12);
            }
        }
    }
}

TEST(Materialize, UniformIgnoresSeed) {
    for (Model model : {Model::IC, Model::TFI, Model::Heisenberg}) {
        EXPECT_EQ(max_diff(materialize(build_model(model, 4, CoeffMode::Uniform, 0)),
                           materialize(build_model(model, 4, CoeffMode::Uniform, 99))),
                  0.0);
    }
}

TEST(RandomCoefficients, ReproducibleAndSeedDependent) {
    const PauliHamiltonian a = build_heisenberg(4, CoeffMode::Random, 5);
    const PauliHamiltonian b = build_heisenberg(4, CoeffMode::Random, 5);
    const PauliHamiltonian c = build_heisenberg(4, CoeffMode::Random, 6);
    ASSERT_EQ(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        EXPECT_EQ(a.terms[i].ops, b.terms[i].ops);
        EXPECT_EQ(a.terms[i].coefficient, b.terms[i].coefficient);
    }
    EXPECT_NE(a.terms[0].coefficient, c.terms[0].coefficient);
}

TEST(RandomCoefficients, GroupOrder) {
    auto symbols = [](const PauliHamiltonian& h) {
        std::vector<std::string> s;
        for (const auto& g : h.groups) s.push_back(g.symbol);
        return s;
    };
    EXPECT_EQ(symbols(build_ising(3, CoeffMode::Random, 0)), (std::vector<std::string>{"JZ", "hZ"}));
    EXPECT_EQ(symbols(build_tfi(3, CoeffMode::Random, 0)), (std::vector<std::string>{"JZ", "hZ", "hX"}));
    EXPECT_EQ(symbols(build_heisenberg(3, CoeffMode::Random, 0)),
              (std::vector<std::string>{"JZ", "JX", "JY", "hX"}));
}

TEST(SpectralGap, SimpleCases) {
    PauliHamiltonian z;
    z.n_qubits = 1;
    z.terms = {{"Z", 1.0}};
    EXPECT_NEAR(spectral_gap(z), 2.0, 1e-14);
    PauliHamiltonian id;
    id.n_qubits = 2;
    id.terms = {{"II", 1.0}};
    EXPECT_EQ(spectral_gap(id), 0.0);
}

TEST(SelectHardest, PicksSmallestOracleGap) {
    for (Model model : {Model::IC, Model::TFI, Model::Heisenberg}) {
        const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
        const PauliHamiltonian pick = select_hardest(3, model, seeds);
        double best_gap = 1e300;
        std::uint64_t best_seed = 0;
        for (auto s : seeds) {
            const double g = oracle_gap(oracle_matrix(build_model(model, 3, CoeffMode::Random, s)));
            if (g < best_gap) {
                best_gap = g;
                best_seed = s;
            }
        }
        EXPECT_EQ(pick.coeff_seed, best_seed) << to_string(model);
        EXPECT_EQ(pick.coeff_mode, CoeffMode::Random);
    }
}

TEST(SelectHardest, IdenticalInstancesTieToFirstSeed) {
    const std::vector<std::uint64_t> seeds{9, 9, 9, 9, 9};
    EXPECT_EQ(select_hardest(3, Model::IC, seeds).coeff_seed, 9u);
}

TEST(SelectHardest, Deterministic) {
    const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    const CMatrix a = materialize(select_hardest(3, Model::IC, seeds));
    const CMatrix b = materialize(select_hardest(3, Model::IC, seeds));
    EXPECT_EQ(max_diff(a, b), 0.0);
}

TEST(SelectHardest, RequiresFiveSeeds) {
    const std::vector<std::uint64_t> seeds{0, 1, 2};
    EXPECT_THROW(select_hardest(3, Model::IC, seeds), std::invalid_argument);
}

TEST(HamiltonianJson, RoundTrip) {
    for (Model model : {Model::IC, Model::TFI, Model::Heisenberg}) {
        const PauliHamiltonian h = resolve_instance(model, CoeffMode::Random, 4);
        const PauliHamiltonian back = hamiltonian_from_json(nlohmann::json::parse(to_json(h).dump()));
        EXPECT_EQ(back.model, h.model);
        EXPECT_EQ(back.coeff_seed, h.coeff_seed);
        EXPECT_EQ(max_diff(materialize(back), materialize(h)), 0.0);
    }
}

TEST(FromCoefficients, ValidatesShape) {
    PauliHamiltonian h = build_tfi(3, CoeffMode::Uniform, 0);
    auto groups = h.groups;
    groups.pop_back();
    EXPECT_THROW(from_coefficients(Model::TFI, 3, CoeffMode::Uniform, 0, groups), std::invalid_argument);
    groups = h.groups;
    groups[0].values.push_back(1.0);
    EXPECT_THROW(from_coefficients(Model::TFI, 3, CoeffMode::Uniform, 0, groups), std::invalid_argument);
}

TEST(ModelNames, ParseRoundTrip) {
    for (Model m : {Model::IC, Model::TFI, Model::Heisenberg}) EXPECT_EQ(parse_model(to_string(m)), m);
    for (CoeffMode c : {CoeffMode::Uniform, CoeffMode::Random}) EXPECT_EQ(parse_coeff_mode(to_string(c)), c);
    EXPECT_THROW(parse_model("XY"), std::invalid_argument);
}

}  // namespace
}  // namespace navqt
