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

#ifndef NAVQT_HAMILTONIAN_HPP
#define NAVQT_HAMILTONIAN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "navqt/qcore.hpp"

namespace navqt {

enum class Model { IC, TFI, Heisenberg };
enum class CoeffMode { Uniform, Random };

std::string to_string(Model model);
std::string to_string(CoeffMode mode);
Model parse_model(std::string_view text);
CoeffMode parse_coeff_mode(std::string_view text);

/// Nearest-neighbour bonds of a periodic chain. A 2-site chain has a single
/// bond (0,1); a 1-site chain has none.
std::vector<std::pair<int, int>> ring_bonds(int n);

struct PauliString {
    std::string ops;  // one of I/X/Y/Z per qubit, qubit 0 first
    double coefficient = 0.0;
};

/// One coupling symbol of a model (e.g. J^Z on bonds, h^X on sites) and its
/// per-site values. The Hamiltonian term for entry i is -values[i] * P.
struct CoefficientGroup {
    std::string symbol;  // "JZ", "JX", "JY", "hZ", "hX"
    bool on_bonds = false;
    Pauli axis = Pauli::Z;
    std::vector<double> values;
};

struct PauliHamiltonian {
    int n_qubits = 0;
    std::vector<PauliString> terms;
    Model model = Model::IC;
    CoeffMode coeff_mode = CoeffMode::Uniform;
    std::uint64_t coeff_seed = 0;
    std::vector<CoefficientGroup> groups;
};

/// -sum J_i Z_i Z_{i+1} - sum h_i Z_i on a ring.
PauliHamiltonian build_ising(int n, CoeffMode mode, std::uint64_t seed);
/// Ising chain plus -sum h^X_i X_i.
PauliHamiltonian build_tfi(int n, CoeffMode mode, std::uint64_t seed);
/// -sum (J^Z ZZ + J^X XX + J^Y YY) - sum h^X_i X_i on a ring.
PauliHamiltonian build_heisenberg(int n, CoeffMode mode, std::uint64_t seed);
PauliHamiltonian build_model(Model model, int n, CoeffMode mode, std::uint64_t seed);

/// Rebuilds a Hamiltonian from explicit coefficient arrays. Group symbols and
/// sizes must match what the model expects for n qubits.
PauliHamiltonian from_coefficients(Model model, int n, CoeffMode mode, std::uint64_t seed,
                                   std::vector<CoefficientGroup> groups);

CMatrix term_matrix(const PauliString& term, int n_qubits);
CMatrix materialize(const PauliHamiltonian& h);

/// Gap between the two lowest distinct eigenvalues (distinctness 1e-9); 0 when
/// the spectrum is a single point.
double spectral_gap(const PauliHamiltonian& h);
double spectral_gap(const RVector& ascending_eigenvalues);

/// Random-coefficient instance with the smallest spectral gap over five seeds;
/// ties go to the lowest seed.
PauliHamiltonian select_hardest(int n, Model model, std::span<const std::uint64_t> seeds);

/// Uniform instance, or the hardest random instance over seeds 0..4.
PauliHamiltonian resolve_instance(Model model, CoeffMode mode, int n);

nlohmann::json to_json(const PauliHamiltonian& h);
PauliHamiltonian hamiltonian_from_json(const nlohmann::json& j);

}  // namespace navqt

#endif  // NAVQT_HAMILTONIAN_HPP
