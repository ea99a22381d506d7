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

#include "navqt/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "navqt/rng.hpp"

namespace navqt {

namespace {

constexpr double kDistinctTol = 1e-9;
constexpr int kMaxDenseQubits = 10;

struct GroupShape {
    const char* symbol;
    bool on_bonds;
    Pauli axis;
};

// Coefficient draw order for random instances: bond groups first, then site
// groups; within a group, ascending site index.
std::vector<GroupShape> model_shape(Model model) {
    switch (model) {
        case Model::IC:
            return {{"JZ", true, Pauli::Z}, {"hZ", false, Pauli::Z}};
        case Model::TFI:
            return {{"JZ", true, Pauli::Z}, {"hZ", false, Pauli::Z}, {"hX", false, Pauli::X}};
        case Model::Heisenberg:
            return {{"JZ", true, Pauli::Z}, {"JX", true, Pauli::X}, {"JY", true, Pauli::Y},
                    {"hX", false, Pauli::X}};
    }
    throw std::logic_error("unreachable model");
}

void append_terms(PauliHamiltonian& h) {
    const auto bonds = ring_bonds(h.n_qubits);
    for (const auto& group : h.groups) {
        const char letter = static_cast<char>(group.axis);
        for (std::size_t i = 0; i < group.values.size(); ++i) {
            std::string ops(static_cast<std::size_t>(h.n_qubits), 'I');
            if (group.on_bonds) {
                ops[static_cast<std::size_t>(bonds[i].first)] = letter;
                ops[static_cast<std::size_t>(bonds[i].second)] = letter;
            } else {
                ops[i] = letter;
            }
            h.terms.push_back({std::move(ops), -group.values[i]});
        }
    }
}

}  // namespace

std::string to_string(Model model) {
    switch (model) {
        case Model::IC: return "IC";
        case Model::TFI: return "TFI";
        case Model::Heisenberg: return "Heisenberg";
    }
    return "?";
}

std::string to_string(CoeffMode mode) {
    return mode == CoeffMode::Uniform ? "uniform" : "random";
}

Model parse_model(std::string_view text) {
    if (text == "IC" || text == "ic" || text == "ising") return Model::IC;
    if (text == "TFI" || text == "tfi") return Model::TFI;
    if (text == "Heisenberg" || text == "heisenberg") return Model::Heisenberg;
    throw std::invalid_argument("unknown model '" + std::string(text) + "'");
}

CoeffMode parse_coeff_mode(std::string_view text) {
    if (text == "uniform") return CoeffMode::Uniform;
    if (text == "random") return CoeffMode::Random;
    throw std::invalid_argument("unknown coefficient mode '" + std::string(text) + "'");
}

std::vector<std::pair<int, int>> ring_bonds(int n) {
    std::vector<std::pair<int, int>> bonds;
    if (n == 2) {
        bonds.emplace_back(0, 1);
    } else if (n > 2) {
        for (int i = 0; i < n; ++i) bonds.emplace_back(i, (i + 1) % n);
    }
    return bonds;
}

PauliHamiltonian from_coefficients(Model model, int n, CoeffMode mode, std::uint64_t seed,
                                   std::vector<CoefficientGroup> groups) {
    if (n < 2) throw std::invalid_argument("Hamiltonian models need at least 2 qubits");
    const auto shape = model_shape(model);
    const std::size_t n_bonds = ring_bonds(n).size();
    if (groups.size() != shape.size()) {
        throw std::invalid_argument("coefficient groups do not match model " + to_string(model));
    }
    for (std::size_t g = 0; g < shape.size(); ++g) {
        auto& group = groups[g];
        if (group.symbol != shape[g].symbol) {
            throw std::invalid_argument("expected coefficient group " + std::string(shape[g].symbol) +
                                        ", got " + group.symbol);
        }
        const std::size_t expected = shape[g].on_bonds ? n_bonds : static_cast<std::size_t>(n);
        if (group.values.size() != expected) {
            throw std::invalid_argument("coefficient group " + group.symbol + " has wrong length");
        }
        for (double v : group.values) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite coefficient in " + group.symbol);
        }
        group.on_bonds = shape[g].on_bonds;
        group.axis = shape[g].axis;
    }
    PauliHamiltonian h;
    h.n_qubits = n;
    h.model = model;
    h.coeff_mode = mode;
    h.coeff_seed = seed;
    h.groups = std::move(groups);
    append_terms(h);
    return h;
}

PauliHamiltonian build_model(Model model, int n, CoeffMode mode, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("Hamiltonian models need at least 2 qubits, got " + std::to_string(n));
    const std::size_t n_bonds = ring_bonds(n).size();
    Engine engine(seed);
    std::vector<CoefficientGroup> groups;
    for (const auto& s : model_shape(model)) {
        CoefficientGroup group{s.symbol, s.on_bonds, s.axis, {}};
        const std::size_t count = s.on_bonds ? n_bonds : static_cast<std::size_t>(n);
        group.values.resize(count, 1.0);
        if (mode == CoeffMode::Random) {
            for (auto& v : group.values) v = standard_normal(engine);
        }
        groups.push_back(std::move(group));
    }
    return from_coefficients(model, n, mode, seed, std::move(groups));
}

PauliHamiltonian build_ising(int n, CoeffMode mode, std::uint64_t seed) {
    return build_model(Model::IC, n, mode, seed);
}

PauliHamiltonian build_tfi(int n, CoeffMode mode, std::uint64_t seed) {
    return build_model(Model::TFI, n, mode, seed);
}

PauliHamiltonian build_heisenberg(int n, CoeffMode mode, std::uint64_t seed) {
    return build_model(Model::Heisenberg, n, mode, seed);
}

CMatrix term_matrix(const PauliString& term, int n_qubits) {
    if (static_cast<int>(term.ops.size()) != n_qubits) {
        throw std::invalid_argument("Pauli string length does not match qubit count");
    }
    const auto dim = Eigen::Index{1} << n_qubits;
    std::size_t flip = 0;
    for (int q = 0; q < n_qubits; ++q) {
        const Pauli p = pauli_from_char(term.ops[static_cast<std::size_t>(q)]);
        if (p == Pauli::X || p == Pauli::Y) flip |= qubit_mask(q, n_qubits);
    }
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Complex phase{1.0, 0.0};
        for (int q = 0; q < n_qubits; ++q) {
            const bool bit = (static_cast<std::size_t>(col) & qubit_mask(q, n_qubits)) != 0;
            switch (term.ops[static_cast<std::size_t>(q)]) {
                case 'Z': if (bit) phase = -phase; break;
                case 'Y': phase *= bit ? Complex{0, -1} : Complex{0, 1}; break;
                default: break;
            }
        }
        out(static_cast<Eigen::Index>(static_cast<std::size_t>(col) ^ flip), col) = term.coefficient * phase;
    }
    return out;
}

CMatrix materialize(const PauliHamiltonian& h) {
    if (h.n_qubits < 1) throw std::invalid_argument("materialize: Hamiltonian has no qubits");
    const auto dim = Eigen::Index{1} << h.n_qubits;
    CMatrix out = CMatrix::Zero(dim, dim);
    for (const auto& term : h.terms) out += term_matrix(term, h.n_qubits);
    return out;
}

double spectral_gap(const RVector& w) {
    for (Eigen::Index k = 1; k < w.size(); ++k) {
        if (w[k] - w[0] > kDistinctTol) return w[k] - w[0];
    }
    return 0.0;
}

double spectral_gap(const PauliHamiltonian& h) {
    if (h.n_qubits > kMaxDenseQubits) throw std::invalid_argument("spectral_gap: too many qubits for dense solve");
    return spectral_gap(hermitian_eig(materialize(h)).values);
}

PauliHamiltonian select_hardest(int n, Model model, std::span<const std::uint64_t> seeds) {
    if (seeds.size() != 5) throw std::invalid_argument("select_hardest expects exactly 5 seeds");
    std::vector<std::uint64_t> order(seeds.begin(), seeds.end());
    std::sort(order.begin(), order.end());
    PauliHamiltonian best;
    double best_gap = 0.0;
    bool have = false;
    for (auto seed : order) {
        PauliHamiltonian candidate = build_model(model, n, CoeffMode::Random, seed);
        const double gap = spectral_gap(candidate);
        if (!have || gap < best_gap) {
            best = std::move(candidate);
            best_gap = gap;
            have = true;
        }
    }
    return best;
}

PauliHamiltonian resolve_instance(Model model, CoeffMode mode, int n) {
    if (mode == CoeffMode::Uniform) return build_model(model, n, CoeffMode::Uniform, 0);
    const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    return select_hardest(n, model, seeds);
}

nlohmann::json to_json(const PauliHamiltonian& h) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& g : h.groups) coeffs[g.symbol] = g.values;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& g : h.groups) order.push_back(g.symbol);
    return {
        {"model", to_string(h.model)},
        {"n", h.n_qubits},
        {"coeff_mode", to_string(h.coeff_mode)},
        {"seed", h.coeff_seed},
        {"coefficient_order", order},
        {"coefficients", coeffs},
    };
}

PauliHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
    const Model model = parse_model(j.at("model").get<std::string>());
    const int n = j.at("n").get<int>();
    const CoeffMode mode = parse_coeff_mode(j.at("coeff_mode").get<std::string>());
    const auto seed = j.at("seed").get<std::uint64_t>();
    std::vector<CoefficientGroup> groups;
    for (const auto& s : model_shape(model)) {
        CoefficientGroup g;
        g.symbol = s.symbol;
        g.values = j.at("coefficients").at(s.symbol).get<std::vector<double>>();
        groups.push_back(std::move(g));
    }
    return from_coefficients(model, n, mode, seed, std::move(groups));
}

}  // namespace navqt
