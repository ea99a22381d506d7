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

// Reference implementations used as test oracles. They rebuild everything from
// 2x2 Pauli matrices and Kronecker products, sharing no kernels with the library.

#ifndef NAVQT_TESTS_TEST_UTIL_HPP
#define NAVQT_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "navqt/ansatz.hpp"

namespace navqt::testing {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat p2(char c) {
    Mat m(2, 2);
    switch (c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Cd(0, -1), Cd(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1; break;
    }
    return m;
}

inline Mat kron2(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Tensor product of single-qubit letters, qubit 0 leftmost.
inline Mat pauli_word(const std::string& ops) {
    Mat m = Mat::Identity(1, 1);
    for (char c : ops) m = kron2(m, p2(c));
    return m;
}

inline std::string word_on(int n, std::initializer_list<std::pair<int, char>> letters) {
    std::string w(static_cast<std::size_t>(n), 'I');
    for (auto [q, c] : letters) w[static_cast<std::size_t>(q)] = c;
    return w;
}

inline Mat oracle_gate(const GateSpec& g, double angle, int n) {
    std::string w;
    switch (g.kind) {
        case GateKind::RZZ: w = word_on(n, {{g.q0, 'Z'}, {g.q1, 'Z'}}); break;
        case GateKind::RZ: w = word_on(n, {{g.q0, 'Z'}}); break;
        case GateKind::RX: w = word_on(n, {{g.q0, 'X'}}); break;
    }
    const Mat p = pauli_word(w);
    return std::cos(angle) * Mat::Identity(p.rows(), p.cols()) - Cd(0, 1) * std::sin(angle) * p;
}

/// Kraus form of the one-qubit depolarizing channel.
inline Mat oracle_depolarize(const Mat& rho, int q, int n, double lambda) {
    Mat out = (1.0 - 0.75 * lambda) * rho;
    for (char c : {'X', 'Y', 'Z'}) {
        const Mat k = pauli_word(word_on(n, {{q, c}}));
        out += 0.25 * lambda * k * rho * k.adjoint();
    }
    return out;
}

inline Mat oracle_zero_state(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Mat rho = Mat::Zero(d, d);
    rho(0, 0) = 1.0;
    return rho;
}

inline Mat oracle_simulate(const NoisyAnsatz& a, const std::vector<double>& angles, double lambda) {
    const int n = a.n_qubits();
    Mat rho = oracle_zero_state(n);
    std::size_t g = 0;
    for (const auto& layer : a.layers()) {
        for (const auto& gate : layer.gates) {
            const Mat u = oracle_gate(gate, angles[g++], n);
            rho = u * rho * u.adjoint();
        }
        for (int q = 0; q < n; ++q) rho = oracle_depolarize(rho, q, n, lambda);
    }
    return rho;
}

inline double oracle_energy(const Mat& rho, const Mat& h) { return (h * rho).trace().real(); }

inline double oracle_entropy(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double w = es.eigenvalues()[i];
        if (w > 1e-300) s -= w * std::log(w);
    }
    return s;
}

inline Mat random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Cd(nd(rng), nd(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    return qr.householderQ() * Mat::Identity(d, d);
}

inline Mat random_hermitian(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Cd(nd(rng), nd(rng));
    return 0.5 * (g + g.adjoint());
}

/// Ginibre-distributed mixed state G G^dagger / Tr.
inline Mat random_density(int n, std::mt19937_64& rng, int rank = 0) {
    const int d = 1 << n;
    const int r = rank > 0 ? rank : d;
    std::normal_distribution<double> nd;
    Mat g(d, r);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = Cd(nd(rng), nd(rng));
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

inline double max_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace navqt::testing

#endif  // NAVQT_TESTS_TEST_UTIL_HPP
