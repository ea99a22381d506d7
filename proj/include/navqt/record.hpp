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

#ifndef NAVQT_RECORD_HPP
#define NAVQT_RECORD_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "navqt/ansatz.hpp"
#include "navqt/hamiltonian.hpp"
#include "navqt/simulator.hpp"

namespace navqt {

enum class TrainMode { Approx, TrueFreeEnergy };

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view text);

/// One experiment. Plain-text form is `key = value` per line, `#` comments.
struct ExperimentConfig {
    Model model = Model::IC;
    CoeffMode coeffs = CoeffMode::Uniform;
    int n = 3;
    double beta = 1.0;
    Binding binding = Binding::Restricted;
    double lambda_init = 1e-8;
    double eta_theta = 0.01;
    double eta_lambda = 0.0001;
    std::uint64_t theta_seed = 0;
    int max_iters = 1000;
    TrainMode mode = TrainMode::Approx;
    Backend backend = Backend::Exact;
    int K = 0;          // trajectories per evaluation; 0 means 500 N
    std::string out_dir = "runs";
    int layers = 0;     // 0 means ceil(N / 2)
    double lambda_min = kDefaultLambdaMin;
    std::uint64_t trajectory_seed = 0;
    int fidelity_stride = 1;  // track fidelity every k-th iteration; 0 disables

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Applies one `key = value` assignment. Throws on unknown keys or bad values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
std::string format_config(const ExperimentConfig& config);

/// Canonical identifier; also the lexicographic tie-break order.
std::string config_key(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct IterationMetrics {
    int iter = 0;
    double energy = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
    double lambda = 0.0;
    double fidelity = std::numeric_limits<double>::quiet_NaN();  // NaN when not tracked
};

struct IterateSummary {
    int iter = 0;
    double energy = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
    double lambda = 0.0;
    double fidelity = 0.0;
    std::vector<double> theta;
};

struct RunRecord {
    ExperimentConfig config;
    std::vector<IterationMetrics> history;
    // Best iterate (lowest cost seen); the reported solution.
    double final_lambda = 0.0;
    double final_fidelity = 0.0;
    double final_free_energy = 0.0;
    IterateSummary best;
    IterateSummary last;
    double wall_time = 0.0;
    nlohmann::json hamiltonian;
    std::string status = "ok";
    std::string message;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

/// Equality of everything except wall_time.
bool same_result(const RunRecord& a, const RunRecord& b);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Per-iteration CSV: iter,energy,entropy,free_energy,lambda,fidelity
std::string history_csv(const std::vector<IterationMetrics>& history);
std::vector<IterationMetrics> parse_history_csv(std::istream& in);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace navqt

#endif  // NAVQT_RECORD_HPP
