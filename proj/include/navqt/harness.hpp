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

#ifndef NAVQT_HARNESS_HPP
#define NAVQT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "navqt/hamiltonian.hpp"
#include "navqt/record.hpp"

namespace navqt {

inline constexpr int kDeskMaxQubits = 5;
inline constexpr int kLargeMaxQubits = 7;

/// Default inverse-temperature grid.
std::vector<double> default_beta_grid();

/// Hyperparameter axes. Expansion order is binding, lambda_init, eta_theta,
/// eta_lambda, seed (last varies fastest).
struct GridSpec {
    std::vector<Binding> bindings{Binding::Restricted, Binding::Flexible};
    std::vector<double> lambda_inits{1e-8, 0.001, 0.1};
    std::vector<double> eta_thetas{0.01, 0.4};
    std::vector<double> eta_lambdas{0.0001, 0.1};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};

    /// 2 x 3 x 2 x 2 x 5 = 120 runs.
    static GridSpec full();
    /// One seed and one (eta_theta, eta_lambda) pair: 6 runs.
    static GridSpec smoke();

    std::size_t size() const;
};

std::vector<ExperimentConfig> expand_grid(const ExperimentConfig& base, const GridSpec& grid);

/// Throws unless 1 <= n <= 5, or n <= 7 when `allow_large` is set.
void check_system_size(int n, bool allow_large);

/// Lowest final_free_energy among records with status "ok"; ties go to the
/// higher fidelity, then to the smaller config_key.
std::optional<std::size_t> select_best(std::span<const RunRecord> records);

struct GridResult {
    std::vector<RunRecord> records;  // in expansion order
    std::optional<std::size_t> best;
    int n_failed = 0;

    const RunRecord& best_record() const;
};

struct GridOptions {
    int workers = 1;
    bool persist = true;
    bool keep_history = true;  // false drops per-iteration data from the in-memory records
};

/// Runs every grid point against one Hamiltonian instance, persisting
/// <config_key>.json and <config_key>.csv plus manifest.json under out_dir.
GridResult grid_search(const ExperimentConfig& base, const PauliHamiltonian& h, const GridSpec& grid,
                       const std::filesystem::path& out_dir, const GridOptions& options = {});
/// Resolves the instance from base.model / base.coeffs / base.n first.
GridResult grid_search(const ExperimentConfig& base, const GridSpec& grid, const std::filesystem::path& out_dir,
                       const GridOptions& options = {});

struct SweepRow {
    double beta = 0.0;
    double best_fidelity = 0.0;
    double best_lambda = 0.0;
    double best_free_energy = 0.0;
    int n_runs = 0;
    int n_failed = 0;
    std::string best_key;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::filesystem::path csv_path;
    int n_failed = 0;
};

/// grid_search at each beta, records under out_dir/beta_<beta>/, summary CSV
/// at out_dir/sweep_<model>_<coeffs>_N<n>_<mode>.csv.
SweepResult beta_sweep(const ExperimentConfig& base, const GridSpec& grid, const std::filesystem::path& out_dir,
                       const GridOptions& options = {}, std::span<const double> betas = {});

/// beta,best_fidelity,best_lambda,best_free_energy,n_runs
std::string sweep_csv(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

struct ReportResult {
    nlohmann::json summary;
    std::vector<std::string> warnings;
    int n_records = 0;
    std::filesystem::path report_dir;
};

/// Aggregates every run record below out_dir into out_dir/report/: summary.json,
/// fidelity_vs_beta.csv, lambda_vs_beta.csv and learning_curves.csv. Unreadable
/// record files become warnings.
ReportResult report(const std::filesystem::path& out_dir);

/// Re-runs the persisted config against the persisted Hamiltonian.
RunRecord replay(const RunRecord& record);

}  // namespace navqt

#endif  // NAVQT_HARNESS_HPP
