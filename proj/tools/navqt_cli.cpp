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

// navqt command line: run, grid, sweep, thermal, report.

#include <algorithm>
#include <array>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "navqt/harness.hpp"
#include "navqt/optimizer.hpp"
#include "navqt/thermo.hpp"

namespace {

namespace fs = std::filesystem;
using navqt::ExperimentConfig;

constexpr std::array kConfigKeys = {
    "model",      "coeffs",    "n",           "beta",   "binding", "lambda_init",     "eta_theta",      "eta_lambda",
    "theta_seed", "max_iters", "mode",        "backend", "K",      "out_dir",         "layers",         "lambda_min",
    "trajectory_seed", "fidelity_stride",
};

// Config flags shared by every experiment subcommand. Values stay as text and
// go through the same parser as config files, so flags and files agree.
struct ConfigFlags {
    std::string file;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--config", file, "key = value config file; flags override it")->check(CLI::ExistingFile);
        for (const char* key : kConfigKeys) {
            std::string flag = key;
            if (flag != "K") std::replace(flag.begin(), flag.end(), '_', '-');
            app->add_option("--" + flag, values[key], std::string("config field ") + key);
        }
    }

    ExperimentConfig resolve() const {
        ExperimentConfig c = file.empty() ? ExperimentConfig{} : navqt::load_config(file);
        for (const auto& [key, value] : values) {
            if (!value.empty()) navqt::set_config_value(c, key, value);
        }
        return c;
    }
};

struct GridFlags {
    bool smoke = false;
    int seeds = 0;
    int workers = 1;
    bool allow_large = false;

    void attach(CLI::App* app) {
        app->add_flag("--smoke", smoke, "one seed and one learning-rate pair (6 runs)");
        app->add_option("--seeds", seeds, "use seeds 0..k-1 instead of the grid default")->check(CLI::PositiveNumber);
        app->add_option("--workers", workers, "parallel grid workers")->check(CLI::PositiveNumber);
        app->add_flag("--allow-large", allow_large, "permit up to 7 qubits");
    }

    navqt::GridSpec to_grid() const {
        navqt::GridSpec g = smoke ? navqt::GridSpec::smoke() : navqt::GridSpec::full();
        if (seeds > 0) {
            g.seeds.clear();
            for (int s = 0; s < seeds; ++s) g.seeds.push_back(static_cast<std::uint64_t>(s));
        }
        return g;
    }
};

void print_record_summary(const navqt::RunRecord& r) {
    std::cout << navqt::config_key(r.config) << " status=" << r.status;
    if (r.status == "ok") {
        std::cout << " free_energy=" << navqt::format_double(r.final_free_energy)
                  << " fidelity=" << navqt::format_double(r.final_fidelity)
                  << " lambda=" << navqt::format_double(r.final_lambda);
    } else {
        std::cout << " message=\"" << r.message << "\"";
    }
    std::cout << '\n';
}

int cmd_run(const ConfigFlags& flags, bool allow_large) {
    const ExperimentConfig c = flags.resolve();
    navqt::check_system_size(c.n, allow_large);
    const navqt::PauliHamiltonian h = navqt::resolve_instance(c.model, c.coeffs, c.n);
    navqt::RunRecord r;
    try {
        r = navqt::run_experiment(c, h);
    } catch (const std::exception& err) {
        r.config = c;
        r.status = "aborted";
        r.message = err.what();
        r.hamiltonian = navqt::to_json(h);
    }
    const fs::path dir = c.out_dir;
    fs::create_directories(dir);
    const std::string key = navqt::config_key(c);
    navqt::write_file_atomic(dir / (key + ".json"), navqt::to_json(r).dump(2) + "\n");
    navqt::write_file_atomic(dir / (key + ".csv"), navqt::history_csv(r.history));
    print_record_summary(r);
    return r.status == "ok" ? 0 : 1;
}

int cmd_grid(const ConfigFlags& flags, const GridFlags& grid) {
    const ExperimentConfig c = flags.resolve();
    navqt::check_system_size(c.n, grid.allow_large);
    navqt::GridOptions options;
    options.workers = grid.workers;
    options.keep_history = false;
    const navqt::GridResult g = navqt::grid_search(c, grid.to_grid(), c.out_dir, options);
    std::cout << "runs=" << g.records.size() << " failed=" << g.n_failed << '\n';
    if (g.best) {
        std::cout << "best: ";
        print_record_summary(g.best_record());
    }
    return g.n_failed == 0 && g.best ? 0 : 1;
}

int cmd_sweep(const ConfigFlags& flags, const GridFlags& grid, const std::vector<double>& betas) {
    const ExperimentConfig c = flags.resolve();
    navqt::check_system_size(c.n, grid.allow_large);
    navqt::GridOptions options;
    options.workers = grid.workers;
    const navqt::SweepResult s = navqt::beta_sweep(c, grid.to_grid(), c.out_dir, options, betas);
    std::cout << navqt::sweep_csv(s.rows);
    std::cout << "wrote " << s.csv_path.string() << " failed=" << s.n_failed << '\n';
    return s.n_failed == 0 ? 0 : 1;
}

int cmd_thermal(const ConfigFlags& flags) {
    const ExperimentConfig c = flags.resolve();
    const navqt::PauliHamiltonian h = navqt::resolve_instance(c.model, c.coeffs, c.n);
    const navqt::ThermalState t = navqt::thermal_state_full(h, c.beta);
    const navqt::Eigensystem rho_eig = navqt::hermitian_eig(t.rho.matrix());
    const double e = navqt::energy(t.rho, h);
    const double s = navqt::entropy_of_spectrum(rho_eig.values);
    nlohmann::json out{
        {"hamiltonian", navqt::to_json(h)},
        {"beta", c.beta},
        {"hamiltonian_spectrum", std::vector<double>(t.hamiltonian_spectrum.begin(), t.hamiltonian_spectrum.end())},
        {"populations", std::vector<double>(t.populations.begin(), t.populations.end())},
        {"log_partition", t.log_partition},
        {"trace", t.rho.matrix().trace().real()},
        {"min_eigenvalue", rho_eig.values.minCoeff()},
        {"energy", e},
        {"entropy", s},
        {"free_energy", navqt::free_energy(e, s, c.beta)},
        {"spectral_gap", navqt::spectral_gap(t.hamiltonian_spectrum)},
    };
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_report(const std::string& dir) {
    const navqt::ReportResult r = navqt::report(dir);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "records=" << r.n_records << " report=" << r.report_dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise-assisted variational quantum thermalizer"};
    app.require_subcommand(1);

    ConfigFlags run_flags, grid_flags, sweep_flags, thermal_flags;
    GridFlags grid_opts, sweep_opts;
    bool run_allow_large = false;
    std::vector<double> betas;
    std::string report_dir = "runs";

    CLI::App* run = app.add_subcommand("run", "train one configuration");
    run_flags.attach(run);
    run->add_flag("--allow-large", run_allow_large, "permit up to 7 qubits");

    CLI::App* grid = app.add_subcommand("grid", "hyperparameter grid search at one beta");
    grid_flags.attach(grid);
    grid_opts.attach(grid);

    CLI::App* sweep = app.add_subcommand("sweep", "grid search over the beta grid");
    sweep_flags.attach(sweep);
    sweep_opts.attach(sweep);
    sweep->add_option("--betas", betas, "override the beta grid")->delimiter(',');

    CLI::App* thermal = app.add_subcommand("thermal", "exact thermal-state diagnostics");
    thermal_flags.attach(thermal);

    CLI::App* rep = app.add_subcommand("report", "aggregate run records");
    rep->add_option("dir", report_dir, "directory holding run records");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_flags, run_allow_large);
        if (*grid) return cmd_grid(grid_flags, grid_opts);
        if (*sweep) return cmd_sweep(sweep_flags, sweep_opts, betas);
        if (*thermal) return cmd_thermal(thermal_flags);
        if (*rep) return cmd_report(report_dir);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
