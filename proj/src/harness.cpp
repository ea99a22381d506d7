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

#include "navqt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "navqt/optimizer.hpp"

namespace navqt {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kManifestName = "manifest.json";
constexpr const char* kReportDirName = "report";

std::string group_key(const ExperimentConfig& c) {
    return to_string(c.model) + "_" + to_string(c.coeffs) + "_N" + std::to_string(c.n) + "_" + to_string(c.mode);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunRecord aborted_record(const ExperimentConfig& config, const PauliHamiltonian& h, const std::string& message) {
    RunRecord r;
    r.config = config;
    r.final_lambda = kNaN;
    r.final_fidelity = kNaN;
    r.final_free_energy = kNaN;
    r.best.free_energy = kNaN;
    r.last.free_energy = kNaN;
    r.hamiltonian = to_json(h);
    r.status = "aborted";
    r.message = message;
    return r;
}

void persist(const RunRecord& record, const fs::path& out_dir) {
    const std::string key = config_key(record.config);
    write_file_atomic(out_dir / (key + ".json"), dump(to_json(record)));
    write_file_atomic(out_dir / (key + ".csv"), history_csv(record.history));
}

template <class Fn>
void parallel_indices(std::size_t count, int workers, Fn&& fn) {
    const std::size_t pool = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, count);
    if (pool <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t w = 0; w < pool; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<double> default_beta_grid() { return {0.001, 0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 10.0, 100.0}; }

GridSpec GridSpec::full() { return {}; }

GridSpec GridSpec::smoke() {
    GridSpec g;
    g.eta_thetas = {0.01};
    g.eta_lambdas = {0.0001};
    g.seeds = {0};
    return g;
}

std::size_t GridSpec::size() const {
    return bindings.size() * lambda_inits.size() * eta_thetas.size() * eta_lambdas.size() * seeds.size();
}

std::vector<ExperimentConfig> expand_grid(const ExperimentConfig& base, const GridSpec& grid) {
    std::vector<ExperimentConfig> out;
    out.reserve(grid.size());
    for (Binding b : grid.bindings) {
        for (double li : grid.lambda_inits) {
            for (double et : grid.eta_thetas) {
                for (double el : grid.eta_lambdas) {
                    for (std::uint64_t seed : grid.seeds) {
                        ExperimentConfig c = base;
                        c.binding = b;
                        c.lambda_init = li;
                        c.eta_theta = et;
                        c.eta_lambda = el;
                        c.theta_seed = seed;
                        out.push_back(c);
                    }
                }
            }
        }
    }
    return out;
}

void check_system_size(int n, bool allow_large) {
    const int limit = allow_large ? kLargeMaxQubits : kDeskMaxQubits;
    if (n < 1 || n > limit) {
        std::string msg = "system size N=" + std::to_string(n) + " outside 1.." + std::to_string(limit);
        if (!allow_large && n <= kLargeMaxQubits) msg += " (pass --allow-large for up to 7 qubits)";
        throw std::invalid_argument(msg);
    }
}

std::optional<std::size_t> select_best(std::span<const RunRecord> records) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RunRecord& r = records[i];
        if (r.status != "ok" || !std::isfinite(r.final_free_energy)) continue;
        if (!best) {
            best = i;
            continue;
        }
        const RunRecord& b = records[*best];
        if (r.final_free_energy != b.final_free_energy) {
            if (r.final_free_energy < b.final_free_energy) best = i;
        } else if (r.final_fidelity != b.final_fidelity) {
            if (r.final_fidelity > b.final_fidelity) best = i;
        } else if (config_key(r.config) < config_key(b.config)) {
            best = i;
        }
    }
    return best;
}

const RunRecord& GridResult::best_record() const {
    if (!best) throw std::runtime_error("grid search produced no successful run");
    return records[*best];
}

GridResult grid_search(const ExperimentConfig& base, const PauliHamiltonian& h, const GridSpec& grid,
                       const fs::path& out_dir, const GridOptions& options) {
    if (grid.size() == 0) throw std::invalid_argument("grid has no points");
    const std::vector<ExperimentConfig> configs = expand_grid(base, grid);
    if (options.persist) fs::create_directories(out_dir);

    GridResult result;
    result.records.resize(configs.size());
    parallel_indices(configs.size(), options.workers, [&](std::size_t i) {
        RunRecord record;
        try {
            record = run_experiment(configs[i], h);
        } catch (const std::exception& err) {
            record = aborted_record(configs[i], h, err.what());
        }
        if (options.persist) persist(record, out_dir);
        if (!options.keep_history) record.history.clear();
        result.records[i] = std::move(record);
    });

    result.best = select_best(result.records);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : result.records) {
        if (r.status != "ok") ++result.n_failed;
        const std::string key = config_key(r.config);
        nlohmann::json entry{{"config_key", key}, {"file", key + ".json"}, {"status", r.status}};
        if (r.status == "ok") {
            entry["final_free_energy"] = r.final_free_energy;
            entry["final_fidelity"] = r.final_fidelity;
            entry["final_lambda"] = r.final_lambda;
        } else {
            entry["message"] = r.message;
        }
        runs.push_back(std::move(entry));
    }
    if (options.persist) {
        nlohmann::json manifest{{"group", group_key(base)},
                                {"beta", base.beta},
                                {"grid_size", configs.size()},
                                {"n_failed", result.n_failed},
                                {"hamiltonian", to_json(h)},
                                {"runs", std::move(runs)}};
        manifest["best"] = result.best ? nlohmann::json(config_key(result.records[*result.best].config)) : nullptr;
        write_file_atomic(out_dir / kManifestName, dump(manifest));
    }
    return result;
}

GridResult grid_search(const ExperimentConfig& base, const GridSpec& grid, const fs::path& out_dir,
                       const GridOptions& options) {
    return grid_search(base, resolve_instance(base.model, base.coeffs, base.n), grid, out_dir, options);
}

SweepResult beta_sweep(const ExperimentConfig& base, const GridSpec& grid, const fs::path& out_dir,
                       const GridOptions& options, std::span<const double> betas) {
    const std::vector<double> defaults = default_beta_grid();
    if (betas.empty()) betas = defaults;
    const PauliHamiltonian h = resolve_instance(base.model, base.coeffs, base.n);

    SweepResult out;
    for (double beta : betas) {
        ExperimentConfig c = base;
        c.beta = beta;
        GridOptions grid_options = options;
        grid_options.keep_history = false;
        const GridResult g = grid_search(c, h, grid, out_dir / ("beta_" + format_double(beta)), grid_options);
        SweepRow row;
        row.beta = beta;
        row.n_runs = static_cast<int>(g.records.size());
        row.n_failed = g.n_failed;
        if (g.best) {
            const RunRecord& b = g.records[*g.best];
            row.best_fidelity = b.final_fidelity;
            row.best_lambda = b.final_lambda;
            row.best_free_energy = b.final_free_energy;
            row.best_key = config_key(b.config);
        } else {
            row.best_fidelity = row.best_lambda = row.best_free_energy = kNaN;
        }
        out.n_failed += g.n_failed;
        out.rows.push_back(row);
    }
    if (options.persist) {
        fs::create_directories(out_dir);
        out.csv_path = out_dir / ("sweep_" + group_key(base) + ".csv");
        write_file_atomic(out.csv_path, sweep_csv(out.rows));
    }
    return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string s = "beta,best_fidelity,best_lambda,best_free_energy,n_runs\n";
    for (const auto& r : rows) {
        s += format_double(r.beta) + "," + format_double(r.best_fidelity) + "," + format_double(r.best_lambda) + "," +
             format_double(r.best_free_energy) + "," + std::to_string(r.n_runs) + "\n";
    }
    return s;
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "beta,best_fidelity,best_lambda,best_free_energy,n_runs") {
        throw std::runtime_error("sweep CSV: unexpected header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 5) throw std::runtime_error("sweep CSV: expected 5 columns in '" + line + "'");
        SweepRow r;
        r.beta = parse_double(cells[0]);
        r.best_fidelity = parse_double(cells[1]);
        r.best_lambda = parse_double(cells[2]);
        r.best_free_energy = parse_double(cells[3]);
        r.n_runs = std::stoi(cells[4]);
        rows.push_back(r);
    }
    return rows;
}

ReportResult report(const fs::path& out_dir) {
    ReportResult result;
    result.report_dir = out_dir / kReportDirName;

    std::vector<fs::path> files;
    if (fs::is_directory(out_dir)) {
        for (auto it = fs::recursive_directory_iterator(out_dir); it != fs::recursive_directory_iterator(); ++it) {
            if (it->is_directory() && it->path().filename() == kReportDirName) {
                it.disable_recursion_pending();
                continue;
            }
            const fs::path& p = it->path();
            if (it->is_regular_file() && p.extension() == ".json" && p.filename() != kManifestName) files.push_back(p);
        }
    } else {
        result.warnings.push_back("directory " + out_dir.string() + " does not exist");
    }
    std::sort(files.begin(), files.end());

    // group -> beta -> records
    std::map<std::string, std::map<double, std::vector<RunRecord>>> groups;
    for (const auto& path : files) {
        const std::string rel = fs::relative(path, out_dir).generic_string();
        try {
            RunRecord r = record_from_json(nlohmann::json::parse(read_text(path)));
            groups[group_key(r.config)][r.config.beta].push_back(std::move(r));
            ++result.n_records;
        } catch (const std::exception& err) {
            result.warnings.push_back("skipping " + rel + ": " + err.what());
        }
    }
    if (result.n_records == 0) result.warnings.push_back("no run records found under " + out_dir.string());

    std::string fid_csv = "group,beta,best_fidelity,n_runs\n";
    std::string lambda_csv = "group,beta,best_lambda\n";
    std::string curve_csv = "group,beta,iter,energy,entropy,free_energy,lambda,fidelity\n";
    nlohmann::json group_list = nlohmann::json::array();
    for (auto& [key, by_beta] : groups) {
        const ExperimentConfig& c0 = by_beta.begin()->second.front().config;
        nlohmann::json points = nlohmann::json::array();
        for (auto& [beta, records] : by_beta) {
            // Duplicate keys (same run persisted twice) collapse to one.
            std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
                return config_key(a.config) < config_key(b.config);
            });
            records.erase(std::unique(records.begin(), records.end(),
                                      [](const RunRecord& a, const RunRecord& b) {
                                          return config_key(a.config) == config_key(b.config);
                                      }),
                          records.end());
            const auto best = select_best(records);
            int failed = 0;
            for (const auto& r : records) failed += r.status != "ok";
            nlohmann::json point{{"beta", beta}, {"n_runs", records.size()}, {"n_failed", failed}};
            const std::string beta_text = format_double(beta);
            if (best) {
                const RunRecord& b = records[*best];
                point["best_config_key"] = config_key(b.config);
                point["best_fidelity"] = b.final_fidelity;
                point["best_lambda"] = b.final_lambda;
                point["best_free_energy"] = b.final_free_energy;
                fid_csv += key + "," + beta_text + "," + format_double(b.final_fidelity) + "," +
                           std::to_string(records.size()) + "\n";
                lambda_csv += key + "," + beta_text + "," + format_double(b.final_lambda) + "\n";
                for (const auto& m : b.history) {
                    curve_csv += key + "," + beta_text + "," + std::to_string(m.iter) + "," + format_double(m.energy) +
                                 "," + format_double(m.entropy) + "," + format_double(m.free_energy) + "," +
                                 format_double(m.lambda) + "," + format_double(m.fidelity) + "\n";
                }
            }
            points.push_back(std::move(point));
        }
        group_list.push_back({{"group", key},
                              {"model", to_string(c0.model)},
                              {"coeffs", to_string(c0.coeffs)},
                              {"n", c0.n},
                              {"mode", to_string(c0.mode)},
                              {"points", std::move(points)}});
    }

    result.summary = {{"n_records", result.n_records}, {"warnings", result.warnings}, {"groups", std::move(group_list)}};
    fs::create_directories(result.report_dir);
    write_file_atomic(result.report_dir / "summary.json", dump(result.summary));
    write_file_atomic(result.report_dir / "fidelity_vs_beta.csv", fid_csv);
    write_file_atomic(result.report_dir / "lambda_vs_beta.csv", lambda_csv);
    write_file_atomic(result.report_dir / "learning_curves.csv", curve_csv);
    return result;
}

RunRecord replay(const RunRecord& record) {
    return run_experiment(record.config, hamiltonian_from_json(record.hamiltonian));
}

}  // namespace navqt
