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

#include "navqt/record.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace navqt {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config key '" + std::string(key) + "': bad integer '" + std::string(text) + "'");
    }
    return value;
}

double json_number(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

nlohmann::json to_json(const IterateSummary& s) {
    return {{"iter", s.iter},
            {"energy", s.energy},
            {"entropy", s.entropy},
            {"free_energy", s.free_energy},
            {"lambda", s.lambda},
            {"fidelity", s.fidelity},
            {"theta", s.theta}};
}

IterateSummary summary_from_json(const nlohmann::json& j) {
    IterateSummary s;
    s.iter = j.at("iter").get<int>();
    s.energy = json_number(j.at("energy"));
    s.entropy = json_number(j.at("entropy"));
    s.free_energy = json_number(j.at("free_energy"));
    s.lambda = json_number(j.at("lambda"));
    s.fidelity = json_number(j.at("fidelity"));
    s.theta = j.at("theta").get<std::vector<double>>();
    return s;
}

}  // namespace

std::string to_string(TrainMode mode) { return mode == TrainMode::Approx ? "approx" : "true_fe"; }

TrainMode parse_train_mode(std::string_view text) {
    if (text == "approx") return TrainMode::Approx;
    if (text == "true_fe") return TrainMode::TrueFreeEnergy;
    throw std::invalid_argument("unknown training mode '" + std::string(text) + "'");
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw std::invalid_argument("bad number '" + std::string(text) + "'");
    return value;
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    const auto number = [&] {
        try {
            return parse_double(value);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("config key '" + std::string(key) + "': bad number '" + std::string(value) + "'");
        }
    };
    if (key == "model") c.model = parse_model(value);
    else if (key == "coeffs") c.coeffs = parse_coeff_mode(value);
    else if (key == "n") c.n = parse_integer<int>(key, value);
    else if (key == "beta") c.beta = number();
    else if (key == "binding") c.binding = parse_binding(value);
    else if (key == "lambda_init") c.lambda_init = number();
    else if (key == "eta_theta") c.eta_theta = number();
    else if (key == "eta_lambda") c.eta_lambda = number();
    else if (key == "theta_seed") c.theta_seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "max_iters") c.max_iters = parse_integer<int>(key, value);
    else if (key == "mode") c.mode = parse_train_mode(value);
    else if (key == "backend") c.backend = parse_backend(value);
    else if (key == "K") c.K = parse_integer<int>(key, value);
    else if (key == "out_dir") c.out_dir = std::string(value);
    else if (key == "layers") c.layers = parse_integer<int>(key, value);
    else if (key == "lambda_min") c.lambda_min = number();
    else if (key == "trajectory_seed") c.trajectory_seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "fidelity_stride") c.fidelity_stride = parse_integer<int>(key, value);
    else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(base, trim(view.substr(0, eq)), view.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

std::string format_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "model = " << to_string(c.model) << '\n'
        << "coeffs = " << to_string(c.coeffs) << '\n'
        << "n = " << c.n << '\n'
        << "beta = " << format_double(c.beta) << '\n'
        << "binding = " << to_string(c.binding) << '\n'
        << "lambda_init = " << format_double(c.lambda_init) << '\n'
        << "eta_theta = " << format_double(c.eta_theta) << '\n'
        << "eta_lambda = " << format_double(c.eta_lambda) << '\n'
        << "theta_seed = " << c.theta_seed << '\n'
        << "max_iters = " << c.max_iters << '\n'
        << "mode = " << to_string(c.mode) << '\n'
        << "backend = " << to_string(c.backend) << '\n'
        << "K = " << c.K << '\n'
        << "out_dir = " << c.out_dir << '\n'
        << "layers = " << c.layers << '\n'
        << "lambda_min = " << format_double(c.lambda_min) << '\n'
        << "trajectory_seed = " << c.trajectory_seed << '\n'
        << "fidelity_stride = " << c.fidelity_stride << '\n';
    return out.str();
}

std::string config_key(const ExperimentConfig& c) {
    std::ostringstream out;
    out << to_string(c.model) << '_' << to_string(c.coeffs) << "_N" << c.n << "_beta" << format_double(c.beta) << '_'
        << to_string(c.mode) << '_' << to_string(c.binding) << "_li" << format_double(c.lambda_init) << "_et"
        << format_double(c.eta_theta) << "_el" << format_double(c.eta_lambda) << "_s" << c.theta_seed;
    return out.str();
}

nlohmann::json to_json(const ExperimentConfig& c) {
    return {
        {"model", to_string(c.model)},
        {"coeffs", to_string(c.coeffs)},
        {"n", c.n},
        {"beta", c.beta},
        {"binding", to_string(c.binding)},
        {"lambda_init", c.lambda_init},
        {"eta_theta", c.eta_theta},
        {"eta_lambda", c.eta_lambda},
        {"theta_seed", c.theta_seed},
        {"max_iters", c.max_iters},
        {"mode", to_string(c.mode)},
        {"backend", to_string(c.backend)},
        {"K", c.K},
        {"out_dir", c.out_dir},
        {"layers", c.layers},
        {"lambda_min", c.lambda_min},
        {"trajectory_seed", c.trajectory_seed},
        {"fidelity_stride", c.fidelity_stride},
    };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.model = parse_model(j.at("model").get<std::string>());
    c.coeffs = parse_coeff_mode(j.at("coeffs").get<std::string>());
    c.n = j.at("n").get<int>();
    c.beta = j.at("beta").get<double>();
    c.binding = parse_binding(j.at("binding").get<std::string>());
    c.lambda_init = j.at("lambda_init").get<double>();
    c.eta_theta = j.at("eta_theta").get<double>();
    c.eta_lambda = j.at("eta_lambda").get<double>();
    c.theta_seed = j.at("theta_seed").get<std::uint64_t>();
    c.max_iters = j.at("max_iters").get<int>();
    c.mode = parse_train_mode(j.at("mode").get<std::string>());
    c.backend = parse_backend(j.at("backend").get<std::string>());
    c.K = j.at("K").get<int>();
    c.out_dir = j.at("out_dir").get<std::string>();
    c.layers = j.at("layers").get<int>();
    c.lambda_min = j.at("lambda_min").get<double>();
    c.trajectory_seed = j.at("trajectory_seed").get<std::uint64_t>();
    c.fidelity_stride = j.at("fidelity_stride").get<int>();
    return c;
}

nlohmann::json to_json(const RunRecord& r) {
    nlohmann::json history = {
        {"iter", nlohmann::json::array()},   {"energy", nlohmann::json::array()},
        {"entropy", nlohmann::json::array()}, {"free_energy", nlohmann::json::array()},
        {"lambda", nlohmann::json::array()},  {"fidelity", nlohmann::json::array()},
    };
    for (const auto& h : r.history) {
        history["iter"].push_back(h.iter);
        history["energy"].push_back(h.energy);
        history["entropy"].push_back(h.entropy);
        history["free_energy"].push_back(h.free_energy);
        history["lambda"].push_back(h.lambda);
        history["fidelity"].push_back(h.fidelity);  // NaN is written as null
    }
    return {
        {"config", to_json(r.config)},
        {"key", config_key(r.config)},
        {"status", r.status},
        {"message", r.message},
        {"final_lambda", r.final_lambda},
        {"final_fidelity", r.final_fidelity},
        {"final_free_energy", r.final_free_energy},
        {"best", to_json(r.best)},
        {"last", to_json(r.last)},
        {"wall_time", r.wall_time},
        {"hamiltonian", r.hamiltonian},
        {"history", history},
    };
}

RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.config = config_from_json(j.at("config"));
    r.status = j.at("status").get<std::string>();
    r.message = j.at("message").get<std::string>();
    r.final_lambda = json_number(j.at("final_lambda"));
    r.final_fidelity = json_number(j.at("final_fidelity"));
    r.final_free_energy = json_number(j.at("final_free_energy"));
    r.best = summary_from_json(j.at("best"));
    r.last = summary_from_json(j.at("last"));
    r.wall_time = j.at("wall_time").get<double>();
    r.hamiltonian = j.at("hamiltonian");
    const auto& h = j.at("history");
    const auto& iters = h.at("iter");
    for (std::size_t k = 0; k < iters.size(); ++k) {
        IterationMetrics m;
        m.iter = iters[k].get<int>();
        m.energy = json_number(h.at("energy")[k]);
        m.entropy = json_number(h.at("entropy")[k]);
        m.free_energy = json_number(h.at("free_energy")[k]);
        m.lambda = json_number(h.at("lambda")[k]);
        m.fidelity = json_number(h.at("fidelity")[k]);
        r.history.push_back(m);
    }
    return r;
}

bool same_result(const RunRecord& a, const RunRecord& b) {
    auto ja = to_json(a);
    auto jb = to_json(b);
    ja.erase("wall_time");
    jb.erase("wall_time");
    return ja.dump() == jb.dump();
}

std::string history_csv(const std::vector<IterationMetrics>& history) {
    std::string out = "iter,energy,entropy,free_energy,lambda,fidelity\n";
    for (const auto& h : history) {
        out += std::to_string(h.iter);
        for (double v : {h.energy, h.entropy, h.free_energy, h.lambda, h.fidelity}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<IterationMetrics> parse_history_csv(std::istream& in) {
    std::vector<IterationMetrics> out;
    std::string line;
    if (!std::getline(in, line)) return out;  // header
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view view(line);
        std::size_t start = 0;
        while (true) {
            const auto comma = view.find(',', start);
            cells.push_back(view.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cells.size() != 6) throw std::invalid_argument("history CSV row has " + std::to_string(cells.size()) + " cells");
        IterationMetrics m;
        m.iter = parse_integer<int>("iter", trim(cells[0]));
        m.energy = parse_double(cells[1]);
        m.entropy = parse_double(cells[2]);
        m.free_energy = parse_double(cells[3]);
        m.lambda = parse_double(cells[4]);
        m.fidelity = parse_double(cells[5]);
        out.push_back(m);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tag = std::hash<std::thread::id>{}(std::this_thread::get_id());
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(tag);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace navqt
