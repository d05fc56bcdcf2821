// Copyright 2026 The iontrap Authors
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

#include "iontrap/cli/run_config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "iontrap/kernels.hpp"

namespace iontrap::cli {

namespace {

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
        throw UsageError("'" + key + "' expects a number, got '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

template <class F>
auto as_usage(F &&f) {
    try {
        return f();
    } catch (const UsageError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

}  // namespace

const std::map<std::string, std::string> &RunConfig::defaults() {
    static const std::map<std::string, std::string> d{
        {"budget", "0.01"},
        {"deterministic", "true"},
        {"engine", "spectral"},
        {"eta", "0.1"},
        {"fock", "12"},
        {"format", "csv"},
        {"grid", "default"},
        {"hamiltonian", "full"},
        {"initial", "+0"},
        {"intermediate", "false"},
        {"isa", "auto"},
        {"leak_bound", "1e-06"},
        {"method", "corotating_midpoint"},
        {"model", "effective"},
        {"modes", "all"},
        {"n_ions", "2"},
        {"norm_tol", "1e-09"},
        {"omega_prime", "auto"},
        {"output", "-"},
        {"samples", "400"},
        {"scheme", "lightshift"},
        {"step", "auto"},
        {"t_final", "auto"},
        {"threshold", "0.99"},
        {"wave_type", "travelling"},
        {"window_factor", "1.25"},
        {"workers", "0"},
    };
    return d;
}

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::load_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    load_text(ss.str(), path);
}

void RunConfig::load_text(const std::string &text, const std::string &origin) {
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw UsageError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second) throw UsageError(where + "key '" + key + "' set twice");
        try {
            set(key, trim(line.substr(eq + 1)));
        } catch (const UsageError &e) {
            throw UsageError(where + e.what());
        }
    }
}

void RunConfig::set(const std::string &key, const std::string &value) {
    if (!defaults().count(key)) throw UsageError("unknown config key '" + key + "'");
    if (value.empty()) throw UsageError("empty value for '" + key + "'");
    values_[key] = value;
}

void RunConfig::set_assignment(const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string &RunConfig::get(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("unknown config key '" + key + "'");
    return it->second;
}

double RunConfig::get_double(const std::string &key) const { return parse_number(key, get(key)); }

long RunConfig::get_int(const std::string &key) const {
    const double v = get_double(key);
    if (v != std::floor(v) || std::abs(v) > 1e15) throw UsageError("'" + key + "' expects an integer");
    return static_cast<long>(v);
}

bool RunConfig::get_bool(const std::string &key) const {
    const std::string &v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("'" + key + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> RunConfig::resolved_lines() const {
    std::vector<std::string> out;
    for (const auto &[k, v] : values_) out.push_back(k + "=" + v);
    return out;
}

FidelityScheme RunConfig::scheme() const { return as_usage([&] { return parse_fidelity_scheme(get("scheme")); }); }

double RunConfig::eta() const {
    const double v = get_double("eta");
    if (!(v > 0.0)) throw UsageError("eta must be > 0");
    return v;
}

SystemConfig RunConfig::trap(bool aux_level) const {
    const long ions = get_int("n_ions");
    const long fock = get_int("fock");
    if (fock < 1 || fock > 200) throw UsageError("fock must lie in 1..200");
    SystemConfig c;
    if (ions == 1) {
        if (aux_level) throw UsageError("this command needs n_ions=2");
        c = single_ion_trap(eta(), static_cast<int>(fock));
    } else if (ions == 2) {
        c = two_ion_trap(eta(), static_cast<int>(fock), aux_level ? 3 : 2);
    } else {
        throw UsageError("n_ions must be 1 or 2");
    }
    c.wave = as_usage([&] { return parse_wave_type(get("wave_type")); });
    return c;
}

double RunConfig::omega_prime(const SystemConfig &trap) const {
    const std::string &v = get("omega_prime");
    const double nu_q = trap.mode_freqs[static_cast<std::size_t>(trap.bus_mode)];
    if (v == "resonant") return nu_q / 2.0;
    if (v == "auto") return scheme() == FidelityScheme::lightshift ? nu_q / 2.0 : 0.01;
    const double op = get_double("omega_prime");
    if (op < 0.0) throw UsageError("omega_prime must be >= 0");
    return op;
}

PropagationSettings RunConfig::settings() const {
    PropagationSettings s;
    if (get("step") != "auto") {
        s.step = get_double("step");
        if (!(s.step > 0.0)) throw UsageError("step must be > 0 or auto");
    }
    s.method = as_usage([&] { return parse_integration_method(get("method")); });
    s.norm_tol = get_double("norm_tol");
    s.leak_bound = get_double("leak_bound");
    as_usage([&] {
        s.validate();
        return 0;
    });
    return s;
}

FidelitySpec RunConfig::fidelity_spec() const {
    FidelitySpec f;
    f.scheme = scheme();
    f.eta = eta();
    f.window_factor = get_double("window_factor");
    f.modes = as_usage([&] { return parse_mode_set(get("modes")); });
    f.engine = as_usage([&] { return parse_fidelity_engine(get("engine")); });
    as_usage([&] {
        f.validate();
        return 0;
    });
    return f;
}

SweepOptions RunConfig::sweep_options() const {
    SweepOptions o;
    const long w = get_int("workers");
    if (w < 0 || w > 4096) throw UsageError("workers must lie in 0..4096");
    o.workers = static_cast<unsigned>(w);
    o.threshold = get_double("threshold");
    if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw UsageError("threshold must lie in (0, 1)");
    return o;
}

std::vector<double> RunConfig::grid(double nu_q) const {
    const std::string &g = get("grid");
    if (g == "default") return default_grid(scheme(), nu_q);
    const auto colon = g.find(':');
    const std::string kind = g.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string() : g.substr(colon + 1);
    std::vector<double> out;
    if (kind == "list") {
        for (const auto &item : split(rest, ',')) out.push_back(parse_number("grid", item));
    } else if (kind == "linear" || kind == "log") {
        const auto parts = split(rest, ':');
        if (parts.size() != 3) throw UsageError("grid '" + g + "' expects " + kind + ":lo:hi:n");
        const double lo = parse_number("grid", parts[0]), hi = parse_number("grid", parts[1]);
        const double n = parse_number("grid", parts[2]);
        if (n < 1 || n != std::floor(n) || n > 1e6) throw UsageError("grid point count must be a positive integer");
        out = as_usage([&] {
            return kind == "linear" ? linear_grid(lo, hi, static_cast<std::size_t>(n))
                                    : log_grid(lo, hi, static_cast<std::size_t>(n));
        });
    } else {
        throw UsageError("grid must be default, linear:lo:hi:n, log:lo:hi:n or list:a,b,...");
    }
    if (out.empty()) throw UsageError("sweep grid is empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 0.0) throw UsageError("grid values must be >= 0");
        if (i > 0 && !(out[i] > out[i - 1])) throw UsageError("grid must be strictly increasing");
    }
    return out;
}

TwoQubitModel RunConfig::model() const { return as_usage([&] { return parse_two_qubit_model(get("model")); }); }

}  // namespace iontrap::cli
