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

#include "iontrap/cli/commands.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "iontrap/csv.hpp"
#include "iontrap/gates.hpp"
#include "iontrap/kernels.hpp"
#include "iontrap/modespectrum.hpp"
#include "json.hpp"

namespace iontrap::cli {

namespace {

enum class Format { csv, json };

Format output_format(const RunConfig &config) {
    const std::string &f = config.get("format");
    if (f == "csv") return Format::csv;
    if (f == "json") return Format::json;
    throw UsageError("format must be csv or json, got '" + f + "'");
}

struct Label {
    bool dressed;  // +/- rather than g/e
    int ion;       // dressed: +1 / -1; bare: level index
    int fock;
};

Label parse_label(const std::string &s) {
    if (s.size() < 2) throw UsageError("initial state label must look like +0, -1, g0 or e1");
    Label l{};
    switch (s[0]) {
        case '+': l = {true, +1, 0}; break;
        case '-': l = {true, -1, 0}; break;
        case 'g': l = {false, 0, 0}; break;
        case 'e': l = {false, 1, 0}; break;
        default: throw UsageError("initial state label must start with +, -, g or e");
    }
    const std::string digits = s.substr(1);
    if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 3)
        throw UsageError("bad Fock number in label '" + s + "'");
    l.fock = std::stoi(digits);
    return l;
}

// Bus-mode marginals: P(g,n), P(e,n), P(+,n), P(-,n) for n = 0, 1.
std::vector<double> populations(const Basis &basis, const CVector &psi, std::size_t bus) {
    std::vector<double> p(8, 0.0);
    const double s = 1.0 / std::numbers::sqrt2;
    const std::size_t ion_stride = basis.stride(0);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        if (basis.level_of(i, 0) != 0) continue;
        const int n = basis.fock_of(i, bus);
        if (n > 1) continue;
        const cplx g = psi[static_cast<Eigen::Index>(i)];
        const cplx e = psi[static_cast<Eigen::Index>(i + ion_stride)];
        const auto k = static_cast<std::size_t>(n);
        p[0 + 2 * k] += std::norm(g);
        p[1 + 2 * k] += std::norm(e);
        p[4 + 2 * k] += std::norm(s * (g + e));
        p[5 + 2 * k] += std::norm(s * (g - e));
    }
    return p;
}

void emit(std::ostream &out, Format f, const std::vector<std::string> &header, const std::vector<std::string> &columns,
          const std::vector<std::vector<double>> &rows, const nlohmann::json &summary = nlohmann::json::object()) {
    if (f == Format::csv) {
        write_csv_comments(out, header);
        for (const auto &[k, v] : summary.items()) write_csv_comments(out, {k + ": " + v.dump()});
        out << csv_row(columns);
        for (const auto &r : rows) {
            std::vector<std::string> cells;
            for (double x : r) cells.push_back(format_double(x));
            out << csv_row(cells);
        }
        return;
    }
    nlohmann::json j;
    j["header"] = header;
    j["summary"] = summary;
    j["columns"] = columns;
    j["rows"] = rows;
    out << j.dump(2) << "\n";
}

template <class F>
auto usage_guard(F &&f) {
    try {
        return f();
    } catch (const UsageError &) {
        throw;
    } catch (const NumericalError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

}  // namespace

std::vector<std::string> output_header(const std::string &command, const RunConfig &config) {
    std::vector<std::string> h{"iontrap " + command, kUnitsLine,
                               "kernels: " + std::string(simd::isa_name(simd::active_isa()))};
    for (const auto &line : config.resolved_lines()) h.push_back("config: " + line);
    return h;
}

int cmd_simulate(const RunConfig &config, std::ostream &out) {
    const Format fmt = output_format(config);
    const SystemConfig trap = config.trap();
    const FidelitySpec spec = config.fidelity_spec();
    const PropagationSettings settings = config.settings();
    const Label label = parse_label(config.get("initial"));
    const SystemConfig sys = usage_guard([&] { return fidelity_system(spec, trap, config.omega_prime(trap)); });
    const std::string &ham = config.get("hamiltonian");
    FrameHamiltonian h;
    if (ham == "full")
        h = full_hamiltonian(sys);
    else if (ham == "lamb_dicke")
        h = usage_guard([&] { return lamb_dicke_hamiltonian(sys); });
    else
        throw UsageError("hamiltonian must be full or lamb_dicke");

    const auto bus = static_cast<std::size_t>(sys.bus_mode);
    if (label.fock > sys.fock[bus]) throw UsageError("initial Fock number exceeds the truncation");
    std::vector<int> fock(sys.n_modes(), 0);
    fock[bus] = label.fock;
    const CVector ion = label.dressed ? dressed_ket(2, label.ion) : ion_ket(2, static_cast<Level>(label.ion));
    const StateVector psi0 = product_state(h.basis, {ion}, fock);

    double t_final = 0.0;
    if (config.get("t_final") == "auto") {
        t_final = ideal_swap_time(spec, sys);
        if (t_final == 0.0) throw UsageError("t_final=auto needs omega_prime > 0");
    } else {
        t_final = config.get_double("t_final");
        if (!(t_final > 0.0)) throw UsageError("t_final must be > 0");
    }
    const long samples = config.get_int("samples");
    if (samples < 2 || samples > 10000000) throw UsageError("samples must lie in 2..1e7");

    std::vector<std::vector<double>> rows;
    auto record = [&](double t, const CVector &psi) {
        std::vector<double> r{t};
        for (double p : populations(*h.basis, psi, bus)) r.push_back(p);
        r.push_back(psi.norm());
        rows.push_back(std::move(r));
    };
    if (spec.engine == FidelityEngine::spectral) {
        const SpectralPropagator sp(h);
        for (long k = 0; k < samples; ++k) {
            const double t = t_final * static_cast<double>(k) / static_cast<double>(samples - 1);
            const CVector psi = sp.evolve(psi0.amplitudes, 0.0, t);
            if (std::abs(psi.norm() - 1.0) > settings.norm_tol)
                throw NumericalError("norm drift exceeds tolerance at t=" + format_double(t));
            StateVector{h.basis, psi, h.picture}.check_truncation_leak(settings.leak_bound);
            record(t, psi);
        }
    } else {
        const double step = settings.resolved_step(h.nu_max);
        const auto stride = std::max<long>(1, std::lround(t_final / static_cast<double>(samples - 1) / step));
        long k = 0;
        evolve_observed(h, psi0, 0.0, t_final, settings, [&](double t, const StateVector &psi) {
            if (k++ % stride == 0 || t == t_final) record(t, psi.amplitudes);
        });
    }
    emit(out, fmt, output_header("simulate", config),
         {"t", "P_g0", "P_e0", "P_g1", "P_e1", "P_plus0", "P_minus0", "P_plus1", "P_minus1", "norm"}, rows,
         {{"omega_prime", sys.omega_prime()}, {"t_final", t_final}, {"hamiltonian", ham}});
    return kExitOk;
}

int cmd_sweep(const RunConfig &config, std::ostream &out) {
    const Format fmt = output_format(config);
    const SystemConfig trap = config.trap();
    const FidelitySpec spec = config.fidelity_spec();
    const PropagationSettings settings = config.settings();
    const SweepOptions options = config.sweep_options();
    const auto grid = config.grid(trap.mode_freqs[static_cast<std::size_t>(trap.bus_mode)]);
    const SweepResult r = usage_guard([&] { return sweep(spec, grid, trap, settings, options); });

    auto header = output_header("sweep", config);
    auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string("none"); };
    header.push_back("threshold_omega: " + opt(r.threshold_omega));
    header.push_back("peak_omega: " + opt(r.peak_omega));
    header.push_back("peak_fidelity: " + opt(r.peak_fidelity));
    header.push_back("width: " + opt(r.width()));
    header.push_back("failures: " + std::to_string(r.failures()));
    if (fmt == Format::csv)
        write_sweep_csv(out, r, header);
    else
        out << sweep_to_json(r, header);
    return r.failures() ? kExitNumerical : kExitOk;
}

int cmd_truth_table(const RunConfig &config, std::ostream &out) {
    const Format fmt = output_format(config);
    SystemConfig trap = config.trap(true);
    const FidelityScheme scheme = config.scheme();
    const PropagationSettings settings = config.settings();
    RunOptions options;
    options.model = config.model();
    const bool intermediate = config.get_bool("intermediate");
    const PulseSchedule schedule = usage_guard([&] {
        if (scheme == FidelityScheme::lightshift) return lb_cnot_schedule(trap, 0);
        trap.set_omega_prime(config.omega_prime(trap));
        return cz_cnot_schedule(trap, 0,
                                scheme == FidelityScheme::cz_standing ? WaveType::standing_node : WaveType::travelling);
    });
    const TruthTable t = usage_guard([&] { return truth_table(schedule, settings, options, intermediate); });

    nlohmann::json summary{{"scheme", to_string(t.scheme)},
                           {"model", to_string(options.model)},
                           {"min_fidelity", t.min_fidelity},
                           {"unitary_distance", t.unitary_distance}};
    if (t.has_intermediate) {
        summary["makhlin_g1_re"] = t.makhlin_g1.real();
        summary["makhlin_g1_im"] = t.makhlin_g1.imag();
        summary["makhlin_g2"] = t.makhlin_g2;
    }
    std::vector<std::vector<double>> rows;
    for (const auto &r : t.rows)
        rows.push_back({double(r.control), double(r.target), double(r.expected_control), double(r.expected_target),
                        r.fidelity, r.bus_ground, r.norm_deviation});
    auto header = output_header("truth-table", config);
    header.push_back("control ion: " + std::to_string(schedule.control_ion) +
                     ", target ion: " + std::to_string(schedule.target_ion) + "; levels 0 = g, 1 = e");
    emit(out, fmt, header,
         {"control_in", "target_in", "control_expected", "target_expected", "fidelity", "bus_ground", "norm_deviation"},
         rows, summary);
    return kExitOk;
}

int cmd_modes(const RunConfig &config, std::ostream &out) {
    const Format fmt = output_format(config);
    const double budget = config.get_double("budget");
    const ModeTable t = usage_guard([&] { return mode_table(budget); });
    const auto header = output_header("modes", config);
    out << (fmt == Format::csv ? mode_table_csv(t, header) : mode_table_json(t, header));
    return kExitOk;
}

}  // namespace iontrap::cli
