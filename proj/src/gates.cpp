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

#include "iontrap/gates.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace iontrap {

namespace {

constexpr double kPi = std::numbers::pi;

double pulse_eta(const SystemConfig &c, int ion, int mode) {
    const double eta = c.eta[static_cast<std::size_t>(ion)][static_cast<std::size_t>(mode)];
    if (!(eta > 0.0)) throw std::invalid_argument("ion " + std::to_string(ion) + " does not couple to the bus mode");
    return eta;
}

double debye_waller_of(const SystemConfig &c, int ion) {
    SystemConfig tmp = c;
    tmp.addressed_ion = ion;
    return tmp.debye_waller();
}

void require_aux(const SystemConfig &c) {
    if (c.n_ions() < 2) throw std::invalid_argument("a two-qubit gate needs two ions");
    if (c.ion_levels[1] < 3) throw std::invalid_argument("ion 1 needs the auxiliary level |e'> for this gate");
}

Pulse rotation(int ion, Transition tr, double angle, double axis, std::string label) {
    Pulse p;
    p.kind = PulseKind::one_qubit_rotation;
    p.ion = ion;
    p.transition = tr;
    p.angle = angle;
    p.axis = axis;
    p.label = std::move(label);
    return p;
}

// Full indices grouped by everything except (addressed ion level in {g, upper}) x modes,
// each group ordered as the reduced basis (2-level ion x modes).
std::vector<std::vector<std::size_t>> reduced_slices(const Basis &basis, int ion, Transition tr) {
    const auto j = static_cast<std::size_t>(ion);
    const int up = upper_level(tr);
    std::size_t mdim = 1;
    for (int n : basis.mode_truncations()) mdim *= static_cast<std::size_t>(n) + 1;
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const int l = basis.level_of(i, j);
        if (l != 0 && l != up) continue;
        const std::size_t modes = i % mdim;
        const std::size_t key = i - static_cast<std::size_t>(l) * basis.stride(j) - modes;
        auto &g = groups[key];
        if (g.empty()) g.assign(2 * mdim, 0);
        g[(l == up ? mdim : 0) + modes] = i;
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto &kv : groups) out.push_back(std::move(kv.second));
    return out;
}

// Applies a propagation of the reduced space to every slice of the full state.
template <class Step>
StateVector lift(const StateVector &in, int ion, Transition tr, const BasisPtr &reduced, Step &&step) {
    const auto slices = reduced_slices(*in.basis, ion, tr);
    std::vector<StateVector> parts;
    std::vector<double> scale;
    std::vector<std::size_t> which;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        CVector v(static_cast<Eigen::Index>(slices[s].size()));
        for (std::size_t r = 0; r < slices[s].size(); ++r) v[static_cast<Eigen::Index>(r)] = in.amplitudes[static_cast<Eigen::Index>(slices[s][r])];
        const double n = v.norm();
        if (n < 1e-150) continue;
        parts.push_back({reduced, v / n, Picture::interaction()});
        scale.push_back(n);
        which.push_back(s);
    }
    StateVector out = in;
    if (parts.empty()) return out;
    const std::vector<StateVector> done = step(parts);
    for (std::size_t k = 0; k < done.size(); ++k) {
        const auto &idx = slices[which[k]];
        for (std::size_t r = 0; r < idx.size(); ++r) {
            out.amplitudes[static_cast<Eigen::Index>(idx[r])] = scale[k] * done[k].amplitudes[static_cast<Eigen::Index>(r)];
        }
    }
    return out;
}

// Applies a levels x levels matrix to one ion of the state.
StateVector apply_local(const StateVector &in, int ion, const CMatrix &u) {
    const auto j = static_cast<std::size_t>(ion);
    const Basis &b = *in.basis;
    const auto levels = static_cast<std::size_t>(b.ion_levels(j));
    const std::size_t stride = b.stride(j);
    StateVector out = in;
    CVector tmp(static_cast<Eigen::Index>(levels));
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (b.level_of(i, j) != 0) continue;
        for (std::size_t l = 0; l < levels; ++l) tmp[static_cast<Eigen::Index>(l)] = in.amplitudes[static_cast<Eigen::Index>(i + l * stride)];
        const CVector r = u * tmp;
        for (std::size_t l = 0; l < levels; ++l) out.amplitudes[static_cast<Eigen::Index>(i + l * stride)] = r[static_cast<Eigen::Index>(l)];
    }
    return out;
}

SystemConfig reduced_config(const PulseSchedule &s, const Pulse &p) {
    SystemConfig c = s.system;
    c.addressed_ion = p.ion;
    c.transition = p.transition;
    c.rabi = p.rabi;
    c.detuning = p.detuning;
    c.bus_mode = s.bus_mode;
    c.laser_phase = 0.0;
    return c.addressed_subsystem();
}

std::vector<StateVector> propagate_two_qubit(const PulseSchedule &s, const Pulse &p, const std::vector<StateVector> &parts,
                                             const PropagationSettings &settings, TwoQubitModel model) {
    const SystemConfig rc = reduced_config(s, p);
    if (p.kind == PulseKind::two_qubit_lb) {
        if (model == TwoQubitModel::effective) {
            const FrameHamiltonian h = effective_jc_hamiltonian(rc, s.bus_mode);
            const FrameTransform v = FrameTransform::dressed_frame(rc);
            std::vector<StateVector> framed;
            for (const auto &x : parts) framed.push_back(to_frame(x, v, 0.0));
            auto done = evolve_batch(h, framed, 0.0, p.duration, settings);
            for (auto &x : done) x = from_frame(x, v, p.duration);
            return done;
        }
        const FrameHamiltonian h = model == TwoQubitModel::full ? full_hamiltonian(rc) : lamb_dicke_hamiltonian(rc);
        return evolve_batch(h, parts, 0.0, p.duration, settings);
    }
    // Red sideband drive.
    FrameHamiltonian h;
    switch (model) {
        case TwoQubitModel::effective:
            h = rwa_sideband_hamiltonian(rc);
            break;
        case TwoQubitModel::lamb_dicke:
            if (rc.wave == WaveType::standing_node) {
                throw std::invalid_argument("the first-order Lamb-Dicke model describes travelling waves only");
            }
            h = lamb_dicke_hamiltonian(rc);
            break;
        case TwoQubitModel::full:
            h = cz_red_sideband_hamiltonian(rc);
            break;
    }
    return evolve_batch(h, parts, 0.0, p.duration, settings);
}

std::vector<StateVector> propagate_carrier(const PulseSchedule &s, const Pulse &p, const std::vector<StateVector> &parts,
                                           const PropagationSettings &settings, TwoQubitModel model) {
    SystemConfig rc = reduced_config(s, p);
    rc.detuning = 0.0;
    if (model == TwoQubitModel::effective) {
        for (auto &e : rc.eta[0]) e = 0.0;
        rc.rabi = SystemConfig(reduced_config(s, p)).omega_prime();
    }
    const double omega_prime = rc.omega_prime();
    if (!(omega_prime > 0.0)) throw std::invalid_argument("a simulated one-qubit pulse needs a nonzero Rabi frequency");
    double angle = p.angle, axis = p.axis;
    if (angle < 0.0) {
        angle = -angle;
        axis += kPi;
    }
    // e^{i phi} sigma_+ + h.c. = cos(phi) sigma_x - sin(phi) sigma_y.
    rc.laser_phase = -axis;
    const FrameHamiltonian h = model == TwoQubitModel::lamb_dicke ? lamb_dicke_hamiltonian(rc) : full_hamiltonian(rc);
    return evolve_batch(h, parts, 0.0, angle / (2.0 * omega_prime), settings);
}

CMatrix level_phase_matrix(const Pulse &p, int levels) {
    CMatrix d = CMatrix::Identity(levels, levels);
    for (int l = 0; l < levels && l < static_cast<int>(p.level_phases.size()); ++l) d(l, l) = std::polar(1.0, p.level_phases[static_cast<std::size_t>(l)]);
    return d;
}

double bus_ground_population(const StateVector &s, int bus) {
    double p = 0.0;
    for (std::size_t i = 0; i < s.basis->dim(); ++i) {
        if (s.basis->fock_of(i, static_cast<std::size_t>(bus)) == 0) p += std::norm(s.amplitudes[static_cast<Eigen::Index>(i)]);
    }
    return p;
}

CMatrix computational_block(const PulseSchedule &schedule, const std::vector<StateVector> &outputs) {
    const BasisPtr &b = outputs.front().basis;
    std::vector<int> fock(b->num_modes(), 0);
    std::vector<int> levels(b->num_ions(), 0);
    CMatrix m(4, 4);
    for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) {
            levels[0] = row >> 1;
            levels[1] = row & 1;
            m(row, col) = outputs[static_cast<std::size_t>(col)].amplitudes[static_cast<Eigen::Index>(b->index(levels, fock))];
        }
    }
    (void)schedule;
    return m;
}

}  // namespace

std::string to_string(PulseKind k) {
    switch (k) {
        case PulseKind::two_qubit_lb:
            return "two_qubit_lb";
        case PulseKind::two_qubit_cz_sideband:
            return "two_qubit_cz_sideband";
        case PulseKind::one_qubit_rotation:
            return "one_qubit_rotation";
    }
    return "unknown";
}

PulseKind parse_pulse_kind(const std::string &s) {
    if (s == "two_qubit_lb") return PulseKind::two_qubit_lb;
    if (s == "two_qubit_cz_sideband") return PulseKind::two_qubit_cz_sideband;
    if (s == "one_qubit_rotation") return PulseKind::one_qubit_rotation;
    throw std::invalid_argument("unknown pulse kind '" + s + "'");
}

std::string to_string(Scheme s) { return s == Scheme::lightshift ? "lb" : "cz"; }

Scheme parse_scheme(const std::string &s) {
    if (s == "lb" || s == "lightshift") return Scheme::lightshift;
    if (s == "cz" || s == "cirac_zoller") return Scheme::cirac_zoller;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected lb or cz)");
}

std::string to_string(TwoQubitModel m) {
    switch (m) {
        case TwoQubitModel::effective:
            return "effective";
        case TwoQubitModel::lamb_dicke:
            return "lamb_dicke";
        case TwoQubitModel::full:
            return "full";
    }
    return "unknown";
}

TwoQubitModel parse_two_qubit_model(const std::string &s) {
    if (s == "effective" || s == "idealized" || s == "ideal") return TwoQubitModel::effective;
    if (s == "lamb_dicke" || s == "lamb-dicke") return TwoQubitModel::lamb_dicke;
    if (s == "full") return TwoQubitModel::full;
    throw std::invalid_argument("unknown fidelity level '" + s + "' (expected idealized, lamb_dicke or full)");
}

std::size_t PulseSchedule::two_qubit_pulse_count() const {
    std::size_t n = 0;
    for (const auto &p : pulses) n += p.kind != PulseKind::one_qubit_rotation;
    return n;
}

PulseSchedule lb_cnot_schedule(const SystemConfig &config, int mode) {
    config.validate();
    require_aux(config);
    if (mode < 0 || static_cast<std::size_t>(mode) >= config.n_modes()) throw std::invalid_argument("bus mode out of range");
    const double nu = config.mode_freqs[static_cast<std::size_t>(mode)];
    const double eta0 = pulse_eta(config, 0, mode), eta1 = pulse_eta(config, 1, mode);
    const double tau0 = kPi / (nu * eta0), tau1 = kPi / (nu * eta1);
    // Phase picked up by |-> during a pi pulse on ion j: nu tau_j / 2.
    const double phi0 = nu * tau0 / 2.0, phi1 = nu * tau1 / 2.0;

    PulseSchedule s;
    s.scheme = Scheme::lightshift;
    s.control_ion = 1;
    s.target_ion = 0;
    s.bus_mode = mode;
    s.system = config;

    auto swap = [&](int ion, Transition tr, double duration, std::string label) {
        Pulse p;
        p.kind = PulseKind::two_qubit_lb;
        p.ion = ion;
        p.transition = tr;
        p.duration = duration;
        p.rabi = (nu / 2.0) / debye_waller_of(config, ion);
        p.label = std::move(label);
        return p;
    };
    Pulse r1 = rotation(1, Transition::g_eaux, kPi / 2.0, kPi / 2.0, "ion 1 g-e' pi/2");
    r1.rabi = (nu / 2.0) / debye_waller_of(config, 1);
    Pulse r2 = rotation(1, Transition::g_eaux, -kPi / 2.0, kPi / 2.0, "ion 1 g-e' -pi/2 with phase cancellation");
    r2.rabi = r1.rabi;
    r2.level_phases = {-2.0 * phi1, kPi, -2.0 * phi1};
    Pulse r3 = rotation(0, Transition::g_e, -2.0 * phi0, 0.0, "ion 0 phase removal exp(i phi sigma_x)");
    r3.rabi = (nu / 2.0) / debye_waller_of(config, 0);

    s.pulses = {swap(0, Transition::g_e, tau0, "ion 0 SWAP (pi)"), r1,
                swap(1, Transition::g_eaux, 2.0 * tau1, "ion 1 g-e' 2pi"), r2,
                swap(0, Transition::g_e, tau0, "ion 0 SWAP (pi)"), r3};
    return s;
}

PulseSchedule cz_cnot_schedule(const SystemConfig &config, int mode, WaveType wave) {
    config.validate();
    require_aux(config);
    if (mode < 0 || static_cast<std::size_t>(mode) >= config.n_modes()) throw std::invalid_argument("bus mode out of range");
    if (!(config.rabi > 0.0)) throw std::invalid_argument("the sideband pulses need a nonzero Rabi frequency");
    const double nu = config.mode_freqs[static_cast<std::size_t>(mode)];
    const double g0 = config.rabi * debye_waller_of(config, 0) * pulse_eta(config, 0, mode);
    const double g1 = config.rabi * debye_waller_of(config, 1) * pulse_eta(config, 1, mode);

    PulseSchedule s;
    s.scheme = Scheme::cirac_zoller;
    s.control_ion = 0;
    s.target_ion = 1;
    s.bus_mode = mode;
    s.system = config;
    s.system.wave = wave;

    auto sideband = [&](int ion, Transition tr, double duration, std::string label) {
        Pulse p;
        p.kind = PulseKind::two_qubit_cz_sideband;
        p.ion = ion;
        p.transition = tr;
        p.duration = duration;
        p.rabi = config.rabi;
        p.detuning = -nu;
        p.label = std::move(label);
        return p;
    };
    Pulse ry = rotation(1, Transition::g_e, kPi / 2.0, kPi / 2.0, "ion 1 pi/2");
    ry.rabi = config.rabi;
    Pulse ry_back = rotation(1, Transition::g_e, -kPi / 2.0, kPi / 2.0, "ion 1 -pi/2");
    ry_back.rabi = config.rabi;
    s.pulses = {ry, sideband(0, Transition::g_e, kPi / (2.0 * g0), "ion 0 red sideband pi"),
                sideband(1, Transition::g_eaux, kPi / g1, "ion 1 g-e' red sideband 2pi"),
                sideband(0, Transition::g_e, kPi / (2.0 * g0), "ion 0 red sideband pi"), ry_back};
    return s;
}

CMatrix one_qubit_unitary(const Pulse &pulse, int levels) {
    const int up = upper_level(pulse.transition);
    if (up >= levels) throw std::invalid_argument("pulse transition needs the auxiliary level");
    const double c = std::cos(pulse.angle / 2.0), s = std::sin(pulse.angle / 2.0);
    // exp(-i a/2 n.sigma) with n = (cos axis, sin axis, 0); sigma_y = -i|u><g| + i|g><u|.
    const cplx n_plus = std::polar(1.0, -pulse.axis);  // <u|n.sigma|g>
    CMatrix u = CMatrix::Identity(levels, levels);
    u(0, 0) = c;
    u(up, up) = c;
    u(up, 0) = cplx(0.0, -s) * n_plus;
    u(0, up) = cplx(0.0, -s) * std::conj(n_plus);
    return level_phase_matrix(pulse, levels) * u;
}

StateVector apply_pulse(const PulseSchedule &schedule, const Pulse &pulse, const StateVector &input,
                        const PropagationSettings &settings, const RunOptions &options) {
    if (pulse.ion < 0 || static_cast<std::size_t>(pulse.ion) >= input.basis->num_ions()) {
        throw std::invalid_argument("pulse ion out of range");
    }
    const int levels = input.basis->ion_levels(static_cast<std::size_t>(pulse.ion));
    if (pulse.kind == PulseKind::one_qubit_rotation) {
        if (pulse.idealized && !options.simulate_one_qubit) return apply_local(input, pulse.ion, one_qubit_unitary(pulse, levels));
        const BasisPtr reduced = reduced_config(schedule, pulse).make_basis();
        StateVector out = lift(input, pulse.ion, pulse.transition, reduced, [&](const std::vector<StateVector> &parts) {
            return propagate_carrier(schedule, pulse, parts, settings, options.model);
        });
        return apply_local(out, pulse.ion, level_phase_matrix(pulse, levels));
    }
    if (!(pulse.duration > 0.0)) throw std::invalid_argument("two-qubit pulses need a positive duration");
    const BasisPtr reduced = reduced_config(schedule, pulse).make_basis();
    return lift(input, pulse.ion, pulse.transition, reduced, [&](const std::vector<StateVector> &parts) {
        return propagate_two_qubit(schedule, pulse, parts, settings, options.model);
    });
}

StateVector run_schedule(const PulseSchedule &schedule, const StateVector &input, const PropagationSettings &settings,
                         const RunOptions &options) {
    if (!(*input.basis == *schedule.system.make_basis())) throw std::invalid_argument("input state does not match the schedule's system");
    if (!(input.picture == Picture::interaction())) throw std::invalid_argument("schedules run in the interaction picture");
    if (std::abs(input.norm() - 1.0) > settings.norm_tol) throw std::invalid_argument("input state is not normalized");
    if (options.require_ground_bus && 1.0 - bus_ground_population(input, schedule.bus_mode) > 1e-12) {
        throw std::invalid_argument("the bus mode must start in |0>");
    }
    StateVector s = input;
    const std::size_t n = options.stop_after == 0 ? schedule.pulses.size() : std::min(options.stop_after, schedule.pulses.size());
    for (std::size_t k = 0; k < n; ++k) s = apply_pulse(schedule, schedule.pulses[k], s, settings, options);
    return s;
}

CMatrix ideal_cnot(const PulseSchedule &schedule) {
    CMatrix c = CMatrix::Zero(4, 4);
    for (int in = 0; in < 4; ++in) {
        int lv[2] = {in >> 1, in & 1};
        if (lv[schedule.control_ion] == 1) lv[schedule.target_ion] ^= 1;
        c(lv[0] * 2 + lv[1], in) = 1.0;
    }
    return c;
}

MakhlinInvariants makhlin_invariants(const CMatrix &u) {
    if (u.rows() != 4 || u.cols() != 4) throw std::invalid_argument("Makhlin invariants need a 4x4 matrix");
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    CMatrix q(4, 4);
    q << 1, 0, 0, i, 0, i, 1, 0, 0, i, -1, 0, 1, 0, 0, -i;
    q *= s;
    const CMatrix ub = q.adjoint() * u * q;
    const CMatrix m = ub.transpose() * ub;
    const cplx det = u.determinant();
    if (std::abs(det) < 1e-12) throw NumericalError("gate block is singular; invariants undefined");
    const cplx tr = m.trace();
    const cplx tr2 = (m * m).trace();
    return {tr * tr / (16.0 * det), ((tr * tr - tr2) / (4.0 * det)).real()};
}

TruthTable truth_table(const PulseSchedule &schedule, const PropagationSettings &settings, const RunOptions &options,
                       bool intermediate) {
    const BasisPtr basis = schedule.system.make_basis();
    const CMatrix ideal = ideal_cnot(schedule);
    std::vector<int> fock(basis->num_modes(), 0);
    std::vector<int> levels(basis->num_ions(), 0);
    TruthTable t;
    t.scheme = schedule.scheme;
    std::vector<StateVector> outputs;
    for (int in = 0; in < 4; ++in) {
        levels[0] = in >> 1;
        levels[1] = in & 1;
        const StateVector out = run_schedule(schedule, basis_state(basis, levels, fock), settings, options);
        outputs.push_back(out);
        int target_row = 0;
        for (int r = 0; r < 4; ++r) {
            if (ideal(r, in) != cplx(0.0)) target_row = r;
        }
        std::vector<int> want = levels;
        want[0] = target_row >> 1;
        want[1] = target_row & 1;
        TruthRow row;
        row.control = levels[static_cast<std::size_t>(schedule.control_ion)];
        row.target = levels[static_cast<std::size_t>(schedule.target_ion)];
        row.expected_control = want[static_cast<std::size_t>(schedule.control_ion)];
        row.expected_target = want[static_cast<std::size_t>(schedule.target_ion)];
        row.fidelity = std::norm(out.amplitudes[static_cast<Eigen::Index>(basis->index(want, fock))]);
        row.bus_ground = bus_ground_population(out, schedule.bus_mode);
        row.norm_deviation = std::abs(out.norm() - 1.0);
        t.rows.push_back(row);
    }
    t.block = computational_block(schedule, outputs);
    const cplx overlap = (ideal.adjoint() * t.block).trace();
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
    t.unitary_distance = (t.block - phase * ideal).norm();
    t.min_fidelity = 1.0;
    for (const auto &r : t.rows) t.min_fidelity = std::min(t.min_fidelity, r.fidelity);

    if (intermediate && schedule.pulses.size() >= 5) {
        RunOptions five = options;
        five.stop_after = 5;
        std::vector<StateVector> mids;
        for (int in = 0; in < 4; ++in) {
            levels[0] = in >> 1;
            levels[1] = in & 1;
            mids.push_back(run_schedule(schedule, basis_state(basis, levels, fock), settings, five));
        }
        const MakhlinInvariants mk = makhlin_invariants(computational_block(schedule, mids));
        t.has_intermediate = true;
        t.makhlin_g1 = mk.g1;
        t.makhlin_g2 = mk.g2;
    }
    return t;
}

namespace {

nlohmann::json config_to_json(const SystemConfig &c) {
    return {{"mode_freqs", c.mode_freqs}, {"eta", c.eta},
            {"rabi", c.rabi},             {"detuning", c.detuning},
            {"wave", to_string(c.wave)},  {"addressed_ion", c.addressed_ion},
            {"transition", to_string(c.transition)}, {"bus_mode", c.bus_mode},
            {"ion_levels", c.ion_levels}, {"fock", c.fock},
            {"laser_phase", c.laser_phase}};
}

SystemConfig config_from_json(const nlohmann::json &j) {
    SystemConfig c;
    c.mode_freqs = j.at("mode_freqs").get<std::vector<double>>();
    c.eta = j.at("eta").get<std::vector<std::vector<double>>>();
    c.rabi = j.at("rabi").get<double>();
    c.detuning = j.at("detuning").get<double>();
    c.wave = parse_wave_type(j.at("wave").get<std::string>());
    c.addressed_ion = j.at("addressed_ion").get<int>();
    c.transition = parse_transition(j.at("transition").get<std::string>());
    c.bus_mode = j.at("bus_mode").get<int>();
    c.ion_levels = j.at("ion_levels").get<std::vector<int>>();
    c.fock = j.at("fock").get<std::vector<int>>();
    c.laser_phase = j.at("laser_phase").get<double>();
    c.validate();
    return c;
}

}  // namespace

std::string schedule_to_json(const PulseSchedule &schedule) {
    nlohmann::json pulses = nlohmann::json::array();
    for (const auto &p : schedule.pulses) {
        pulses.push_back({{"kind", to_string(p.kind)},
                          {"ion", p.ion},
                          {"transition", to_string(p.transition)},
                          {"duration", p.duration},
                          {"rabi", p.rabi},
                          {"detuning", p.detuning},
                          {"angle", p.angle},
                          {"axis", p.axis},
                          {"level_phases", p.level_phases},
                          {"idealized", p.idealized},
                          {"label", p.label}});
    }
    nlohmann::json doc = {{"scheme", to_string(schedule.scheme)},
                          {"control_ion", schedule.control_ion},
                          {"target_ion", schedule.target_ion},
                          {"bus_mode", schedule.bus_mode},
                          {"units", "frequencies in nu_1, times in 1/nu_1, phases in rad"},
                          {"system", config_to_json(schedule.system)},
                          {"pulses", pulses}};
    return doc.dump(2);
}

PulseSchedule schedule_from_json(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("schedule JSON does not parse: ") + e.what());
    }
    try {
        PulseSchedule s;
        s.scheme = parse_scheme(doc.at("scheme").get<std::string>());
        s.control_ion = doc.at("control_ion").get<int>();
        s.target_ion = doc.at("target_ion").get<int>();
        s.bus_mode = doc.at("bus_mode").get<int>();
        s.system = config_from_json(doc.at("system"));
        for (const auto &jp : doc.at("pulses")) {
            Pulse p;
            p.kind = parse_pulse_kind(jp.at("kind").get<std::string>());
            p.ion = jp.at("ion").get<int>();
            p.transition = parse_transition(jp.at("transition").get<std::string>());
            p.duration = jp.at("duration").get<double>();
            p.rabi = jp.at("rabi").get<double>();
            p.detuning = jp.at("detuning").get<double>();
            p.angle = jp.at("angle").get<double>();
            p.axis = jp.at("axis").get<double>();
            p.level_phases = jp.at("level_phases").get<std::vector<double>>();
            p.idealized = jp.at("idealized").get<bool>();
            p.label = jp.at("label").get<std::string>();
            s.pulses.push_back(p);
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("schedule JSON is missing a field: ") + e.what());
    }
}

}  // namespace iontrap
