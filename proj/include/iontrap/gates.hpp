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

#pragma once

// Pulse schedules for two-ion C-NOT gates and their execution.
//
// Two-qubit pulses act on one ion and the modes; the other ion is a spectator,
// so each pulse is propagated on the reduced space (addressed transition x
// modes) and lifted slice by slice. Each pulse starts its own clock at t = 0.

#include <string>
#include <vector>

#include "iontrap/hamiltonians.hpp"
#include "iontrap/propagator.hpp"

namespace iontrap {

enum class PulseKind { two_qubit_lb, two_qubit_cz_sideband, one_qubit_rotation };
enum class Scheme { lightshift, cirac_zoller };

std::string to_string(PulseKind k);
PulseKind parse_pulse_kind(const std::string &s);
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string &s);

struct Pulse {
    PulseKind kind = PulseKind::one_qubit_rotation;
    int ion = 0;
    Transition transition = Transition::g_e;
    double duration = 0.0;  // two-qubit pulses; one-qubit pulses when simulated
    double rabi = 0.0;      // bare Omega driving the pulse
    double detuning = 0.0;
    // One-qubit rotation exp(-i angle/2 (cos axis sigma_x + sin axis sigma_y)) on
    // the transition, followed by exp(i level_phases[l]) on level l.
    double angle = 0.0;
    double axis = 0.0;
    std::vector<double> level_phases;
    bool idealized = true;  // one-qubit pulses: exact unitary instead of carrier drive
    std::string label;

    bool operator==(const Pulse &) const = default;
};

struct PulseSchedule {
    Scheme scheme = Scheme::lightshift;
    int control_ion = 0;
    int target_ion = 1;
    int bus_mode = 0;
    SystemConfig system;
    std::vector<Pulse> pulses;

    std::size_t two_qubit_pulse_count() const;
};

/// Six pulses; ion 1 (index 1) needs |e'>. The result is a C-NOT with ion 1
/// as control (|e> active) and ion 0 as target.
PulseSchedule lb_cnot_schedule(const SystemConfig &config, int mode);

/// Five pulses at the config's Omega on the red sideband of mode; ion 0 is
/// the control, ion 1 (with |e'>) the target.
PulseSchedule cz_cnot_schedule(const SystemConfig &config, int mode, WaveType wave);

enum class TwoQubitModel {
    effective,   // resonant Jaynes-Cummings / RWA sideband coupling only
    lamb_dicke,  // first order in eta, all off-resonant terms
    full,        // all orders in eta, all off-resonant terms
};

std::string to_string(TwoQubitModel m);
TwoQubitModel parse_two_qubit_model(const std::string &s);

struct RunOptions {
    TwoQubitModel model = TwoQubitModel::effective;
    bool simulate_one_qubit = false;  // drive every one-qubit pulse on the carrier
    bool require_ground_bus = true;   // reject inputs with bus phonons
    std::size_t stop_after = 0;       // run only the first n pulses (0 = all)
};

/// Applies the pulses in order. The input must be in the interaction picture.
StateVector run_schedule(const PulseSchedule &schedule, const StateVector &input, const PropagationSettings &settings,
                         const RunOptions &options = {});

/// Applies a single pulse.
StateVector apply_pulse(const PulseSchedule &schedule, const Pulse &pulse, const StateVector &input,
                        const PropagationSettings &settings, const RunOptions &options);

/// Exact 2x2 (or 3x3 for a 3-level ion) unitary of an idealized one-qubit pulse.
CMatrix one_qubit_unitary(const Pulse &pulse, int levels);

struct TruthRow {
    int control = 0;  // 0 = g, 1 = e
    int target = 0;
    int expected_control = 0;
    int expected_target = 0;
    double fidelity = 0.0;        // |<ideal|out>|^2
    double bus_ground = 0.0;      // population of the bus mode in |0>
    double norm_deviation = 0.0;  // |norm - 1|
};

struct TruthTable {
    Scheme scheme = Scheme::lightshift;
    std::vector<TruthRow> rows;
    CMatrix block;  // <out,0|U|in,0> on the computational subspace, order gg, ge, eg, ee of (ion0, ion1)
    double unitary_distance = 0.0;  // min over global phase of ||block - e^{i phi} CNOT||_F
    double min_fidelity = 0.0;
    // Local invariants of the first-five-pulse intermediate (when requested).
    bool has_intermediate = false;
    cplx makhlin_g1 = 0.0;
    double makhlin_g2 = 0.0;
};

/// Runs the four computational inputs with the bus in |0>. With
/// intermediate = true the local invariants after pulse 5 are reported too.
TruthTable truth_table(const PulseSchedule &schedule, const PropagationSettings &settings,
                       const RunOptions &options = {}, bool intermediate = false);

/// The ideal C-NOT of the schedule on the gg, ge, eg, ee basis of (ion0, ion1).
CMatrix ideal_cnot(const PulseSchedule &schedule);

struct MakhlinInvariants {
    cplx g1;
    double g2;
};
/// Local invariants of a two-qubit gate (normalized by det to be phase free).
MakhlinInvariants makhlin_invariants(const CMatrix &u);

std::string schedule_to_json(const PulseSchedule &schedule);
PulseSchedule schedule_from_json(const std::string &text);

}  // namespace iontrap
