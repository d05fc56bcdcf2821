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

// Hamiltonian generators for ions coupled to a laser and to the trap's
// normal modes. Units: hbar = 1, frequencies in units of the lowest mode
// frequency nu_1, times in units of 1/nu_1.
//
// Every Hamiltonian here has the form H(t) = exp(iGt) K exp(-iGt) with K
// Hermitian and time independent and G diagonal in the tensor basis. The
// propagator exploits this; at(t) materializes the matrix for any t.

#include <cstddef>
#include <string>
#include <vector>

#include "iontrap/statespace.hpp"

namespace iontrap {

enum class WaveType { travelling, standing_node };

std::string to_string(WaveType w);
WaveType parse_wave_type(const std::string &s);

struct SystemConfig {
    std::vector<double> mode_freqs{1.0};          // nu_p / nu_1, strictly increasing
    std::vector<std::vector<double>> eta{{0.1}};  // eta[j][p] >= 0
    double rabi = 0.5;                            // bare Rabi frequency Omega >= 0
    double detuning = 0.0;                        // delta = omega_laser - omega_atom
    WaveType wave = WaveType::travelling;
    int addressed_ion = 0;
    Transition transition = Transition::g_e;
    int bus_mode = 0;
    std::vector<int> ion_levels{2};
    std::vector<int> fock{12};  // n_max per mode
    double laser_phase = 0.0;   // multiplies the sigma_+ term by exp(i phase)

    std::size_t n_ions() const { return ion_levels.size(); }
    std::size_t n_modes() const { return mode_freqs.size(); }

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    /// exp(-1/2 sum_p eta_jp^2) for the addressed ion.
    double debye_waller() const;
    /// Omega' = Omega * debye_waller().
    double omega_prime() const { return rabi * debye_waller(); }
    void set_omega_prime(double omega_prime);
    double max_mode_freq() const;

    BasisPtr make_basis() const;

    /// The addressed ion alone as a 2-level system on its addressed
    /// transition (relabelled g-e), together with all modes. Other ions are
    /// spectators of every Hamiltonian here, so this is an exact reduction.
    SystemConfig addressed_subsystem() const;
};

/// One ion, one mode at nu = 1.
SystemConfig single_ion_trap(double eta, int n_max = 12);

/// Two ions with the centre-of-mass mode (nu_1 = 1) and the stretch mode
/// (nu_2 = sqrt 3). eta is the addressed ion's coupling to the CM mode;
/// the stretch coupling is eta * 3^(-1/4). ion2_levels = 3 adds |e'> on ion 2.
SystemConfig two_ion_trap(double eta, int n_max = 12, int ion2_levels = 2);

enum class HamiltonianKind { full_exact, lamb_dicke_order1, dressed_picture, effective_jc, cz_red_sideband };

std::string to_string(HamiltonianKind k);

/// H(t) = exp(iGt) K exp(-iGt).
struct FrameHamiltonian {
    HamiltonianKind kind = HamiltonianKind::full_exact;
    Picture picture;
    BasisPtr basis;
    CMatrix K;
    Eigen::VectorXd G;
    double nu_max = 1.0;  // fastest trap mode, sets the default integrator step

    /// Throws std::invalid_argument for negative or non-finite t.
    CMatrix at(double t) const;
    Operator operator_at(double t) const { return {basis, at(t)}; }
    bool time_independent() const { return G.size() == 0 || G.cwiseAbs().maxCoeff() == 0.0; }
};

/// exp(i eta (a + a^dagger)) on one mode, matrix elements exact to 1e-8 in
/// the retained space. Throws NumericalError when the truncation cannot hold
/// the low Fock columns.
CMatrix displacement_block(double eta, int n_max);

/// Omega [e^{i phase} sigma_+^j M e^{-i delta t} + h.c.] with
/// M = exp(iX(t)) (travelling) or sin(X(t)) (standing node),
/// X(t) = sum_p eta_jp (a_p e^{-i nu_p t} + h.c.).
FrameHamiltonian full_hamiltonian(const SystemConfig &config);
Operator full_hamiltonian(const SystemConfig &config, double t);

/// First order in eta: Omega' [e^{i phase} sigma_+ (1 + iX(t)) e^{-i delta t} + h.c.].
FrameHamiltonian lamb_dicke_hamiltonian(const SystemConfig &config);
Operator lamb_dicke_hamiltonian(const SystemConfig &config, double t);

/// Lamb-Dicke Hamiltonian seen from V(t) = exp(i Omega' t sigma_z^j) R_j:
/// i Omega' sum_p eta_jp [e^{i(2Omega'-nu_p)t} sigma_+ a_p + e^{i(2Omega'+nu_p)t} sigma_+ a_p^dagger - h.c.].
/// Requires delta = 0.
FrameHamiltonian dressed_picture_hamiltonian(const SystemConfig &config);
Operator dressed_picture_hamiltonian(const SystemConfig &config, double t);

/// (i nu_q eta_jq / 2)(sigma_+ a_q - sigma_- a_q^dagger). Requires
/// |Omega' - nu_q/2| <= rel_tol * nu_q/2; the error names the Omega needed.
FrameHamiltonian effective_jc_hamiltonian(const SystemConfig &config, int mode, double rel_tol = 1e-9);

/// full_hamiltonian at the first red sideband of the bus mode; requires
/// delta = -nu_q.
FrameHamiltonian cz_red_sideband_hamiltonian(const SystemConfig &config);
Operator cz_red_sideband_hamiltonian(const SystemConfig &config, double t);
/// Resonant part of the red sideband drive alone, in the interaction picture:
/// g (sigma_+ a_q c + h.c.) with g = Omega' eta_jq and c = i (travelling) or
/// 1 (standing node). Time independent.
FrameHamiltonian rwa_sideband_hamiltonian(const SystemConfig &config);
/// Copy of config with delta = -nu_q of its bus mode.
SystemConfig red_sideband_config(SystemConfig config);

/// (eta_jq nu_q / (2 |nu_p - nu_q|))^2, population leaking into mode p while
/// driving the resonance of mode q.
double leakage_estimate(const SystemConfig &config, int q, int p);

}  // namespace iontrap
