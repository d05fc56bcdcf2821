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

// Average SWAP fidelity of an ion-mode gate, sweeps of it over the effective
// Rabi frequency Omega', and the landmarks extracted from those sweeps.
//
// F(Omega') = max over t in [0, window] of (1/n) sum_k |<f_k|U(t)|i_k>|^2,
// U the full Hamiltonian evolution of the addressed ion and the trap modes.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iontrap/hamiltonians.hpp"
#include "iontrap/propagator.hpp"

namespace iontrap {

enum class FidelityScheme { cz_travelling, cz_standing, lightshift };
enum class FidelityEngine { spectral, integrator };
/// all: every mode of the trap config. bus_only: drop the spectator modes.
enum class ModeSet { all, bus_only };

std::string to_string(FidelityScheme s);
FidelityScheme parse_fidelity_scheme(const std::string &s);
std::string to_string(FidelityEngine e);
FidelityEngine parse_fidelity_engine(const std::string &s);
std::string to_string(ModeSet m);
ModeSet parse_mode_set(const std::string &s);

struct FidelitySpec {
    FidelityScheme scheme = FidelityScheme::lightshift;
    double eta = 0.1;  // must equal the config's addressed-ion bus-mode eta
    double window_factor = 1.25;
    std::size_t min_samples = 400;
    double samples_per_period = 20.0;
    ModeSet modes = ModeSet::all;
    FidelityEngine engine = FidelityEngine::spectral;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Input states i_k and their ideal images f_k.
struct StateSet {
    std::vector<CVector> inputs;
    std::vector<CVector> targets;
};

/// lightshift: {|-,0>, |-,1>} -> {|-,0>, |+,0>}; CZ: {|g,0>, |g,1>} -> {|g,0>, |e,0>}.
/// The ion factor is basis ion 0, the Fock index refers to `mode`, other
/// modes are in |0>.
StateSet fidelity_states(FidelityScheme scheme, const Basis &basis, std::size_t mode = 0);

/// The single-ion system swap_fidelity propagates: the addressed ion of trap
/// with the scheme's wave type and detuning at the given Omega'.
SystemConfig fidelity_system(const FidelitySpec &spec, const SystemConfig &trap, double omega_prime);

/// Ideal swap duration: pi/(nu_q eta) for lightshift, pi/(2 Omega' eta) for CZ.
double ideal_swap_time(const FidelitySpec &spec, const SystemConfig &system);

struct FidelityResult {
    double fidelity = 0.0;
    double t_of_max = 0.0;
    double window = 0.0;
    std::size_t samples = 0;
};

/// Maximizes the average fidelity of h over [0, window]. Throws
/// std::invalid_argument for a non-orthonormal state set or an empty window
/// and NumericalError if a norm or truncation guard fails at the maximum.
FidelityResult maximize_fidelity(const FrameHamiltonian &h, const StateSet &states, double window,
                                 std::size_t samples, FidelityEngine engine, const PropagationSettings &settings);

/// trap: multi-ion config; its addressed ion and bus mode select the pair.
FidelityResult swap_fidelity(const FidelitySpec &spec, double omega_prime, const SystemConfig &trap,
                             const PropagationSettings &settings);

struct SweepPoint {
    double omega_over_nu = 0.0;
    double fidelity = 0.0;
    double t_of_max = 0.0;
    bool ok = true;
    std::string error;
};

struct SweepOptions {
    unsigned workers = 0;  // 0: hardware concurrency
    double threshold = 0.99;
    bool refine = true;  // bisection and peak refinement after the grid pass
    double refine_rel_tol = 1e-5;
};

struct SweepResult {
    FidelityScheme scheme = FidelityScheme::lightshift;
    double eta = 0.0;
    double threshold = 0.99;
    std::vector<SweepPoint> points;
    /// CZ: upper edge of the F >= threshold region that starts at the low end
    /// of the grid.
    std::optional<double> threshold_omega;
    std::optional<double> peak_omega;
    std::optional<double> peak_fidelity;
    /// Edges of the F >= threshold region containing the peak.
    std::optional<double> width_lo;
    std::optional<double> width_hi;

    std::size_t failures() const;
    std::optional<double> width() const;
};

/// Grid in units of nu_1. Throws for an unsorted or empty grid.
SweepResult sweep(const FidelitySpec &spec, const std::vector<double> &grid, const SystemConfig &trap,
                  const PropagationSettings &settings, const SweepOptions &options = {});

std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);
/// 200 log-spaced points for CZ, 200 linear points in [0.48, 0.52] nu_q for
/// lightshift.
std::vector<double> default_grid(FidelityScheme scheme, double nu_q = 1.0);

/// C-NOT rate in units of nu_1. lightshift: eta nu_q / 2; CZ:
/// eta omega_prime_max exp(-eta^2/2).
double switching_rate(FidelityScheme scheme, double eta, const SystemConfig &trap, double omega_prime_max = 0.0);

struct StabilityBand {
    double centre = 0.0;  // nu_q / 2
    double lo = 0.0;
    double hi = 0.0;
    double half_width_rel = 0.0;  // (hi - lo) / 2 / centre
    double asymmetry_rel = 0.0;   // ((hi + lo)/2 - centre) / centre
};

/// Band from a lightshift sweep; nullopt if the sweep has no bounded region.
std::optional<StabilityBand> stability_band(const SweepResult &result, double nu_q);
/// Sweeps the default lightshift grid and extracts the band.
std::optional<StabilityBand> intensity_stability_band(const SystemConfig &trap, const PropagationSettings &settings,
                                                      const SweepOptions &options = {});

/// Columns omega_over_nu, fidelity, t_of_max, ok, error; header lines are
/// written first as '#' comments.
void write_sweep_csv(std::ostream &os, const SweepResult &result, const std::vector<std::string> &header = {});
/// JSON document with the points and the extracted landmarks.
std::string sweep_to_json(const SweepResult &result, const std::vector<std::string> &header = {});

}  // namespace iontrap
