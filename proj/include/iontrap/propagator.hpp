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

// Time evolution under the generators of hamiltonians.hpp.
//
// evolve() is a fixed-step midpoint piecewise-exponential integrator. For a
// FrameHamiltonian the co-rotating variable phi = exp(-iGt) psi obeys
// i dphi/dt = (K + G) phi, so the midpoint exponential taken in that frame is
// exact and the same step matrix serves every step (one dense mat-vec each).
// lab_midpoint takes the midpoint exponential of H(t) itself,
// exp(-i h H(t + h/2)), which is second order in h.
//
// SpectralPropagator gives the exact solution of the same problem from one
// eigendecomposition of K + G and serves both as an oracle for evolve() and as
// the engine behind fidelity sweeps.

#include <functional>
#include <string>
#include <vector>

#include "iontrap/hamiltonians.hpp"
#include "iontrap/statespace.hpp"

namespace iontrap {

enum class IntegrationMethod {
    corotating_midpoint,  // midpoint exponential of the co-rotating generator K + G
    lab_midpoint,         // midpoint exponential of H(t)
};

std::string to_string(IntegrationMethod m);
IntegrationMethod parse_integration_method(const std::string &s);

struct PropagationSettings {
    double step = 0.0;  // <= 0 selects default_step(nu_max)
    IntegrationMethod method = IntegrationMethod::corotating_midpoint;
    double norm_tol = 1e-9;
    double leak_bound = 1e-6;
    bool convergence_check = false;
    double convergence_tol = 1e-8;

    /// 2 pi / (200 nu_max).
    static double default_step(double nu_max);
    double resolved_step(double nu_max) const;
    void validate() const;
};

/// Arbitrary Hermitian generator H(t).
using Generator = std::function<CMatrix(double)>;

/// Called after every step with the current time and state.
using Observer = std::function<void(double, const StateVector &)>;

/// General path: lab-frame midpoint rule with one eigendecomposition per
/// step. settings.step must be > 0.
StateVector evolve(const Generator &generator, const StateVector &state, double t0, double t1,
                   const PropagationSettings &settings);

/// Fast path for H(t) = exp(iGt) K exp(-iGt). The state must live in the
/// Hamiltonian's picture.
StateVector evolve(const FrameHamiltonian &h, const StateVector &state, double t0, double t1,
                   const PropagationSettings &settings);

/// As evolve(), invoking observer at t0 and after every step.
StateVector evolve_observed(const FrameHamiltonian &h, const StateVector &state, double t0, double t1,
                            const PropagationSettings &settings, const Observer &observer);

/// Propagates several states through the same interval; cheaper than separate
/// calls because the step matrix is built once.
std::vector<StateVector> evolve_batch(const FrameHamiltonian &h, const std::vector<StateVector> &states, double t0,
                                      double t1, const PropagationSettings &settings);

class SpectralPropagator {
   public:
    explicit SpectralPropagator(FrameHamiltonian h);

    const FrameHamiltonian &hamiltonian() const { return h_; }
    const Eigen::VectorXd &eigenvalues() const { return lambda_; }

    /// Exact psi(t1) given psi(t0).
    CVector evolve(const CVector &psi0, double t0, double t1) const;
    StateVector evolve(const StateVector &state, double t0, double t1) const;

    /// <f|psi(t0 + k dt)> for k = 0..count-1, psi(t0) = psi0.
    std::vector<cplx> overlap_series(const CVector &psi0, const CVector &f, double t0, double dt,
                                     std::size_t count) const;
    /// <f|psi(t)>.
    cplx overlap(const CVector &psi0, const CVector &f, double t0, double t) const;

   private:
    FrameHamiltonian h_;
    CMatrix vectors_;
    Eigen::VectorXd lambda_;
};

enum class FrameKind {
    bare_to_dressed,      // R on one ion transition
    dressed_to_rotating,  // exp(i Omega' t sigma_z) on the same transition
    composite,            // V(t) = exp(i Omega' t sigma_z) R
};

struct FrameTransform {
    FrameKind kind = FrameKind::composite;
    int ion = 0;
    Transition transition = Transition::g_e;
    double omega_prime = 0.0;

    /// The frame the addressed ion of config is driven in by the dressed
    /// picture Hamiltonians.
    static FrameTransform dressed_frame(const SystemConfig &config);

    Picture source() const;
    Picture target() const;
    /// Unitary matrix of the transform at time t.
    CMatrix matrix(const Basis &basis, double t) const;
};

/// Applies the transform at time t. The state must be in transform.source().
StateVector to_frame(const StateVector &state, const FrameTransform &transform, double t);
/// Inverse of to_frame. The state must be in transform.target().
StateVector from_frame(const StateVector &state, const FrameTransform &transform, double t);

/// Closed-form evolution of a single dressed ion resonantly coupled to one
/// mode (Omega' = nu/2) under the Jaynes-Cummings Hamiltonian, expressed in
/// the R-dressed frame (equivalently, as amplitudes on bare-picture |+-,n>).
struct DressedAmplitude {
    int sign;  // +1 for |+>, -1 for |->
    int fock;
    cplx amplitude;
};
/// initial: "-0", "+0", "-1" or "+1".
std::vector<DressedAmplitude> analytic_jc_oracle(double eta, double nu, double t, const std::string &initial);

}  // namespace iontrap
