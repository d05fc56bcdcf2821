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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "iontrap/hamiltonians.hpp"
#include "iontrap/propagator.hpp"

namespace iontrap {
namespace {

using V = std::vector<int>;

// <m| exp(i eta (a + a^dagger)) |n> from the associated Laguerre closed form.
cplx displacement_element(double eta, int m, int n) {
    const int lo = std::min(m, n), hi = std::max(m, n), d = hi - lo;
    double ratio = 1.0;
    for (int k = lo + 1; k <= hi; ++k) ratio /= k;
    const double mag = std::exp(-eta * eta / 2.0) * std::pow(eta, d) * std::sqrt(ratio) *
                       std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(d), eta * eta);
    return mag * std::pow(cplx(0.0, 1.0), d);
}

// exp(i eta X) by its Taylor series in a much larger space, then cropped.
CMatrix displacement_taylor(double eta, int n_max) {
    const int big = n_max + 60;
    CMatrix x = CMatrix::Zero(big + 1, big + 1);
    for (int n = 1; n <= big; ++n) x(n - 1, n) = x(n, n - 1) = std::sqrt(static_cast<double>(n));
    const CMatrix a = cplx(0.0, eta) * x;
    CMatrix term = CMatrix::Identity(big + 1, big + 1), sum = term;
    for (int k = 1; k < 80; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum.topLeftCorner(n_max + 1, n_max + 1);
}

TEST(Displacement, MatchesLaguerreClosedForm) {
    for (double eta : {0.02, 0.1, 0.3}) {
        const CMatrix d = displacement_block(eta, 12);
        for (int m = 0; m <= 12; ++m)
            for (int n = 0; n <= 12; ++n) EXPECT_LT(std::abs(d(m, n) - displacement_element(eta, m, n)), 1e-8) << m << "," << n;
    }
}

TEST(Displacement, MatchesTaylorSeries) {
    const CMatrix d = displacement_block(0.2, 10);
    EXPECT_LT((d - displacement_taylor(0.2, 10)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Displacement, TruncationTooSmallIsReported) {
    EXPECT_THROW(displacement_block(0.8, 3), NumericalError);
    EXPECT_NO_THROW(displacement_block(0.1, 12));
    EXPECT_THROW(displacement_block(std::nan(""), 4), std::invalid_argument);
}

std::vector<FrameHamiltonian> every_kind() {
    std::vector<FrameHamiltonian> out;
    auto trap = two_ion_trap(0.1, 6).addressed_subsystem();
    out.push_back(full_hamiltonian(trap));
    out.push_back(lamb_dicke_hamiltonian(trap));
    out.push_back(dressed_picture_hamiltonian(trap));
    out.push_back(effective_jc_hamiltonian(trap, 0));
    auto standing = trap;
    standing.wave = WaveType::standing_node;
    out.push_back(full_hamiltonian(standing));
    auto red = red_sideband_config(trap);
    red.set_omega_prime(0.05);
    out.push_back(cz_red_sideband_hamiltonian(red));
    out.push_back(rwa_sideband_hamiltonian(red));
    auto phased = trap;
    phased.laser_phase = 0.7;
    phased.detuning = 0.3;
    out.push_back(full_hamiltonian(phased));
    return out;
}

TEST(Hamiltonians, HermitianAtAllTimes) {
    for (const auto &h : every_kind()) {
        for (double t : {0.0, 0.37, 3.1, 41.0, 1234.5}) EXPECT_LE(hermiticity_defect(h.at(t)), 1e-12) << to_string(h.kind);
        EXPECT_LE(hermiticity_defect(h.K), 1e-12);
    }
}

TEST(Hamiltonians, RejectsNegativeTime) {
    const auto h = full_hamiltonian(single_ion_trap(0.1, 4));
    EXPECT_THROW(h.at(-1.0), std::invalid_argument);
    EXPECT_THROW(h.at(std::nan("")), std::invalid_argument);
}

TEST(Hamiltonians, TimeDependenceIsTrapRotation) {
    // <e,n| H(t) |g,n+1> rotates as exp(-i nu t) relative to t = 0 at carrier resonance.
    const auto c = single_ion_trap(0.1, 6);
    const auto h = full_hamiltonian(c);
    const auto e0 = static_cast<Eigen::Index>(h.basis->index(V{1}, V{0}));
    const auto g1 = static_cast<Eigen::Index>(h.basis->index(V{0}, V{1}));
    const double t = 0.9;
    const cplx ratio = h.at(t)(e0, g1) / h.at(0.0)(e0, g1);
    EXPECT_LT(std::abs(ratio - std::polar(1.0, -t)), 1e-12);
}

TEST(Hamiltonians, LambDickeErrorIsSecondOrder) {
    // Elements between low Fock states; the LD truncation error scales as eta^2.
    auto deviation = [](double eta) {
        const auto c = single_ion_trap(eta, 10);
        const CMatrix diff = full_hamiltonian(c).at(0.4) - lamb_dicke_hamiltonian(c).at(0.4);
        const auto b = c.make_basis();
        double worst = 0.0;
        for (int l : {0, 1})
            for (int n = 0; n <= 2; ++n)
                for (int m = 0; m <= 2; ++m) {
                    worst = std::max(worst, std::abs(diff(static_cast<Eigen::Index>(b->index(V{1 - l}, V{m})),
                                                          static_cast<Eigen::Index>(b->index(V{l}, V{n})))));
                }
        return worst;
    };
    const double ratio = deviation(0.04) / deviation(0.02);
    EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(Hamiltonians, DressedPictureIsTheTransformedLambDickeHamiltonian) {
    // H_V = V H V^dagger + i (dV/dt) V^dagger with V = exp(i Omega' t sigma_z) R.
    auto c = two_ion_trap(0.1, 4).addressed_subsystem();
    c.set_omega_prime(0.43);
    const auto ld = lamb_dicke_hamiltonian(c);
    const auto dressed = dressed_picture_hamiltonian(c);
    const FrameTransform frame = FrameTransform::dressed_frame(c);
    const CMatrix sz = build_pauli(ld.basis, 0, PauliKind::z).matrix;
    for (double t : {0.0, 0.8, 5.3}) {
        const CMatrix v = frame.matrix(*ld.basis, t);
        const CMatrix expect = v * ld.at(t) * v.adjoint() - c.omega_prime() * sz;
        EXPECT_LT((dressed.at(t) - expect).cwiseAbs().maxCoeff(), 1e-12) << t;
    }
}

TEST(Hamiltonians, DressedPictureNeedsCarrierResonance) {
    auto c = single_ion_trap(0.1, 4);
    c.detuning = 0.1;
    EXPECT_THROW(dressed_picture_hamiltonian(c), std::invalid_argument);
}

TEST(Hamiltonians, JaynesCummingsNeedsResonanceAndNamesOmega) {
    auto c = single_ion_trap(0.1, 4);
    c.set_omega_prime(0.49);
    try {
        effective_jc_hamiltonian(c, 0);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument &e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("Omega = 0.50250"), std::string::npos) << msg;
    }
    c.set_omega_prime(0.5);
    const auto h = effective_jc_hamiltonian(c, 0);
    EXPECT_TRUE(h.time_independent());
    // Coupling i nu eta / 2 between |e,0> and |g,1>.
    const auto e0 = static_cast<Eigen::Index>(h.basis->index(V{1}, V{0}));
    const auto g1 = static_cast<Eigen::Index>(h.basis->index(V{0}, V{1}));
    EXPECT_LT(std::abs(h.K(e0, g1) - cplx(0.0, 0.05)), 1e-15);
}

TEST(Hamiltonians, RedSidebandNeedsDetuningOfBusMode) {
    auto c = single_ion_trap(0.1, 4);
    EXPECT_THROW(cz_red_sideband_hamiltonian(c), std::invalid_argument);
    const auto red = red_sideband_config(c);
    EXPECT_DOUBLE_EQ(red.detuning, -1.0);
    EXPECT_NO_THROW(cz_red_sideband_hamiltonian(red));
}

TEST(Hamiltonians, RwaSidebandCouplingStrength) {
    auto c = red_sideband_config(single_ion_trap(0.1, 4));
    c.rabi = 0.01;
    const auto h = rwa_sideband_hamiltonian(c);
    const auto e0 = static_cast<Eigen::Index>(h.basis->index(V{1}, V{0}));
    const auto g1 = static_cast<Eigen::Index>(h.basis->index(V{0}, V{1}));
    // g = Omega eta exp(-eta^2/2); travelling wave carries a factor i.
    EXPECT_LT(std::abs(h.K(e0, g1) - cplx(0.0, 0.01 * 0.1 * std::exp(-0.005))), 1e-15);
}

TEST(SystemConfig, TwoIonTrapDefaults) {
    const auto c = two_ion_trap(0.1);
    EXPECT_DOUBLE_EQ(c.mode_freqs[1], std::sqrt(3.0));
    EXPECT_NEAR(c.eta[0][1], 0.1 / std::pow(3.0, 0.25), 1e-15);
    EXPECT_NEAR(c.omega_prime(), 0.5, 1e-15);
    EXPECT_NEAR(c.debye_waller(), std::exp(-0.5 * (0.01 + 0.01 / std::sqrt(3.0))), 1e-15);
}

TEST(SystemConfig, ValidationNamesTheProblem) {
    auto c = two_ion_trap(0.1);
    c.mode_freqs = {1.0, 0.9};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_ion_trap(0.1);
    c.eta[0][0] = -0.1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_ion_trap(0.1);
    c.fock = {0, 4};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_ion_trap(0.1);
    c.transition = Transition::g_eaux;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = two_ion_trap(0.1);
    EXPECT_THROW(c.set_omega_prime(-1.0), std::invalid_argument);
}

TEST(SystemConfig, LeakageEstimateForStretchMode) {
    // eps^2 = (eta nu_1 / (2 |nu_2 - nu_1|))^2 ~ 0.005 at eta = 0.1.
    const auto c = two_ion_trap(0.1);
    EXPECT_NEAR(leakage_estimate(c, 0, 1), std::pow(0.1 / (2.0 * (std::sqrt(3.0) - 1.0)), 2), 1e-15);
    EXPECT_NEAR(leakage_estimate(c, 0, 1), 0.00467, 1e-5);
    EXPECT_THROW(leakage_estimate(c, 0, 0), std::invalid_argument);
}

}  // namespace
}  // namespace iontrap
