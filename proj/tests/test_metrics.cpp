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
#include <sstream>

#include "iontrap/metrics.hpp"
#include "json.hpp"

namespace iontrap {
namespace {

FidelitySpec spec_for(FidelityScheme scheme, double eta = 0.1) {
    FidelitySpec s;
    s.scheme = scheme;
    s.eta = eta;
    return s;
}

TEST(FidelityStates, OrthonormalWithExpectedImages) {
    const Basis b({2}, {4, 4});
    for (auto scheme : {FidelityScheme::lightshift, FidelityScheme::cz_travelling}) {
        const StateSet s = fidelity_states(scheme, b);
        ASSERT_EQ(s.inputs.size(), 2u);
        EXPECT_NEAR(std::abs(s.inputs[0].dot(s.inputs[1])), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(s.targets[0].dot(s.targets[1])), 0.0, 1e-15);
        EXPECT_LT((s.inputs[0] - s.targets[0]).norm(), 1e-15);
    }
    const StateSet cz = fidelity_states(FidelityScheme::cz_standing, b);
    EXPECT_NEAR(std::norm(cz.targets[1][static_cast<Eigen::Index>(b.index(std::vector<int>{1}, std::vector<int>{0, 0}))]),
                1.0, 1e-15);
    EXPECT_THROW(fidelity_states(FidelityScheme::lightshift, Basis({2, 2}, {2})), std::invalid_argument);
}

TEST(SwapFidelity, NoDriveGivesHalfForCz) {
    const auto r = swap_fidelity(spec_for(FidelityScheme::cz_travelling), 0.0, two_ion_trap(0.1, 8), {});
    EXPECT_DOUBLE_EQ(r.fidelity, 0.5);
    EXPECT_DOUBLE_EQ(r.t_of_max, 0.0);
}

TEST(SwapFidelity, WeakSidebandDriveIsNearlyPerfect) {
    const auto r = swap_fidelity(spec_for(FidelityScheme::cz_travelling), 0.001, two_ion_trap(0.1, 12), {});
    EXPECT_GT(r.fidelity, 0.9999);
    EXPECT_LE(r.fidelity, 1.0);
}

TEST(SwapFidelity, LightshiftAtResonanceExceedsTarget) {
    const auto r = swap_fidelity(spec_for(FidelityScheme::lightshift), 0.5, two_ion_trap(0.1, 12), {});
    EXPECT_GT(r.fidelity, 0.99);
    // First-cycle maximum near the ideal swap time pi / (nu eta).
    EXPECT_NEAR(r.t_of_max, 10.0 * std::numbers::pi, 1.0);
}

TEST(SwapFidelity, SpecAndConfigMustAgreeOnEta) {
    EXPECT_THROW(swap_fidelity(spec_for(FidelityScheme::lightshift, 0.05), 0.5, two_ion_trap(0.1, 8), {}),
                 std::invalid_argument);
}

TEST(SwapFidelity, EnginesAgreeAndStepHalvingIsStable) {
    auto spec = spec_for(FidelityScheme::lightshift);
    const auto trap = two_ion_trap(0.1, 8);
    const double spectral = swap_fidelity(spec, 0.501, trap, {}).fidelity;
    spec.engine = FidelityEngine::integrator;
    PropagationSettings s;
    const double coarse = swap_fidelity(spec, 0.501, trap, s).fidelity;
    s.step = PropagationSettings::default_step(trap.max_mode_freq()) / 2.0;
    const double fine = swap_fidelity(spec, 0.501, trap, s).fidelity;
    EXPECT_NEAR(coarse, spectral, 1e-9);
    EXPECT_LT(std::abs(coarse - fine), 1e-6);
}

TEST(MaximizeFidelity, InvariantUnderGlobalPhases) {
    auto spec = spec_for(FidelityScheme::lightshift);
    const SystemConfig sys = fidelity_system(spec, two_ion_trap(0.1, 8), 0.5);
    const auto h = full_hamiltonian(sys);
    StateSet states = fidelity_states(spec.scheme, *h.basis);
    const auto ref = maximize_fidelity(h, states, 40.0, 800, FidelityEngine::spectral, {});
    states.inputs[0] *= std::polar(1.0, 0.4);
    states.inputs[1] *= std::polar(1.0, -2.0);
    states.targets[1] *= std::polar(1.0, 1.1);
    const auto phased = maximize_fidelity(h, states, 40.0, 800, FidelityEngine::spectral, {});
    EXPECT_NEAR(phased.fidelity, ref.fidelity, 1e-12);
    EXPECT_GE(ref.fidelity, 0.0);
    EXPECT_LE(ref.fidelity, 1.0);
}

TEST(MaximizeFidelity, RejectsNonOrthonormalSetsAndEmptyWindows) {
    auto spec = spec_for(FidelityScheme::lightshift);
    const auto h = full_hamiltonian(fidelity_system(spec, two_ion_trap(0.1, 8), 0.5));
    StateSet states = fidelity_states(spec.scheme, *h.basis);
    EXPECT_THROW(maximize_fidelity(h, states, 10.0, 0, FidelityEngine::spectral, {}), std::invalid_argument);
    states.inputs[1] = states.inputs[0];
    EXPECT_THROW(maximize_fidelity(h, states, 10.0, 100, FidelityEngine::spectral, {}), std::invalid_argument);
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
    const auto trap = single_ion_trap(0.1, 8);
    const auto spec = spec_for(FidelityScheme::lightshift);
    const auto grid = linear_grid(0.49, 0.51, 7);
    SweepOptions one, three;
    one.workers = 1;
    three.workers = 3;
    const auto a = sweep(spec, grid, trap, {}, one);
    const auto b = sweep(spec, grid, trap, {}, three);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].fidelity, b.points[i].fidelity);
        EXPECT_EQ(a.points[i].t_of_max, b.points[i].t_of_max);
    }
    EXPECT_EQ(a.peak_omega, b.peak_omega);
    EXPECT_EQ(a.width_lo, b.width_lo);
}

TEST(Sweep, FailedPointsAreFlaggedAndSweepContinues) {
    PropagationSettings s;
    s.leak_bound = 1e-300;
    const auto r = sweep(spec_for(FidelityScheme::lightshift), linear_grid(0.49, 0.51, 3), single_ion_trap(0.1, 6), s);
    EXPECT_EQ(r.failures(), 3u);
    for (const auto &p : r.points) EXPECT_FALSE(p.error.empty());
    EXPECT_FALSE(r.peak_omega.has_value());
}

TEST(Sweep, GridPreconditions) {
    const auto spec = spec_for(FidelityScheme::lightshift);
    const auto trap = single_ion_trap(0.1, 6);
    EXPECT_THROW(sweep(spec, {}, trap, {}), std::invalid_argument);
    EXPECT_THROW(sweep(spec, {0.5, 0.4}, trap, {}), std::invalid_argument);
    EXPECT_THROW(sweep(spec, {0.5, 0.5}, trap, {}), std::invalid_argument);
}

TEST(Sweep, CzTravellingThresholdAndMonotoneEnds) {
    const auto r = sweep(spec_for(FidelityScheme::cz_travelling), log_grid(0.006, 0.03, 6), two_ion_trap(0.1, 12), {});
    ASSERT_TRUE(r.threshold_omega.has_value());
    // Crossing located independently at F(0.014) = 0.99018, F(0.016) = 0.98724.
    EXPECT_GT(*r.threshold_omega, 0.014);
    EXPECT_LT(*r.threshold_omega, 0.016);
    EXPECT_GT(r.points.front().fidelity, r.points.back().fidelity);
    for (const auto &p : r.points) {
        EXPECT_GE(p.fidelity, 0.0);
        EXPECT_LE(p.fidelity, 1.0);
    }
}

TEST(Sweep, LightshiftPeakNearHalfTrapFrequency) {
    const auto r = sweep(spec_for(FidelityScheme::lightshift), linear_grid(0.49, 0.514, 9), two_ion_trap(0.1, 10), {});
    ASSERT_TRUE(r.peak_omega.has_value());
    EXPECT_LT(std::abs(*r.peak_omega - 0.5), 0.005);
    EXPECT_GT(*r.peak_fidelity, 0.99);
    ASSERT_TRUE(r.width().has_value());
    EXPECT_GT(*r.width(), 0.0);
}

TEST(Grids, DefaultShapes) {
    const auto lb = default_grid(FidelityScheme::lightshift);
    ASSERT_EQ(lb.size(), 200u);
    EXPECT_DOUBLE_EQ(lb.front(), 0.48);
    EXPECT_DOUBLE_EQ(lb.back(), 0.52);
    const auto cz = default_grid(FidelityScheme::cz_travelling);
    ASSERT_EQ(cz.size(), 200u);
    EXPECT_NEAR(cz[1] / cz[0], cz[199] / cz[198], 1e-12);
    EXPECT_THROW(log_grid(0.0, 1.0, 3), std::invalid_argument);
    EXPECT_THROW(linear_grid(1.0, 0.0, 3), std::invalid_argument);
}

TEST(SwitchingRate, Schemes) {
    const auto trap = two_ion_trap(0.1);
    EXPECT_NEAR(switching_rate(FidelityScheme::lightshift, 0.1, trap), 0.05, 1e-15);
    EXPECT_NEAR(switching_rate(FidelityScheme::cz_travelling, 0.1, trap, 1.5e-2), 1.5e-3 * std::exp(-0.005), 1e-15);
    EXPECT_EQ(switching_rate(FidelityScheme::lightshift, 0.0, trap), 0.0);
    EXPECT_EQ(switching_rate(FidelityScheme::cz_standing, 0.0, trap, 1.25), 0.0);
}

TEST(StabilityBand, RelativeHalfWidthAndAsymmetry) {
    SweepResult r;
    r.width_lo = 0.4975;
    r.width_hi = 0.5035;
    const auto b = stability_band(r, 1.0);
    ASSERT_TRUE(b.has_value());
    EXPECT_NEAR(b->half_width_rel, 0.006, 1e-12);
    EXPECT_NEAR(b->asymmetry_rel, 0.001, 1e-12);
    r.width_hi.reset();
    EXPECT_FALSE(stability_band(r, 1.0).has_value());
}

TEST(SweepOutput, CsvQuotesErrorsAndJsonCarriesLandmarks) {
    SweepResult r;
    r.scheme = FidelityScheme::cz_standing;
    r.eta = 0.1;
    r.points = {{0.1, 0.999, 12.5, true, ""}, {0.2, 0.0, 0.0, false, "leak, \"mode 0\""}};
    r.threshold_omega = 0.15;
    std::ostringstream csv;
    write_sweep_csv(csv, r, {"units: nu_1"});
    const std::string text = csv.str();
    EXPECT_EQ(text.rfind("# units: nu_1\r\n", 0), 0u);
    EXPECT_NE(text.find("omega_over_nu,fidelity,t_of_max,ok,error\r\n"), std::string::npos);
    EXPECT_NE(text.find("\"leak, \"\"mode 0\"\"\""), std::string::npos);
    const auto j = nlohmann::json::parse(sweep_to_json(r, {"units: nu_1"}));
    EXPECT_DOUBLE_EQ(j["threshold_omega"].get<double>(), 0.15);
    EXPECT_TRUE(j["peak_omega"].is_null());
    EXPECT_EQ(j["points"].size(), 2u);
    EXPECT_EQ(j["failures"].get<int>(), 1);
}

TEST(Parsing, SchemeEngineModeSet) {
    EXPECT_EQ(parse_fidelity_scheme(to_string(FidelityScheme::cz_standing)), FidelityScheme::cz_standing);
    EXPECT_EQ(parse_fidelity_engine("integrator"), FidelityEngine::integrator);
    EXPECT_EQ(parse_mode_set("cm_only"), ModeSet::bus_only);
    EXPECT_THROW(parse_fidelity_scheme("cz"), std::invalid_argument);
}

}  // namespace
}  // namespace iontrap
