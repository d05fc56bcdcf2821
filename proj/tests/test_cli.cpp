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

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "iontrap/cli/commands.hpp"
#include "iontrap/cli/run_config.hpp"
#include "iontrap/modespectrum.hpp"
#include "json.hpp"

namespace {

using namespace iontrap;
using namespace iontrap::cli;

std::string run(int (*cmd)(const RunConfig &, std::ostream &), const RunConfig &c, int expected_code = kExitOk) {
    std::ostringstream out;
    EXPECT_EQ(cmd(c, out), expected_code);
    return out.str();
}

int shell(const std::string &args) {
    const std::string command = std::string(IONTRAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, DefaultsAreComplete) {
    const RunConfig c;
    EXPECT_EQ(c.get("scheme"), "lightshift");
    EXPECT_DOUBLE_EQ(c.eta(), 0.1);
    EXPECT_EQ(c.get_int("fock"), 12);
    EXPECT_TRUE(c.get_bool("deterministic"));
    EXPECT_EQ(c.resolved_lines().size(), RunConfig::defaults().size());
}

TEST(RunConfig, ParsesFileFormat) {
    RunConfig c;
    c.load_text("# comment\n\nscheme = cz-travelling\n  eta=0.05  # trailing\nfock = 6\n", "test");
    EXPECT_EQ(c.scheme(), FidelityScheme::cz_travelling);
    EXPECT_DOUBLE_EQ(c.eta(), 0.05);
    EXPECT_EQ(c.get_int("fock"), 6);
}

TEST(RunConfig, RejectsUnknownAndDuplicateKeys) {
    RunConfig c;
    EXPECT_THROW(c.load_text("colour = red\n", "test"), UsageError);
    EXPECT_THROW(c.load_text("eta = 0.1\neta = 0.2\n", "test"), UsageError);
    EXPECT_THROW(c.load_text("just words\n", "test"), UsageError);
    EXPECT_THROW(c.set("nope", "1"), UsageError);
    EXPECT_THROW(c.set_assignment("eta"), UsageError);
}

TEST(RunConfig, LaterSetOverridesFile) {
    RunConfig c;
    c.load_text("eta = 0.05\n", "test");
    c.set_assignment("eta=0.07");
    EXPECT_DOUBLE_EQ(c.eta(), 0.07);
}

TEST(RunConfig, TypedAccessorsRejectGarbage) {
    RunConfig c;
    c.set("eta", "abc");
    EXPECT_THROW(c.eta(), UsageError);
    c.set("eta", "0.1x");
    EXPECT_THROW(c.eta(), UsageError);
    c.set("intermediate", "maybe");
    EXPECT_THROW(c.get_bool("intermediate"), UsageError);
    c.set("scheme", "teleport");
    EXPECT_THROW(c.scheme(), UsageError);
}

TEST(RunConfig, OmegaPrimeAuto) {
    RunConfig c;
    const SystemConfig trap = c.trap();
    const double nu_q = trap.mode_freqs[static_cast<std::size_t>(trap.bus_mode)];
    EXPECT_DOUBLE_EQ(c.omega_prime(trap), nu_q / 2.0);
    c.set("scheme", "cz-travelling");
    EXPECT_DOUBLE_EQ(c.omega_prime(trap), 0.01);
    c.set("omega_prime", "resonant");
    EXPECT_DOUBLE_EQ(c.omega_prime(trap), nu_q / 2.0);
    c.set("omega_prime", "0.3");
    EXPECT_DOUBLE_EQ(c.omega_prime(trap), 0.3);
}

TEST(RunConfig, GridSyntax) {
    RunConfig c;
    c.set("grid", "linear:0.1:0.3:3");
    auto g = c.grid(1.0);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_DOUBLE_EQ(g[1], 0.2);
    c.set("grid", "log:0.01:1:3");
    g = c.grid(1.0);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_NEAR(g[1], 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    c.set("grid", "list:0.5,0.25");
    EXPECT_THROW(c.grid(1.0), UsageError);  // not increasing
    c.set("grid", "list:0.25,0.5");
    EXPECT_EQ(c.grid(1.0).size(), 2u);
    c.set("grid", "linear:0.1:0.3:0");
    EXPECT_THROW(c.grid(1.0), UsageError);
    c.set("grid", "spiral:1:2:3");
    EXPECT_THROW(c.grid(1.0), UsageError);
}

TEST(Commands, HeaderCarriesConfigAndUnits) {
    RunConfig c;
    const std::string out = run(cmd_modes, c);
    EXPECT_EQ(out.rfind("# iontrap modes\r\n", 0), 0u);
    EXPECT_NE(out.find(kUnitsLine), std::string::npos);
    EXPECT_NE(out.find("# config: budget=0.01\r\n"), std::string::npos);
    EXPECT_NE(out.find("# kernels: "), std::string::npos);
}

TEST(Commands, ModesIsByteIdentical) {
    RunConfig c;
    EXPECT_EQ(run(cmd_modes, c), run(cmd_modes, c));
}

TEST(Commands, QuarterBudgetHalvesEta) {
    RunConfig c;
    c.set("format", "json");
    const auto a = nlohmann::json::parse(run(cmd_modes, c));
    c.set("budget", "0.0025");
    const auto b = nlohmann::json::parse(run(cmd_modes, c));
    const auto &ra = a["rows"], &rb = b["rows"];
    ASSERT_EQ(ra.size(), static_cast<std::size_t>(kModeCount));
    for (int q = 0; q < kMaxBusMode; ++q)
        EXPECT_NEAR(rb[q]["eta_max"].get<double>(), 0.5 * ra[q]["eta_max"].get<double>(), 1e-15) << q;
}

TEST(Commands, IdealizedLightshiftTruthTable) {
    RunConfig c;
    c.set("model", "effective");
    c.set("format", "json");
    c.set("intermediate", "true");
    const auto j = nlohmann::json::parse(run(cmd_truth_table, c));
    ASSERT_EQ(j["rows"].size(), 4u);
    for (const auto &row : j["rows"]) EXPECT_NEAR(row[4].get<double>(), 1.0, 1e-8);
    EXPECT_NEAR(j["summary"]["min_fidelity"].get<double>(), 1.0, 1e-8);
    EXPECT_NEAR(j["summary"]["makhlin_g2"].get<double>(), 1.0, 1e-8);
}

TEST(Commands, DarkStateStaysFlat) {
    RunConfig c;
    c.set("hamiltonian", "lamb_dicke");
    c.set("initial", "-0");
    c.set("samples", "50");
    c.set("fock", "6");
    c.set("format", "json");
    const auto j = nlohmann::json::parse(run(cmd_simulate, c));
    ASSERT_EQ(j["rows"].size(), 50u);
    for (const auto &row : j["rows"]) {
        EXPECT_GT(row[6].get<double>(), 0.995);       // P_minus0
        EXPECT_NEAR(row[9].get<double>(), 1.0, 1e-9);  // norm
    }
}

TEST(Commands, SimulateCsvShape) {
    RunConfig c;
    c.set("samples", "5");
    c.set("fock", "4");
    std::istringstream in(run(cmd_simulate, c));
    std::string line;
    int data = 0;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        ASSERT_FALSE(line.empty());
        EXPECT_EQ(line.back(), '\r');
        if (line[0] == '#') continue;
        if (!saw_columns) {
            EXPECT_EQ(line, "t,P_g0,P_e0,P_g1,P_e1,P_plus0,P_minus0,P_plus1,P_minus1,norm\r");
            saw_columns = true;
        } else {
            ++data;
        }
    }
    EXPECT_EQ(data, 5);
}

TEST(Commands, UsageErrors) {
    RunConfig c;
    c.set("initial", "x7");
    std::ostringstream out;
    EXPECT_THROW(cmd_simulate(c, out), UsageError);
    RunConfig d;
    d.set("format", "xml");
    EXPECT_THROW(cmd_modes(d, out), UsageError);
    RunConfig e;
    e.set("threshold", "1.5");
    e.set("grid", "list:0.5");
    EXPECT_THROW(cmd_sweep(e, out), UsageError);
}

TEST(Commands, SweepFailureExitCode) {
    RunConfig c;
    c.set("scheme", "cz-travelling");
    c.set("grid", "list:0.01");
    c.set("fock", "4");
    c.set("leak_bound", "1e-300");
    c.set("samples", "50");
    const std::string out = run(cmd_sweep, c, kExitNumerical);
    EXPECT_NE(out.find("# failures: 1\r\n"), std::string::npos);
}

TEST(Binary, ExitCodes) {
    EXPECT_EQ(shell("modes"), 0);
    EXPECT_EQ(shell("--help"), 0);
    EXPECT_EQ(shell(""), 1);
    EXPECT_EQ(shell("modes --colour red"), 1);
    EXPECT_EQ(shell("modes --set colour=red"), 1);
    EXPECT_EQ(shell("modes --budget -1"), 1);
    EXPECT_EQ(shell("sweep --scheme cz-travelling --grid list:0.01 --fock 4 --samples 50 --leak-bound 1e-300"), 2);
}

TEST(Binary, ConfigFileAndFlagPrecedence) {
    const std::string cfg = ::testing::TempDir() + "iontrap_cli_test.cfg";
    const std::string out = ::testing::TempDir() + "iontrap_cli_test.csv";
    {
        std::ofstream f(cfg);
        f << "budget = 0.04\nformat = csv\n";
    }
    ASSERT_EQ(shell("modes --config " + cfg + " --budget 0.0025 --output " + out), 0);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_NE(ss.str().find("config: budget=0.0025"), std::string::npos);
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}
