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

// Subcommands of the iontrap executable. Each writes its output (CSV or
// JSON, chosen by the config's "format" key) to `out`; every output starts
// with the resolved configuration and the unit convention.
//
// Errors: UsageError for bad input, NumericalError for failed numerical
// guarantees. Commands return the process exit code.

#include <ostream>
#include <string>
#include <vector>

#include "iontrap/cli/run_config.hpp"

namespace iontrap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

inline constexpr const char *kUnitsLine = "units: frequencies in units of nu_1, times in units of 1/nu_1, hbar = 1";

/// "command: name", the units line and every resolved key.
std::vector<std::string> output_header(const std::string &command, const RunConfig &config);

/// Population time series in the bare and dressed bases from config.initial
/// ("+0", "-1", "g0", "e1", ...) over [0, t_final].
int cmd_simulate(const RunConfig &config, std::ostream &out);
/// Fidelity sweep; exit code 2 when any grid point failed.
int cmd_sweep(const RunConfig &config, std::ostream &out);
/// C-NOT truth table of the lightshift or CZ schedule.
int cmd_truth_table(const RunConfig &config, std::ostream &out);
/// Mode table with eta_max and rate at config.budget.
int cmd_modes(const RunConfig &config, std::ostream &out);

}  // namespace iontrap::cli
