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

// Normal-mode frequencies of a linear ion string and the Lamb-Dicke limits
// they impose on lightshift gates driven through a single mode.
//
// Mode q (1-based) has frequency nu_q / nu_1, roughly independent of the
// number of ions. Driving mode q leaks population into its closest neighbour
// with eps^2 = (eta nu_q / (2 |nu_p - nu_q|))^2.

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace iontrap {

inline constexpr int kModeCount = 6;
/// Highest q with a neighbour on both sides of the tabulated range.
inline constexpr int kMaxBusMode = 5;

/// {1, sqrt 3, 2.41, 3.06, 3.68, 4.28}.
const std::array<double, kModeCount> &load_mode_frequencies();

/// nu_q / nu_1 for q in 1..6.
double mode_frequency(int q);

/// min over p != q of |nu_p - nu_q| / nu_q, q in 1..5.
double min_relative_spacing(int q);

/// 2 sqrt(budget) min_relative_spacing(q); q in 1..5, budget >= 0.
double eta_max(int q, double budget = 0.01);

/// eta_max(q) nu_q / (2 nu_1).
double max_rate(int q, double budget = 0.01);

struct ModeRow {
    int q = 0;
    double frequency = 0.0;
    std::optional<double> spacing;
    std::optional<double> eta_max;
    std::optional<double> rate;
};

struct ModeTable {
    double budget = 0.01;
    std::vector<ModeRow> rows;
};

ModeTable mode_table(double budget = 0.01);

/// A value as printed in the published table, with its number of decimals.
struct PrintedValue {
    double value;
    int decimals;
};

struct PublishedModeTable {
    std::array<PrintedValue, kModeCount> frequency;
    std::array<PrintedValue, kMaxBusMode> spacing;
    std::array<PrintedValue, kMaxBusMode> eta_max;
    std::array<PrintedValue, kMaxBusMode> rate;
};

/// The reference table at eps^2 = 0.01.
const PublishedModeTable &published_mode_table();

/// True when x rounds to the printed value at the printed number of decimals.
bool matches_printed(double x, PrintedValue printed);

/// CSV (RFC 4180) with header comments; columns q, nu_over_nu1, min_spacing,
/// eta_max, max_rate. Blank cells where a value is undefined.
std::string mode_table_csv(const ModeTable &table, const std::vector<std::string> &header = {});
std::string mode_table_json(const ModeTable &table, const std::vector<std::string> &header = {});

}  // namespace iontrap
