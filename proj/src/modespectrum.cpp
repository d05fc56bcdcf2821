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

#include "iontrap/modespectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "iontrap/csv.hpp"
#include "json.hpp"

namespace iontrap {

namespace {

void check_bus_mode(int q) {
    if (q < 1 || q > kMaxBusMode)
        throw std::invalid_argument("mode q = " + std::to_string(q) + " out of range 1.." + std::to_string(kMaxBusMode));
}

void check_budget(double budget) {
    if (!std::isfinite(budget) || budget < 0.0) throw std::invalid_argument("eps^2 budget must be finite and >= 0");
}

}  // namespace

const std::array<double, kModeCount> &load_mode_frequencies() {
    static const std::array<double, kModeCount> freqs{1.0, std::sqrt(3.0), 2.41, 3.06, 3.68, 4.28};
    return freqs;
}

double mode_frequency(int q) {
    if (q < 1 || q > kModeCount) throw std::invalid_argument("mode q = " + std::to_string(q) + " out of range 1..6");
    return load_mode_frequencies()[static_cast<std::size_t>(q - 1)];
}

double min_relative_spacing(int q) {
    check_bus_mode(q);
    const auto &f = load_mode_frequencies();
    const double nu_q = f[static_cast<std::size_t>(q - 1)];
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= kModeCount; ++p) {
        if (p != q) best = std::min(best, std::abs(f[static_cast<std::size_t>(p - 1)] - nu_q));
    }
    return best / nu_q;
}

double eta_max(int q, double budget) {
    check_bus_mode(q);
    check_budget(budget);
    return 2.0 * std::sqrt(budget) * min_relative_spacing(q);
}

double max_rate(int q, double budget) { return eta_max(q, budget) * mode_frequency(q) / 2.0; }

ModeTable mode_table(double budget) {
    check_budget(budget);
    ModeTable t;
    t.budget = budget;
    for (int q = 1; q <= kModeCount; ++q) {
        ModeRow r;
        r.q = q;
        r.frequency = mode_frequency(q);
        if (q <= kMaxBusMode) {
            r.spacing = min_relative_spacing(q);
            r.eta_max = eta_max(q, budget);
            r.rate = max_rate(q, budget);
        }
        t.rows.push_back(r);
    }
    return t;
}

const PublishedModeTable &published_mode_table() {
    static const PublishedModeTable table{
        {{{1.0, 0}, {1.73, 2}, {2.41, 2}, {3.06, 2}, {3.68, 2}, {4.28, 2}}},
        {{{0.73, 2}, {0.39, 2}, {0.27, 2}, {0.20, 2}, {0.16, 2}}},
        {{{0.146, 3}, {0.08, 2}, {0.05, 2}, {0.04, 2}, {0.03, 2}}},
        {{{0.073, 3}, {0.069, 3}, {0.065, 3}, {0.061, 3}, {0.055, 3}}},
    };
    return table;
}

bool matches_printed(double x, PrintedValue printed) {
    const double scale = std::pow(10.0, printed.decimals);
    return std::abs(std::round(x * scale) - std::round(printed.value * scale)) < 0.5;
}

std::string mode_table_csv(const ModeTable &table, const std::vector<std::string> &header) {
    std::ostringstream os;
    write_csv_comments(os, header);
    os << csv_row({"q", "nu_over_nu1", "min_spacing", "eta_max", "max_rate"});
    auto cell = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string(); };
    for (const auto &r : table.rows)
        os << csv_row({std::to_string(r.q), format_double(r.frequency), cell(r.spacing), cell(r.eta_max), cell(r.rate)});
    return os.str();
}

std::string mode_table_json(const ModeTable &table, const std::vector<std::string> &header) {
    using nlohmann::json;
    auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["header"] = header;
    j["budget"] = table.budget;
    json rows = json::array();
    for (const auto &r : table.rows)
        rows.push_back({{"q", r.q},
                        {"nu_over_nu1", r.frequency},
                        {"min_spacing", opt(r.spacing)},
                        {"eta_max", opt(r.eta_max)},
                        {"max_rate", opt(r.rate)}});
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

}  // namespace iontrap
