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

#include "iontrap/modespectrum.hpp"
#include "json.hpp"

namespace iontrap {
namespace {

TEST(ModeFrequencies, TabulatedValues) {
    EXPECT_DOUBLE_EQ(mode_frequency(1), 1.0);
    EXPECT_DOUBLE_EQ(mode_frequency(2), std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(mode_frequency(4), 3.06);
    const auto &f = load_mode_frequencies();
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_GT(f[i], f[i - 1]);
    EXPECT_THROW(mode_frequency(0), std::invalid_argument);
    EXPECT_THROW(mode_frequency(7), std::invalid_argument);
}

TEST(ModeSpacing, DecreasesWithOrderAndMatchesPrintedRow) {
    const auto &printed = published_mode_table();
    for (int q = 1; q <= kMaxBusMode; ++q) {
        EXPECT_TRUE(matches_printed(min_relative_spacing(q), printed.spacing[static_cast<std::size_t>(q - 1)])) << q;
        if (q > 1) EXPECT_LT(min_relative_spacing(q), min_relative_spacing(q - 1));
    }
    // The closest mode is the next-highest one.
    for (int q = 1; q <= kMaxBusMode; ++q)
        EXPECT_DOUBLE_EQ(min_relative_spacing(q), (mode_frequency(q + 1) - mode_frequency(q)) / mode_frequency(q));
}

TEST(EtaMax, ExamplesAndScaling) {
    EXPECT_NEAR(eta_max(1), 2.0 * 0.1 * (std::sqrt(3.0) - 1.0), 1e-15);
    EXPECT_NEAR(eta_max(1), 0.146, 5e-4);
    EXPECT_NEAR(eta_max(2), 0.08, 5e-3);
    EXPECT_EQ(eta_max(1, 0.0), 0.0);
    for (int q = 1; q <= kMaxBusMode; ++q) EXPECT_NEAR(eta_max(q, 0.0025), eta_max(q) / 2.0, 1e-15);
    EXPECT_THROW(eta_max(6), std::invalid_argument);
    EXPECT_THROW(eta_max(1, -0.1), std::invalid_argument);
}

TEST(EtaMax, MatchesPrintedRowAtPrintedPrecision) {
    const auto &printed = published_mode_table();
    for (int q = 1; q <= kMaxBusMode; ++q)
        EXPECT_TRUE(matches_printed(eta_max(q), printed.eta_max[static_cast<std::size_t>(q - 1)])) << q;
}

TEST(MaxRate, StrictlyDecreasingWithModeOrder) {
    for (int q = 2; q <= kMaxBusMode; ++q) EXPECT_LT(max_rate(q), max_rate(q - 1)) << q;
    EXPECT_NEAR(max_rate(1), 0.073, 5e-4);
}

TEST(MaxRate, RecomputedValuesAgainstPrintedRow) {
    // Recomputed from the frequency row: 0.0732, 0.0678, 0.0650, 0.0620, 0.0600.
    const double expected[] = {0.0732051, 0.0677949, 0.0650000, 0.0620000, 0.0600000};
    const auto &printed = published_mode_table();
    for (int q = 1; q <= kMaxBusMode; ++q) EXPECT_NEAR(max_rate(q), expected[q - 1], 1e-7) << q;
    // Only q = 1 and q = 3 agree with the printed row.
    EXPECT_TRUE(matches_printed(max_rate(1), printed.rate[0]));
    EXPECT_FALSE(matches_printed(max_rate(2), printed.rate[1]));
    EXPECT_TRUE(matches_printed(max_rate(3), printed.rate[2]));
    EXPECT_FALSE(matches_printed(max_rate(4), printed.rate[3]));
    EXPECT_FALSE(matches_printed(max_rate(5), printed.rate[4]));
    // The printed row follows from the rounded eta_max row except at q = 3.
    for (int q : {1, 2, 4, 5}) {
        const auto i = static_cast<std::size_t>(q - 1);
        EXPECT_TRUE(matches_printed(printed.eta_max[i].value * mode_frequency(q) / 2.0, printed.rate[i])) << q;
    }
    EXPECT_FALSE(matches_printed(printed.eta_max[2].value * mode_frequency(3) / 2.0, printed.rate[2]));
}

TEST(MatchesPrinted, RoundsAtPrintedDecimals) {
    EXPECT_TRUE(matches_printed(0.0784, {0.08, 2}));
    EXPECT_FALSE(matches_printed(0.0749, {0.08, 2}));
    EXPECT_TRUE(matches_printed(0.1464, {0.146, 3}));
}

TEST(ModeTable, SixRowsWithBlankLastEntries) {
    const ModeTable t = mode_table();
    ASSERT_EQ(t.rows.size(), 6u);
    EXPECT_FALSE(t.rows[5].eta_max.has_value());
    const std::string csv = mode_table_csv(t, {"units: nu_1"});
    EXPECT_NE(csv.find("q,nu_over_nu1,min_spacing,eta_max,max_rate\r\n"), std::string::npos);
    EXPECT_NE(csv.find("\r\n6,4.28,,,\r\n"), std::string::npos);
    const auto j = nlohmann::json::parse(mode_table_json(t));
    EXPECT_EQ(j["rows"].size(), 6u);
    EXPECT_TRUE(j["rows"][5]["eta_max"].is_null());
    EXPECT_DOUBLE_EQ(j["rows"][0]["eta_max"].get<double>(), eta_max(1));
}

}  // namespace
}  // namespace iontrap
