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

// iontrap: simulate, sweep, truth-table and modes subcommands.
//
// Every config key can be given as --key (underscores become dashes), via
// --set key=value, or in a --config file. Precedence: --set, then --key,
// then the file, then defaults.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "iontrap/cli/commands.hpp"
#include "iontrap/kernels.hpp"

namespace {

std::string flag_name(std::string key) {
    for (char &c : key) {
        if (c == '_') c = '-';
    }
    return "--" + key;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace iontrap::cli;
    CLI::App app{"Trapped-ion gate simulator: ion-mode dynamics, fidelity sweeps, C-NOT truth tables"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App *app;
        int (*run)(const RunConfig &, std::ostream &);
        std::string config_path;
        std::vector<std::string> assignments;
        std::map<std::string, std::string> flags;
    };
    std::vector<Sub> subs;
    subs.reserve(4);
    const std::vector<std::pair<std::string, int (*)(const RunConfig &, std::ostream &)>> commands{
        {"simulate", cmd_simulate}, {"sweep", cmd_sweep}, {"truth-table", cmd_truth_table}, {"modes", cmd_modes}};
    const std::map<std::string, std::string> descriptions{
        {"simulate", "Population time series of one ion and the trap modes"},
        {"sweep", "Average SWAP fidelity against Omega'/nu"},
        {"truth-table", "C-NOT truth table of a pulse schedule"},
        {"modes", "Normal-mode table with eta_max and maximum switching rate"}};
    for (const auto &[name, fn] : commands) {
        subs.push_back({app.add_subcommand(name, descriptions.at(name)), fn, {}, {}, {}});
        Sub &s = subs.back();
        s.app->add_option("--config", s.config_path, "key = value config file");
        s.app->add_option("--set", s.assignments, "Override a config key (key=value)")->take_all();
        for (const auto &[key, def] : RunConfig::defaults())
            s.app->add_option(flag_name(key), s.flags[key], "(default: " + def + ")");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    for (auto &s : subs) {
        if (!s.app->parsed()) continue;
        try {
            RunConfig config;
            if (!s.config_path.empty()) config.load_file(s.config_path);
            for (const auto &[key, value] : s.flags) {
                if (s.app->count(flag_name(key))) config.set(key, value);
            }
            for (const auto &a : s.assignments) config.set_assignment(a);
            if (!config.get_bool("deterministic")) throw UsageError("only deterministic runs are supported");
            const std::string &isa = config.get("isa");
            if (isa != "auto") {
                try {
                    iontrap::simd::set_active_isa(iontrap::simd::parse_isa(isa));
                } catch (const std::invalid_argument &e) {
                    throw UsageError(e.what());
                }
            }
            const std::string &path = config.get("output");
            if (path == "-") return s.run(config, std::cout);
            std::ostringstream buffer;
            const int code = s.run(config, buffer);
            std::ofstream file(path, std::ios::binary);
            if (!(file << buffer.str())) throw UsageError("cannot write output file '" + path + "'");
            return code;
        } catch (const UsageError &e) {
            std::cerr << "iontrap " << s.app->get_name() << ": " << e.what() << "\n";
            return kExitUsage;
        } catch (const iontrap::NumericalError &e) {
            std::cerr << "iontrap " << s.app->get_name() << ": numerical failure: " << e.what() << "\n";
            return kExitNumerical;
        } catch (const std::invalid_argument &e) {
            std::cerr << "iontrap " << s.app->get_name() << ": " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::exception &e) {
            std::cerr << "iontrap " << s.app->get_name() << ": " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    return kExitUsage;
}
