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

// Run configuration for the command-line front end.
//
// File format: one "key = value" per line; '#' starts a comment; blank lines
// are ignored. Unknown keys and repeated keys are rejected. Values set on the
// command line override the file.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "iontrap/gates.hpp"
#include "iontrap/hamiltonians.hpp"
#include "iontrap/metrics.hpp"
#include "iontrap/propagator.hpp"

namespace iontrap::cli {

/// Bad command line or config; maps to exit code 1.
class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class RunConfig {
   public:
    RunConfig();

    /// Keys with their default values, in sorted order.
    static const std::map<std::string, std::string> &defaults();

    void load_file(const std::string &path);
    /// Parses the file format from a string; `origin` names it in errors.
    void load_text(const std::string &text, const std::string &origin);
    void set(const std::string &key, const std::string &value);
    /// "key=value".
    void set_assignment(const std::string &assignment);

    const std::string &get(const std::string &key) const;
    double get_double(const std::string &key) const;
    long get_int(const std::string &key) const;
    bool get_bool(const std::string &key) const;

    /// Every key as "key=value", sorted.
    std::vector<std::string> resolved_lines() const;
    const std::map<std::string, std::string> &values() const { return values_; }

    FidelityScheme scheme() const;
    double eta() const;
    /// 2 ions: CM and stretch modes; 1 ion: CM mode only. ion2 gets |e'>
    /// when aux_level is true.
    SystemConfig trap(bool aux_level = false) const;
    /// Resolves "auto" (nu_q/2 for lightshift, 0.01 nu_1 for CZ) and
    /// "resonant" (nu_q/2).
    double omega_prime(const SystemConfig &trap) const;
    PropagationSettings settings() const;
    FidelitySpec fidelity_spec() const;
    SweepOptions sweep_options() const;
    /// "default", "linear:lo:hi:n", "log:lo:hi:n" or "list:a,b,...".
    std::vector<double> grid(double nu_q) const;
    TwoQubitModel model() const;

   private:
    std::map<std::string, std::string> values_;
};

}  // namespace iontrap::cli
