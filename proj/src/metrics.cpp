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

#include "iontrap/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "iontrap/csv.hpp"
#include "json.hpp"

namespace iontrap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

bool is_cz(FidelityScheme s) { return s != FidelityScheme::lightshift; }

// Inputs and targets must each be orthonormal sets of equal size.
void check_state_set(const StateSet &states, Eigen::Index dim) {
    if (states.inputs.empty() || states.inputs.size() != states.targets.size())
        throw std::invalid_argument("state set needs matching, non-empty input and target lists");
    for (const auto *set : {&states.inputs, &states.targets}) {
        for (std::size_t a = 0; a < set->size(); ++a) {
            if ((*set)[a].size() != dim) throw std::invalid_argument("state set dimension does not match the Hamiltonian");
            for (std::size_t b = a; b < set->size(); ++b) {
                const cplx g = (*set)[a].dot((*set)[b]);
                const double want = a == b ? 1.0 : 0.0;
                if (std::abs(g - want) > 1e-10) throw std::invalid_argument("state set is not orthonormal");
            }
        }
    }
}

double clamp_fidelity(double f) {
    if (!std::isfinite(f) || f > 1.0 + 1e-9 || f < -1e-12) throw NumericalError("average fidelity left [0, 1]");
    return std::clamp(f, 0.0, 1.0);
}

// Maximum of f on [a, b] for a unimodal f.
std::pair<double, double> golden_max(const std::function<double(double)> &f, double a, double b) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

void guard_state(const FrameHamiltonian &h, const CVector &psi, const PropagationSettings &settings) {
    if (std::abs(psi.norm() - 1.0) > settings.norm_tol)
        throw NumericalError("norm drift " + format_double(std::abs(psi.norm() - 1.0)) + " exceeds tolerance");
    StateVector{h.basis, psi, h.picture}.check_truncation_leak(settings.leak_bound);
}

FidelityResult maximize_spectral(const FrameHamiltonian &h, const StateSet &states, double window, std::size_t samples,
                                 const PropagationSettings &settings) {
    const SpectralPropagator sp(h);
    const double n_states = static_cast<double>(states.inputs.size());
    const double dt = samples > 1 ? window / static_cast<double>(samples - 1) : 0.0;
    std::vector<double> curve(samples, 0.0);
    for (std::size_t k = 0; k < states.inputs.size(); ++k) {
        const auto series = sp.overlap_series(states.inputs[k], states.targets[k], 0.0, dt, samples);
        for (std::size_t i = 0; i < samples; ++i) curve[i] += std::norm(series[i]) / n_states;
    }
    auto exact = [&](double t) {
        double f = 0.0;
        for (std::size_t k = 0; k < states.inputs.size(); ++k)
            f += std::norm(sp.overlap(states.inputs[k], states.targets[k], 0.0, t)) / n_states;
        return f;
    };

    // Refine the three highest sampled local maxima.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < samples; ++i) {
        const bool left = i == 0 || curve[i] >= curve[i - 1];
        const bool right = i + 1 == samples || curve[i] >= curve[i + 1];
        if (left && right) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return curve[a] > curve[b]; });
    if (peaks.size() > 3) peaks.resize(3);

    FidelityResult best{curve[peaks.front()], static_cast<double>(peaks.front()) * dt, window, samples};
    if (samples > 1) {
        for (std::size_t i : peaks) {
            const double a = i == 0 ? 0.0 : static_cast<double>(i - 1) * dt;
            const double b = std::min(window, static_cast<double>(i + 1) * dt);
            const auto [t, f] = golden_max(exact, a, b);
            if (f > best.fidelity) {
                best.fidelity = f;
                best.t_of_max = t;
            }
        }
    }
    for (const auto &in : states.inputs) guard_state(h, sp.evolve(in, 0.0, best.t_of_max), settings);
    best.fidelity = clamp_fidelity(best.fidelity);
    return best;
}

// Average fidelity at every observer call of evolve_observed over [t0, t1].
std::pair<std::vector<double>, std::vector<double>> observed_curve(const FrameHamiltonian &h,
                                                                   const std::vector<StateVector> &starts,
                                                                   const StateSet &states, double t0, double t1,
                                                                   const PropagationSettings &settings) {
    std::vector<double> times, curve;
    const double n_states = static_cast<double>(starts.size());
    for (std::size_t k = 0; k < starts.size(); ++k) {
        std::size_t idx = 0;
        evolve_observed(h, starts[k], t0, t1, settings, [&](double t, const StateVector &psi) {
            const double f = std::norm(states.targets[k].dot(psi.amplitudes)) / n_states;
            if (k == 0) {
                times.push_back(t);
                curve.push_back(f);
            } else {
                curve.at(idx) += f;
            }
            ++idx;
        });
    }
    return {times, curve};
}

FidelityResult maximize_integrated(const FrameHamiltonian &h, const StateSet &states, double window,
                                   const PropagationSettings &settings) {
    std::vector<StateVector> starts;
    for (const auto &in : states.inputs) starts.push_back({h.basis, in, h.picture});
    FidelityResult out{0.0, 0.0, window, 1};
    if (window == 0.0) {
        for (std::size_t k = 0; k < starts.size(); ++k)
            out.fidelity += std::norm(states.targets[k].dot(states.inputs[k])) / static_cast<double>(starts.size());
        out.fidelity = clamp_fidelity(out.fidelity);
        return out;
    }
    const auto [times, curve] = observed_curve(h, starts, states, 0.0, window, settings);
    out.samples = times.size();
    const auto best = static_cast<std::size_t>(std::max_element(curve.begin(), curve.end()) - curve.begin());
    const double a = best == 0 ? 0.0 : times[best - 1];
    const double b = best + 1 == times.size() ? times[best] : times[best + 1];

    // Resample the bracket at 1/64 of the step.
    PropagationSettings fine = settings;
    fine.step = settings.resolved_step(h.nu_max) / 64.0;
    fine.convergence_check = false;
    std::vector<StateVector> mid;
    for (const auto &s : starts) mid.push_back(a > 0.0 ? evolve(h, s, 0.0, a, settings) : s);
    const auto [ft, fc] = observed_curve(h, mid, states, a, b, fine);
    const auto j = static_cast<std::size_t>(std::max_element(fc.begin(), fc.end()) - fc.begin());
    out.fidelity = clamp_fidelity(fc[j]);
    out.t_of_max = ft[j];
    return out;
}

double fastest_frequency(const SystemConfig &system) {
    return system.max_mode_freq() + 2.0 * system.omega_prime() + std::abs(system.detuning);
}

}  // namespace

std::string to_string(FidelityScheme s) {
    switch (s) {
        case FidelityScheme::cz_travelling: return "cz_travelling";
        case FidelityScheme::cz_standing: return "cz_standing";
        case FidelityScheme::lightshift: return "lightshift";
    }
    return "?";
}

FidelityScheme parse_fidelity_scheme(const std::string &s) {
    if (s == "cz_travelling" || s == "cz-travelling" || s == "cz_traveling") return FidelityScheme::cz_travelling;
    if (s == "cz_standing" || s == "cz-standing") return FidelityScheme::cz_standing;
    if (s == "lightshift" || s == "lb") return FidelityScheme::lightshift;
    throw std::invalid_argument("unknown fidelity scheme '" + s + "' (cz_travelling, cz_standing, lightshift)");
}

std::string to_string(FidelityEngine e) { return e == FidelityEngine::spectral ? "spectral" : "integrator"; }

FidelityEngine parse_fidelity_engine(const std::string &s) {
    if (s == "spectral") return FidelityEngine::spectral;
    if (s == "integrator") return FidelityEngine::integrator;
    throw std::invalid_argument("unknown engine '" + s + "' (spectral, integrator)");
}

std::string to_string(ModeSet m) { return m == ModeSet::all ? "all" : "bus_only"; }

ModeSet parse_mode_set(const std::string &s) {
    if (s == "all" || s == "both") return ModeSet::all;
    if (s == "bus_only" || s == "bus" || s == "cm_only") return ModeSet::bus_only;
    throw std::invalid_argument("unknown mode set '" + s + "' (all, bus_only)");
}

void FidelitySpec::validate() const {
    if (!std::isfinite(eta) || eta <= 0.0) throw std::invalid_argument("eta must be > 0");
    if (!std::isfinite(window_factor) || window_factor <= 0.0) throw std::invalid_argument("window factor must be > 0");
    if (min_samples < 2) throw std::invalid_argument("the window needs at least 2 samples");
    if (!std::isfinite(samples_per_period) || samples_per_period < 2.0)
        throw std::invalid_argument("samples per period must be >= 2");
}

StateSet fidelity_states(FidelityScheme scheme, const Basis &basis, std::size_t mode) {
    if (basis.num_ions() != 1) throw std::invalid_argument("fidelity states need a single-ion basis");
    if (mode >= basis.num_modes() || basis.n_max(mode) < 1)
        throw std::invalid_argument("fidelity states need the bus mode with n_max >= 1");
    const auto b = std::make_shared<const Basis>(basis);
    const int levels = basis.ion_levels(0);
    std::vector<int> zero(basis.num_modes(), 0), one = zero;
    one[mode] = 1;
    StateSet s;
    if (scheme == FidelityScheme::lightshift) {
        const CVector minus = dressed_ket(levels, -1), plus = dressed_ket(levels, +1);
        s.inputs = {product_state(b, {minus}, zero).amplitudes, product_state(b, {minus}, one).amplitudes};
        s.targets = {s.inputs[0], product_state(b, {plus}, zero).amplitudes};
    } else {
        const CVector g = ion_ket(levels, Level::g), e = ion_ket(levels, Level::e);
        s.inputs = {product_state(b, {g}, zero).amplitudes, product_state(b, {g}, one).amplitudes};
        s.targets = {s.inputs[0], product_state(b, {e}, zero).amplitudes};
    }
    return s;
}

SystemConfig fidelity_system(const FidelitySpec &spec, const SystemConfig &trap, double omega_prime) {
    spec.validate();
    SystemConfig sys = trap.addressed_subsystem();
    const auto bus = static_cast<std::size_t>(sys.bus_mode);
    const double eta_bus = sys.eta[0][bus];
    if (std::abs(eta_bus - spec.eta) > 1e-12 * std::max(1.0, spec.eta))
        throw std::invalid_argument("fidelity spec eta " + format_double(spec.eta) +
                                    " differs from the trap's bus-mode eta " + format_double(eta_bus));
    if (spec.modes == ModeSet::bus_only) {
        sys.mode_freqs = {sys.mode_freqs[bus]};
        sys.eta = {{eta_bus}};
        sys.fock = {sys.fock[bus]};
        sys.bus_mode = 0;
    }
    sys.wave = spec.scheme == FidelityScheme::cz_standing ? WaveType::standing_node : WaveType::travelling;
    sys.laser_phase = 0.0;
    sys.detuning = 0.0;
    if (is_cz(spec.scheme)) sys = red_sideband_config(sys);
    sys.set_omega_prime(omega_prime);
    sys.validate();
    return sys;
}

double ideal_swap_time(const FidelitySpec &spec, const SystemConfig &system) {
    const double eta = system.eta[static_cast<std::size_t>(system.addressed_ion)][static_cast<std::size_t>(system.bus_mode)];
    if (spec.scheme == FidelityScheme::lightshift)
        return kPi / (system.mode_freqs[static_cast<std::size_t>(system.bus_mode)] * eta);
    const double op = system.omega_prime();
    if (op == 0.0) return 0.0;
    return kPi / (2.0 * op * eta);
}

FidelityResult maximize_fidelity(const FrameHamiltonian &h, const StateSet &states, double window,
                                 std::size_t samples, FidelityEngine engine, const PropagationSettings &settings) {
    settings.validate();
    check_state_set(states, static_cast<Eigen::Index>(h.basis->dim()));
    if (!std::isfinite(window) || window < 0.0) throw std::invalid_argument("window must be finite and >= 0");
    if (samples == 0) throw std::invalid_argument("window contains no samples");
    if (window == 0.0) samples = 1;
    if (engine == FidelityEngine::spectral) return maximize_spectral(h, states, window, samples, settings);
    return maximize_integrated(h, states, window, settings);
}

FidelityResult swap_fidelity(const FidelitySpec &spec, double omega_prime, const SystemConfig &trap,
                             const PropagationSettings &settings) {
    const SystemConfig sys = fidelity_system(spec, trap, omega_prime);
    const FrameHamiltonian h = full_hamiltonian(sys);
    const StateSet states = fidelity_states(spec.scheme, *h.basis, static_cast<std::size_t>(sys.bus_mode));
    // CZ at Omega' = 0 has no dynamics; the window collapses to t = 0.
    const double window = spec.window_factor * ideal_swap_time(spec, sys);
    const double periods = window * fastest_frequency(sys) / (2.0 * kPi);
    const auto samples =
        std::max(spec.min_samples, static_cast<std::size_t>(std::ceil(periods * spec.samples_per_period)) + 1);
    return maximize_fidelity(h, states, window, samples, spec.engine, settings);
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SweepPoint &p) { return !p.ok; }));
}

std::optional<double> SweepResult::width() const {
    if (!width_lo || !width_hi) return std::nullopt;
    return *width_hi - *width_lo;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n == 0 || !(hi >= lo)) throw std::invalid_argument("linear grid needs n > 0 and hi >= lo");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (n == 0 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs n > 0 and 0 < lo <= hi");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_grid(FidelityScheme scheme, double nu_q) {
    switch (scheme) {
        case FidelityScheme::cz_travelling: return log_grid(1e-3 * nu_q, 1e-1 * nu_q, 200);
        case FidelityScheme::cz_standing: return log_grid(1e-2 * nu_q, 3.0 * nu_q, 200);
        case FidelityScheme::lightshift: return linear_grid(0.48 * nu_q, 0.52 * nu_q, 200);
    }
    return {};
}

namespace {

// Crossing of f = level between a (f(a) >= level) and b (f(b) < level).
double bisect_crossing(const std::function<double(double)> &f, double a, double b, double level, bool geometric,
                       double rel_tol) {
    for (int it = 0; it < 60 && std::abs(b - a) > rel_tol * std::max(std::abs(a), std::abs(b)); ++it) {
        const double m = geometric && a > 0.0 && b > 0.0 ? std::sqrt(a * b) : 0.5 * (a + b);
        if (f(m) >= level)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

SweepResult sweep(const FidelitySpec &spec, const std::vector<double> &grid, const SystemConfig &trap,
                  const PropagationSettings &settings, const SweepOptions &options) {
    spec.validate();
    settings.validate();
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw std::invalid_argument("sweep grid must be strictly increasing");
    if (grid.front() < 0.0) throw std::invalid_argument("sweep grid must be >= 0");
    if (!(options.threshold > 0.0 && options.threshold < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
    fidelity_system(spec, trap, grid.front());  // surfaces config errors before fan-out

    SweepResult out;
    out.scheme = spec.scheme;
    out.eta = spec.eta;
    out.threshold = options.threshold;
    out.points.resize(grid.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            SweepPoint &p = out.points[i];
            p.omega_over_nu = grid[i];
            try {
                const auto r = swap_fidelity(spec, grid[i], trap, settings);
                p.fidelity = r.fidelity;
                p.t_of_max = r.t_of_max;
            } catch (const std::exception &e) {
                p.ok = false;
                p.fidelity = 0.0;
                p.error = e.what();
            }
        }
    };
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const auto &pts = out.points;
    const double thr = options.threshold;
    auto fid = [&](double op) { return swap_fidelity(spec, op, trap, settings).fidelity; };
    auto refine = [&](double a, double b, bool geometric) {
        if (!options.refine) return 0.5 * (a + b);
        try {
            return bisect_crossing(fid, a, b, thr, geometric, options.refine_rel_tol);
        } catch (const std::exception &) {
            return 0.5 * (a + b);
        }
    };

    if (is_cz(spec.scheme)) {
        if (pts.front().ok && pts.front().fidelity >= thr) {
            std::size_t i = 1;
            while (i < pts.size() && pts[i].ok && pts[i].fidelity >= thr) ++i;
            if (i < pts.size() && pts[i].ok) out.threshold_omega = refine(grid[i - 1], grid[i], grid[i - 1] > 0.0);
        }
    }

    std::size_t peak = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].ok && (peak == pts.size() || pts[i].fidelity > pts[peak].fidelity)) peak = i;
    if (peak < pts.size()) {
        out.peak_omega = grid[peak];
        out.peak_fidelity = pts[peak].fidelity;
        if (options.refine && spec.scheme == FidelityScheme::lightshift && peak > 0 && peak + 1 < pts.size()) {
            try {
                const auto [x, f] = golden_max(fid, grid[peak - 1], grid[peak + 1]);
                if (f > *out.peak_fidelity) {
                    out.peak_omega = x;
                    out.peak_fidelity = f;
                }
            } catch (const std::exception &) {
            }
        }
        if (pts[peak].fidelity >= thr) {
            std::size_t lo = peak, hi = peak;
            while (lo > 0 && pts[lo - 1].ok && pts[lo - 1].fidelity >= thr) --lo;
            while (hi + 1 < pts.size() && pts[hi + 1].ok && pts[hi + 1].fidelity >= thr) ++hi;
            const bool geometric = is_cz(spec.scheme);
            if (lo > 0 && pts[lo - 1].ok) out.width_lo = refine(grid[lo], grid[lo - 1], geometric);
            if (hi + 1 < pts.size() && pts[hi + 1].ok) out.width_hi = refine(grid[hi], grid[hi + 1], geometric);
        }
    }
    return out;
}

double switching_rate(FidelityScheme scheme, double eta, const SystemConfig &trap, double omega_prime_max) {
    if (!std::isfinite(eta) || eta < 0.0) throw std::invalid_argument("eta must be >= 0");
    if (scheme == FidelityScheme::lightshift) {
        trap.validate();
        return eta * trap.mode_freqs[static_cast<std::size_t>(trap.bus_mode)] / 2.0;
    }
    if (!std::isfinite(omega_prime_max) || omega_prime_max < 0.0)
        throw std::invalid_argument("omega_prime_max must be >= 0");
    return eta * omega_prime_max * std::exp(-eta * eta / 2.0);
}

std::optional<StabilityBand> stability_band(const SweepResult &result, double nu_q) {
    if (!result.width_lo || !result.width_hi) return std::nullopt;
    StabilityBand b;
    b.centre = nu_q / 2.0;
    b.lo = *result.width_lo;
    b.hi = *result.width_hi;
    b.half_width_rel = (b.hi - b.lo) / 2.0 / b.centre;
    b.asymmetry_rel = ((b.hi + b.lo) / 2.0 - b.centre) / b.centre;
    return b;
}

std::optional<StabilityBand> intensity_stability_band(const SystemConfig &trap, const PropagationSettings &settings,
                                                      const SweepOptions &options) {
    trap.validate();
    FidelitySpec spec;
    spec.scheme = FidelityScheme::lightshift;
    spec.eta = trap.eta[static_cast<std::size_t>(trap.addressed_ion)][static_cast<std::size_t>(trap.bus_mode)];
    const double nu_q = trap.mode_freqs[static_cast<std::size_t>(trap.bus_mode)];
    return stability_band(sweep(spec, default_grid(spec.scheme, nu_q), trap, settings, options), nu_q);
}

void write_sweep_csv(std::ostream &os, const SweepResult &result, const std::vector<std::string> &header) {
    write_csv_comments(os, header);
    os << csv_row({"omega_over_nu", "fidelity", "t_of_max", "ok", "error"});
    for (const auto &p : result.points)
        os << csv_row({format_double(p.omega_over_nu), format_double(p.fidelity), format_double(p.t_of_max),
                       p.ok ? "1" : "0", p.error});
}

std::string sweep_to_json(const SweepResult &result, const std::vector<std::string> &header) {
    using nlohmann::json;
    auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["header"] = header;
    j["scheme"] = to_string(result.scheme);
    j["eta"] = result.eta;
    j["threshold"] = result.threshold;
    j["threshold_omega"] = opt(result.threshold_omega);
    j["peak_omega"] = opt(result.peak_omega);
    j["peak_fidelity"] = opt(result.peak_fidelity);
    j["width_lo"] = opt(result.width_lo);
    j["width_hi"] = opt(result.width_hi);
    j["width"] = opt(result.width());
    j["failures"] = result.failures();
    json pts = json::array();
    for (const auto &p : result.points) {
        json e{{"omega_over_nu", p.omega_over_nu}, {"fidelity", p.fidelity}, {"t_of_max", p.t_of_max}, {"ok", p.ok}};
        if (!p.ok) e["error"] = p.error;
        pts.push_back(std::move(e));
    }
    j["points"] = std::move(pts);
    return j.dump(2) + "\n";
}

}  // namespace iontrap
