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

#include "iontrap/hamiltonians.hpp"

#include <cmath>
#include <sstream>

namespace iontrap {

namespace {

constexpr cplx kI{0.0, 1.0};

CMatrix modes_kron(const std::vector<CMatrix> &per_mode) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (const auto &m : per_mode) out = kron(out, m);
    return out;
}

CMatrix quadrature(int n_max) {
    CMatrix x = CMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        x(n - 1, n) = std::sqrt(static_cast<double>(n));
        x(n, n - 1) = x(n - 1, n);
    }
    return x;
}

CMatrix local_sigma_plus(int levels, Transition t) {
    CMatrix s = CMatrix::Zero(levels, levels);
    s(upper_level(t), static_cast<int>(Level::g)) = 1.0;
    return s;
}

// Mode-space operator sum_p eta_p x_p.
CMatrix mode_position_sum(const SystemConfig &c) {
    const auto j = static_cast<std::size_t>(c.addressed_ion);
    std::size_t dim = 1;
    for (int n : c.fock) dim *= static_cast<std::size_t>(n) + 1;
    CMatrix total = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t p = 0; p < c.n_modes(); ++p) {
        std::vector<CMatrix> factors;
        for (std::size_t m = 0; m < c.n_modes(); ++m) {
            factors.push_back(m == p ? CMatrix(quadrature(c.fock[m]))
                                     : CMatrix::Identity(c.fock[m] + 1, c.fock[m] + 1));
        }
        total += c.eta[j][p] * modes_kron(factors);
    }
    return total;
}

// Trap rotation sum_p nu_p n_p plus the laser detuning on the addressed upper level.
Eigen::VectorXd interaction_generator(const SystemConfig &c, const Basis &basis) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(basis.dim()));
    const auto j = static_cast<std::size_t>(c.addressed_ion);
    const int up = upper_level(c.transition);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        double v = 0.0;
        for (std::size_t p = 0; p < c.n_modes(); ++p) v += c.mode_freqs[p] * basis.fock_of(i, p);
        if (basis.level_of(i, j) == up) v -= c.detuning;
        g[static_cast<Eigen::Index>(i)] = v;
    }
    return g;
}

// K = coeff * sigma_+^j (x) M + h.c.
CMatrix ion_mode_coupling(const SystemConfig &c, const Basis &basis, cplx coeff, const CMatrix &mode_op) {
    const auto j = static_cast<std::size_t>(c.addressed_ion);
    const CMatrix sp = local_sigma_plus(c.ion_levels[j], c.transition);
    CMatrix half = coeff * embed_ion_mode_operator(basis, j, sp, mode_op);
    CMatrix k = half + half.adjoint();
    return k;
}

Picture dressed_picture_of(const SystemConfig &c) {
    Picture p;
    p.kind = PictureKind::dressed_rotating;
    p.ion = c.addressed_ion;
    p.transition = c.transition;
    p.omega_prime = c.omega_prime();
    return p;
}

}  // namespace

std::string to_string(WaveType w) { return w == WaveType::travelling ? "travelling" : "standing"; }

WaveType parse_wave_type(const std::string &s) {
    if (s == "travelling" || s == "traveling") return WaveType::travelling;
    if (s == "standing" || s == "standing_node" || s == "standing-node") return WaveType::standing_node;
    throw std::invalid_argument("unknown wave type '" + s + "' (expected travelling or standing)");
}

std::string to_string(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::full_exact:
            return "full_exact";
        case HamiltonianKind::lamb_dicke_order1:
            return "lamb_dicke_order1";
        case HamiltonianKind::dressed_picture:
            return "dressed_picture";
        case HamiltonianKind::effective_jc:
            return "effective_jc";
        case HamiltonianKind::cz_red_sideband:
            return "cz_red_sideband";
    }
    return "unknown";
}

void SystemConfig::validate() const {
    if (mode_freqs.empty()) throw std::invalid_argument("at least one mode is required");
    for (std::size_t p = 0; p < mode_freqs.size(); ++p) {
        if (!std::isfinite(mode_freqs[p]) || mode_freqs[p] <= 0.0) {
            throw std::invalid_argument("mode frequencies must be finite and positive");
        }
        if (p > 0 && mode_freqs[p] <= mode_freqs[p - 1]) {
            throw std::invalid_argument("mode frequencies must be strictly increasing");
        }
    }
    if (ion_levels.empty()) throw std::invalid_argument("at least one ion is required");
    if (eta.size() != ion_levels.size()) throw std::invalid_argument("eta needs one row per ion");
    for (const auto &row : eta) {
        if (row.size() != mode_freqs.size()) throw std::invalid_argument("eta needs one entry per mode in every row");
        for (double e : row) {
            if (!std::isfinite(e) || e < 0.0) throw std::invalid_argument("Lamb-Dicke parameters must be finite and >= 0");
        }
    }
    if (fock.size() != mode_freqs.size()) throw std::invalid_argument("fock needs one truncation per mode");
    for (int n : fock) {
        if (n < 1) throw std::invalid_argument("Fock truncation must be >= 1");
    }
    for (int l : ion_levels) {
        if (l != 2 && l != 3) throw std::invalid_argument("ion level count must be 2 or 3");
    }
    if (!std::isfinite(rabi) || rabi < 0.0) throw std::invalid_argument("Rabi frequency must be finite and >= 0");
    if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
    if (!std::isfinite(laser_phase)) throw std::invalid_argument("laser phase must be finite");
    if (addressed_ion < 0 || static_cast<std::size_t>(addressed_ion) >= ion_levels.size()) {
        throw std::invalid_argument("addressed ion " + std::to_string(addressed_ion) + " out of range");
    }
    if (upper_level(transition) >= ion_levels[static_cast<std::size_t>(addressed_ion)]) {
        throw std::invalid_argument("addressed ion has no auxiliary level for transition " + to_string(transition));
    }
    if (bus_mode < 0 || static_cast<std::size_t>(bus_mode) >= mode_freqs.size()) {
        throw std::invalid_argument("bus mode " + std::to_string(bus_mode) + " out of range");
    }
}

double SystemConfig::debye_waller() const {
    double s = 0.0;
    for (double e : eta.at(static_cast<std::size_t>(addressed_ion))) s += e * e;
    return std::exp(-0.5 * s);
}

void SystemConfig::set_omega_prime(double omega_prime) {
    if (!std::isfinite(omega_prime) || omega_prime < 0.0) throw std::invalid_argument("Omega' must be finite and >= 0");
    rabi = omega_prime / debye_waller();
}

double SystemConfig::max_mode_freq() const { return mode_freqs.empty() ? 0.0 : mode_freqs.back(); }

BasisPtr SystemConfig::make_basis() const { return iontrap::make_basis(ion_levels, fock); }

SystemConfig SystemConfig::addressed_subsystem() const {
    validate();
    SystemConfig out = *this;
    out.ion_levels = {2};
    out.eta = {eta[static_cast<std::size_t>(addressed_ion)]};
    out.addressed_ion = 0;
    out.transition = Transition::g_e;
    return out;
}

SystemConfig single_ion_trap(double eta, int n_max) {
    SystemConfig c;
    c.mode_freqs = {1.0};
    c.eta = {{eta}};
    c.fock = {n_max};
    c.ion_levels = {2};
    c.set_omega_prime(0.5);
    return c;
}

SystemConfig two_ion_trap(double eta, int n_max, int ion2_levels) {
    SystemConfig c;
    c.mode_freqs = {1.0, std::sqrt(3.0)};
    // eta_p ~ nu_p^(-1/2); equal CM and stretch participation for both ions.
    const double stretch = eta * std::pow(3.0, -0.25);
    c.eta = {{eta, stretch}, {eta, stretch}};
    c.fock = {n_max, n_max};
    c.ion_levels = {2, ion2_levels};
    c.set_omega_prime(0.5);
    return c;
}

CMatrix FrameHamiltonian::at(double t) const {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("Hamiltonian time must be finite and >= 0");
    if (G.size() == 0) return K;
    const Eigen::Index n = K.rows();
    CMatrix h(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        h(a, a) = K(a, a);
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const cplx v = K(a, b) * std::polar(1.0, (G[a] - G[b]) * t);
            h(a, b) = v;
            h(b, a) = std::conj(v);
        }
    }
    return h;
}

CMatrix displacement_block(double eta, int n_max) {
    if (!std::isfinite(eta)) throw std::invalid_argument("eta must be finite");
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    const int big = 2 * (n_max + 1) + 16;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(big, big);
    for (int n = 1; n < big; ++n) {
        x(n - 1, n) = std::sqrt(static_cast<double>(n));
        x(n, n - 1) = x(n - 1, n);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const Eigen::MatrixXd &v = es.eigenvectors();
    Eigen::VectorXcd phase(big);
    for (int k = 0; k < big; ++k) phase[k] = std::polar(1.0, eta * es.eigenvalues()[k]);
    const CMatrix vk = v.topRows(n_max + 1).cast<cplx>();
    CMatrix d = vk * phase.asDiagonal() * vk.transpose();
    // Gross misrepresentation only; the propagators watch the top Fock level.
    for (int n = 0; n <= n_max / 2; ++n) {
        const double lost = 1.0 - d.col(n).squaredNorm();
        if (lost > 1e-4) {
            std::ostringstream os;
            os << "Fock truncation n_max=" << n_max << " cannot represent exp(i eta X) at eta=" << eta
               << " (column " << n << " loses " << lost << ")";
            throw NumericalError(os.str());
        }
    }
    return d;
}

FrameHamiltonian full_hamiltonian(const SystemConfig &config) {
    config.validate();
    const auto j = static_cast<std::size_t>(config.addressed_ion);
    FrameHamiltonian h;
    h.kind = HamiltonianKind::full_exact;
    h.picture = Picture::interaction();
    h.basis = config.make_basis();
    h.nu_max = config.max_mode_freq();
    std::vector<CMatrix> d, dc;
    for (std::size_t p = 0; p < config.n_modes(); ++p) {
        d.push_back(displacement_block(config.eta[j][p], config.fock[p]));
        dc.push_back(d.back().conjugate());
    }
    CMatrix m = modes_kron(d);
    if (config.wave == WaveType::standing_node) m = (m - modes_kron(dc)) / (2.0 * kI);
    h.K = ion_mode_coupling(config, *h.basis, config.rabi * std::polar(1.0, config.laser_phase), m);
    h.G = interaction_generator(config, *h.basis);
    return h;
}

Operator full_hamiltonian(const SystemConfig &config, double t) { return full_hamiltonian(config).operator_at(t); }

FrameHamiltonian lamb_dicke_hamiltonian(const SystemConfig &config) {
    config.validate();
    FrameHamiltonian h;
    h.kind = HamiltonianKind::lamb_dicke_order1;
    h.picture = Picture::interaction();
    h.basis = config.make_basis();
    h.nu_max = config.max_mode_freq();
    const CMatrix x = mode_position_sum(config);
    const CMatrix m = CMatrix::Identity(x.rows(), x.cols()) + kI * x;
    h.K = ion_mode_coupling(config, *h.basis, config.omega_prime() * std::polar(1.0, config.laser_phase), m);
    h.G = interaction_generator(config, *h.basis);
    return h;
}

Operator lamb_dicke_hamiltonian(const SystemConfig &config, double t) {
    return lamb_dicke_hamiltonian(config).operator_at(t);
}

FrameHamiltonian dressed_picture_hamiltonian(const SystemConfig &config) {
    config.validate();
    if (std::abs(config.detuning) > 1e-12) {
        throw std::invalid_argument("the dressed picture requires carrier resonance (detuning 0)");
    }
    FrameHamiltonian h;
    h.kind = HamiltonianKind::dressed_picture;
    h.picture = dressed_picture_of(config);
    h.basis = config.make_basis();
    h.nu_max = config.max_mode_freq();
    const double op = config.omega_prime();
    h.K = ion_mode_coupling(config, *h.basis, kI * op, mode_position_sum(config));
    const auto j = static_cast<std::size_t>(config.addressed_ion);
    const int up = upper_level(config.transition);
    h.G.resize(static_cast<Eigen::Index>(h.basis->dim()));
    for (std::size_t i = 0; i < h.basis->dim(); ++i) {
        double v = 0.0;
        for (std::size_t p = 0; p < config.n_modes(); ++p) v += config.mode_freqs[p] * h.basis->fock_of(i, p);
        const int l = h.basis->level_of(i, j);
        if (l == up) v += op;
        if (l == static_cast<int>(Level::g)) v -= op;
        h.G[static_cast<Eigen::Index>(i)] = v;
    }
    return h;
}

Operator dressed_picture_hamiltonian(const SystemConfig &config, double t) {
    return dressed_picture_hamiltonian(config).operator_at(t);
}

namespace {

CMatrix bus_annihilation(const SystemConfig &config, std::size_t q) {
    std::vector<CMatrix> factors;
    for (std::size_t m = 0; m < config.n_modes(); ++m) {
        if (m == q) {
            CMatrix a = CMatrix::Zero(config.fock[m] + 1, config.fock[m] + 1);
            for (int n = 1; n <= config.fock[m]; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
            factors.push_back(a);
        } else {
            factors.push_back(CMatrix::Identity(config.fock[m] + 1, config.fock[m] + 1));
        }
    }
    return modes_kron(factors);
}

}  // namespace

FrameHamiltonian effective_jc_hamiltonian(const SystemConfig &config, int mode, double rel_tol) {
    config.validate();
    if (mode < 0 || static_cast<std::size_t>(mode) >= config.n_modes()) {
        throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range");
    }
    const auto q = static_cast<std::size_t>(mode);
    const double nu = config.mode_freqs[q];
    const double target = nu / 2.0;
    if (std::abs(config.omega_prime() - target) > rel_tol * target) {
        std::ostringstream os;
        os.precision(12);
        os << "Jaynes-Cummings resonance needs Omega' = nu_q/2 = " << target << ", i.e. Omega = "
           << target / config.debye_waller() << "; got Omega = " << config.rabi << " (Omega' = " << config.omega_prime()
           << ")";
        throw std::invalid_argument(os.str());
    }
    FrameHamiltonian h;
    h.kind = HamiltonianKind::effective_jc;
    h.picture = dressed_picture_of(config);
    h.basis = config.make_basis();
    h.nu_max = config.max_mode_freq();
    const double eta = config.eta[static_cast<std::size_t>(config.addressed_ion)][q];
    h.K = ion_mode_coupling(config, *h.basis, kI * nu * eta / 2.0, bus_annihilation(config, q));
    h.G = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.basis->dim()));
    return h;
}

FrameHamiltonian rwa_sideband_hamiltonian(const SystemConfig &config) {
    config.validate();
    const auto q = static_cast<std::size_t>(config.bus_mode);
    FrameHamiltonian h;
    h.kind = HamiltonianKind::cz_red_sideband;
    h.picture = Picture::interaction();
    h.basis = config.make_basis();
    h.nu_max = config.max_mode_freq();
    const double g = config.omega_prime() * config.eta[static_cast<std::size_t>(config.addressed_ion)][q];
    const cplx c = config.wave == WaveType::travelling ? kI : cplx(1.0);
    h.K = ion_mode_coupling(config, *h.basis, g * c * std::polar(1.0, config.laser_phase), bus_annihilation(config, q));
    h.G = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.basis->dim()));
    return h;
}

SystemConfig red_sideband_config(SystemConfig config) {
    config.validate();
    config.detuning = -config.mode_freqs[static_cast<std::size_t>(config.bus_mode)];
    return config;
}

FrameHamiltonian cz_red_sideband_hamiltonian(const SystemConfig &config) {
    config.validate();
    const double nu = config.mode_freqs[static_cast<std::size_t>(config.bus_mode)];
    if (std::abs(config.detuning + nu) > 1e-12 * nu) {
        throw std::invalid_argument("red sideband drive needs detuning = -nu_q of the bus mode");
    }
    FrameHamiltonian h = full_hamiltonian(config);
    h.kind = HamiltonianKind::cz_red_sideband;
    return h;
}

Operator cz_red_sideband_hamiltonian(const SystemConfig &config, double t) {
    return cz_red_sideband_hamiltonian(config).operator_at(t);
}

double leakage_estimate(const SystemConfig &config, int q, int p) {
    config.validate();
    const auto n = static_cast<int>(config.n_modes());
    if (q < 0 || q >= n || p < 0 || p >= n) throw std::invalid_argument("mode index out of range");
    if (p == q) throw std::invalid_argument("leakage needs two distinct modes");
    const double nq = config.mode_freqs[static_cast<std::size_t>(q)];
    const double np = config.mode_freqs[static_cast<std::size_t>(p)];
    if (np == nq) throw std::invalid_argument("degenerate modes: leakage estimate diverges");
    const double eta = config.eta[static_cast<std::size_t>(config.addressed_ion)][static_cast<std::size_t>(q)];
    const double e = eta * nq / (2.0 * std::abs(np - nq));
    return e * e;
}

}  // namespace iontrap
