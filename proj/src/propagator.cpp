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

#include "iontrap/propagator.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "iontrap/kernels.hpp"

namespace iontrap {

namespace {

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_interval(double t0, double t1) {
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw std::invalid_argument("evolution times must be finite");
    if (t0 < 0.0) throw std::invalid_argument("evolution must start at t0 >= 0");
    if (t1 < t0) throw std::invalid_argument("evolution needs t1 >= t0");
}

void check_normalized(const StateVector &s, double tol) {
    if (std::abs(s.norm() - 1.0) > tol) {
        std::ostringstream os;
        os << "initial state is not normalized (norm " << s.norm() << ")";
        throw std::invalid_argument(os.str());
    }
}

// Flat indices sitting in the top Fock level of each mode.
std::vector<std::vector<std::size_t>> top_level_indices(const Basis &basis) {
    std::vector<std::vector<std::size_t>> out(basis.num_modes());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        for (std::size_t m = 0; m < basis.num_modes(); ++m) {
            if (basis.fock_of(i, m) == basis.n_max(m)) out[m].push_back(i);
        }
    }
    return out;
}

struct StepGuard {
    const PropagationSettings &settings;
    std::vector<std::vector<std::size_t>> top;

    void check(const cplx *psi, std::size_t n, double t) const {
        const double norm = std::sqrt(simd::kernels().norm2(psi, n));
        if (std::abs(norm - 1.0) > settings.norm_tol) {
            std::ostringstream os;
            os << std::setprecision(12) << "norm drifted to " << norm << " at t=" << t << " (tolerance " << settings.norm_tol << ")";
            throw NumericalError(os.str());
        }
        for (std::size_t m = 0; m < top.size(); ++m) {
            double p = 0.0;
            for (std::size_t i : top[m]) p += std::norm(psi[i]);
            if (p > settings.leak_bound) {
                std::ostringstream os;
                os << "truncation leak: mode " << m << " top Fock population " << p << " at t=" << t << " exceeds "
                   << settings.leak_bound << "; increase the Fock truncation";
                throw NumericalError(os.str());
            }
        }
    }
};

// exp(-i h H) for Hermitian H.
CMatrix hermitian_exponential(const CMatrix &h, double step) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) phase[k] = std::polar(1.0, -step * es.eigenvalues()[k]);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXcd diagonal_phase(const Eigen::VectorXd &g, double t) {
    Eigen::VectorXcd d(g.size());
    for (Eigen::Index a = 0; a < g.size(); ++a) d[a] = std::polar(1.0, g[a] * t);
    return d;
}

// Step matrix in the co-rotating variable: exp(-iGh/2) exp(-ihA) exp(-iGh/2)
// for the eigendecomposed A. G = 0 with A = K + G gives the exact step.
RowMatrix frame_step_matrix(const Eigen::SelfAdjointEigenSolver<CMatrix> &es, const Eigen::VectorXd &g, double step) {
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phase.size(); ++k) phase[k] = std::polar(1.0, -step * es.eigenvalues()[k]);
    const Eigen::VectorXcd half = diagonal_phase(g, -step / 2.0);
    CMatrix w = half.asDiagonal() * (es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint()) *
                half.asDiagonal();
    // The step matrix is applied up to ~1e6 times; one Newton-Schulz pass
    // W (3 - W^dagger W) / 2 removes the eigenvector unitarity defect.
    const CMatrix gram = w.adjoint() * w;
    w = w * (1.5 * CMatrix::Identity(w.rows(), w.cols()) - 0.5 * gram);
    return w;
}

std::vector<StateVector> run_frame(const FrameHamiltonian &h, const std::vector<StateVector> &states, double t0,
                                   double t1, const PropagationSettings &settings, const Observer *observer) {
    settings.validate();
    check_interval(t0, t1);
    for (const auto &s : states) {
        if (!(*s.basis == *h.basis)) throw std::invalid_argument("state and Hamiltonian live on different bases");
        if (!(s.picture == h.picture)) {
            throw std::invalid_argument("state is in the " + s.picture.describe() + " picture but the Hamiltonian is in the " +
                                        h.picture.describe() + " picture; transform it first");
        }
        check_normalized(s, settings.norm_tol);
    }
    const double step = settings.resolved_step(h.nu_max);
    const auto dim = h.basis->dim();
    if (static_cast<std::size_t>(h.G.size()) != dim || static_cast<std::size_t>(h.K.rows()) != dim) {
        throw std::invalid_argument("frame Hamiltonian K and G must match the basis dimension");
    }
    const auto n_full = static_cast<std::size_t>(std::floor((t1 - t0) / step));
    const double rest = (t1 - t0) - static_cast<double>(n_full) * step;
    const bool partial = rest > 1e-9 * step;

    const bool lab = settings.method == IntegrationMethod::lab_midpoint;
    CMatrix generator = h.K;
    if (!lab) generator.diagonal() += h.G.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(generator);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd none = Eigen::VectorXd::Zero(h.G.size());
    const Eigen::VectorXd &split = lab ? h.G : none;
    const RowMatrix w = frame_step_matrix(es, split, step);
    const RowMatrix w_rest = partial ? frame_step_matrix(es, split, rest) : RowMatrix();

    StepGuard guard{settings, top_level_indices(*h.basis)};
    const auto &kern = simd::kernels();
    std::vector<StateVector> out;
    for (const auto &s : states) {
        CVector phi = diagonal_phase(h.G, -t0).cwiseProduct(s.amplitudes);
        CVector next(phi.size());
        guard.check(phi.data(), dim, t0);
        auto notify = [&](double t) {
            if (observer) (*observer)(t, StateVector{h.basis, diagonal_phase(h.G, t).cwiseProduct(phi), h.picture});
        };
        notify(t0);
        for (std::size_t k = 0; k < n_full; ++k) {
            kern.cmatvec(w.data(), phi.data(), next.data(), dim, dim);
            phi.swap(next);
            const double t = t0 + static_cast<double>(k + 1) * step;
            guard.check(phi.data(), dim, t);
            notify(t);
        }
        if (partial) {
            kern.cmatvec(w_rest.data(), phi.data(), next.data(), dim, dim);
            phi.swap(next);
            guard.check(phi.data(), dim, t1);
            notify(t1);
        }
        out.push_back({h.basis, diagonal_phase(h.G, t1).cwiseProduct(phi), h.picture});
    }

    if (settings.convergence_check) {
        PropagationSettings half = settings;
        half.step = step / 2.0;
        half.convergence_check = false;
        const auto fine = run_frame(h, states, t0, t1, half, nullptr);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double diff = (fine[i].amplitudes - out[i].amplitudes).norm();
            if (diff > settings.convergence_tol) {
                std::ostringstream os;
                os << "step-halving check failed: states at h=" << step << " and h/2 differ by " << diff
                   << " (tolerance " << settings.convergence_tol << "); reduce the step";
                throw NumericalError(os.str());
            }
        }
    }
    return out;
}

}  // namespace

std::string to_string(IntegrationMethod m) {
    return m == IntegrationMethod::corotating_midpoint ? "corotating_midpoint" : "lab_midpoint";
}

IntegrationMethod parse_integration_method(const std::string &s) {
    if (s == "corotating_midpoint" || s == "corotating") return IntegrationMethod::corotating_midpoint;
    if (s == "lab_midpoint" || s == "lab") return IntegrationMethod::lab_midpoint;
    throw std::invalid_argument("unknown integration method '" + s + "' (expected corotating_midpoint or lab_midpoint)");
}

double PropagationSettings::default_step(double nu_max) {
    if (!(nu_max > 0.0) || !std::isfinite(nu_max)) throw std::invalid_argument("nu_max must be finite and positive");
    return 2.0 * std::numbers::pi / (200.0 * nu_max);
}

double PropagationSettings::resolved_step(double nu_max) const { return step > 0.0 ? step : default_step(nu_max); }

void PropagationSettings::validate() const {
    if (!std::isfinite(step)) throw std::invalid_argument("integrator step must be finite");
    if (!(norm_tol > 0.0)) throw std::invalid_argument("norm tolerance must be > 0");
    if (!(leak_bound > 0.0)) throw std::invalid_argument("truncation-leak bound must be > 0");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence tolerance must be > 0");
}

StateVector evolve(const Generator &generator, const StateVector &state, double t0, double t1,
                   const PropagationSettings &settings) {
    settings.validate();
    check_interval(t0, t1);
    if (!(settings.step > 0.0)) throw std::invalid_argument("a generic generator needs an explicit step > 0");
    check_normalized(state, settings.norm_tol);
    const double step = settings.step;
    const auto n_full = static_cast<std::size_t>(std::floor((t1 - t0) / step));
    const double rest = (t1 - t0) - static_cast<double>(n_full) * step;
    StepGuard guard{settings, top_level_indices(*state.basis)};
    const auto dim = state.basis->dim();

    CVector psi = state.amplitudes;
    guard.check(psi.data(), dim, t0);
    auto advance = [&](double start, double len) {
        const CMatrix hm = generator(start + len / 2.0);
        if (hm.rows() != psi.size() || hm.cols() != psi.size()) {
            throw std::invalid_argument("generator returned a matrix of the wrong dimension");
        }
        if (hermiticity_defect(hm) > 1e-12) throw std::invalid_argument("generator returned a non-Hermitian matrix");
        psi = hermitian_exponential(hm, len) * psi;
        guard.check(psi.data(), dim, start + len);
    };
    for (std::size_t k = 0; k < n_full; ++k) advance(t0 + static_cast<double>(k) * step, step);
    if (rest > 1e-9 * step) advance(t0 + static_cast<double>(n_full) * step, rest);
    StateVector out{state.basis, psi, state.picture};

    if (settings.convergence_check) {
        PropagationSettings half = settings;
        half.step = step / 2.0;
        half.convergence_check = false;
        const StateVector fine = evolve(generator, state, t0, t1, half);
        const double diff = (fine.amplitudes - out.amplitudes).norm();
        if (diff > settings.convergence_tol) {
            std::ostringstream os;
            os << "step-halving check failed: states at h=" << step << " and h/2 differ by " << diff;
            throw NumericalError(os.str());
        }
    }
    return out;
}

StateVector evolve(const FrameHamiltonian &h, const StateVector &state, double t0, double t1,
                   const PropagationSettings &settings) {
    return run_frame(h, {state}, t0, t1, settings, nullptr).front();
}

StateVector evolve_observed(const FrameHamiltonian &h, const StateVector &state, double t0, double t1,
                            const PropagationSettings &settings, const Observer &observer) {
    return run_frame(h, {state}, t0, t1, settings, &observer).front();
}

std::vector<StateVector> evolve_batch(const FrameHamiltonian &h, const std::vector<StateVector> &states, double t0,
                                      double t1, const PropagationSettings &settings) {
    return run_frame(h, states, t0, t1, settings, nullptr);
}

SpectralPropagator::SpectralPropagator(FrameHamiltonian h) : h_(std::move(h)) {
    CMatrix total = h_.K;
    if (h_.G.size() == total.rows()) total.diagonal() += h_.G.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    vectors_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
}

CVector SpectralPropagator::evolve(const CVector &psi0, double t0, double t1) const {
    check_interval(t0, t1);
    const bool rotating = h_.G.size() == psi0.size();
    CVector start = rotating ? CVector(diagonal_phase(h_.G, -t0).cwiseProduct(psi0)) : psi0;
    CVector c = vectors_.adjoint() * start;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -lambda_[k] * (t1 - t0));
    CVector out = vectors_ * c;
    if (rotating) out = diagonal_phase(h_.G, t1).cwiseProduct(out);
    return out;
}

StateVector SpectralPropagator::evolve(const StateVector &state, double t0, double t1) const {
    if (!(*state.basis == *h_.basis)) throw std::invalid_argument("state and Hamiltonian live on different bases");
    if (!(state.picture == h_.picture)) throw std::invalid_argument("state and Hamiltonian live in different pictures");
    return {state.basis, evolve(state.amplitudes, t0, t1), state.picture};
}

std::vector<cplx> SpectralPropagator::overlap_series(const CVector &psi0, const CVector &f, double t0, double dt,
                                                     std::size_t count) const {
    check_interval(t0, t0 + dt * static_cast<double>(count));
    const Eigen::Index n = psi0.size();
    const bool rotating = h_.G.size() == n;
    const CVector start = rotating ? CVector(diagonal_phase(h_.G, -t0).cwiseProduct(psi0)) : psi0;
    const CVector c = vectors_.adjoint() * start;

    std::vector<Eigen::Index> support;
    for (Eigen::Index a = 0; a < n; ++a) {
        if (f[a] != cplx(0.0)) support.push_back(a);
    }
    // Row a of V scaled by c: <a|psi(t)> = e^{iG_a t} sum_k w_ak e^{-i lambda_k (t - t0)}.
    std::vector<CVector> weights;
    for (Eigen::Index a : support) weights.push_back(vectors_.row(a).transpose().cwiseProduct(c));

    std::vector<cplx> z(static_cast<std::size_t>(n)), mult(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) mult[static_cast<std::size_t>(k)] = std::polar(1.0, -lambda_[k] * dt);
    const auto &kern = simd::kernels();
    constexpr std::size_t kResync = 256;

    std::vector<cplx> out(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (s % kResync == 0) {
            for (Eigen::Index k = 0; k < n; ++k) {
                z[static_cast<std::size_t>(k)] = std::polar(1.0, -lambda_[k] * dt * static_cast<double>(s));
            }
        }
        const double t = t0 + dt * static_cast<double>(s);
        cplx amp = 0.0;
        for (std::size_t i = 0; i < support.size(); ++i) {
            const Eigen::Index a = support[i];
            cplx row = kern.cdot(weights[i].data(), z.data(), static_cast<std::size_t>(n));
            if (rotating) row *= std::polar(1.0, h_.G[a] * t);
            amp += std::conj(f[a]) * row;
        }
        out[s] = amp;
        kern.cmul_inplace(mult.data(), z.data(), static_cast<std::size_t>(n));
    }
    return out;
}

cplx SpectralPropagator::overlap(const CVector &psi0, const CVector &f, double t0, double t) const {
    return f.dot(evolve(psi0, t0, t));
}

FrameTransform FrameTransform::dressed_frame(const SystemConfig &config) {
    config.validate();
    FrameTransform f;
    f.kind = FrameKind::composite;
    f.ion = config.addressed_ion;
    f.transition = config.transition;
    f.omega_prime = config.omega_prime();
    return f;
}

Picture FrameTransform::source() const {
    if (kind == FrameKind::dressed_to_rotating) return {PictureKind::dressed, ion, transition, 0.0};
    return Picture::interaction();
}

Picture FrameTransform::target() const {
    if (kind == FrameKind::bare_to_dressed) return {PictureKind::dressed, ion, transition, 0.0};
    return {PictureKind::dressed_rotating, ion, transition, omega_prime};
}

CMatrix FrameTransform::matrix(const Basis &basis, double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("frame time must be finite");
    if (ion < 0 || static_cast<std::size_t>(ion) >= basis.num_ions()) throw std::invalid_argument("frame ion out of range");
    const auto j = static_cast<std::size_t>(ion);
    const int levels = basis.ion_levels(j);
    const int up = upper_level(transition);
    if (up >= levels) throw std::invalid_argument("frame transition needs the auxiliary level");
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix r = CMatrix::Identity(levels, levels);
    if (kind != FrameKind::dressed_to_rotating) {
        r(up, up) = s;
        r(up, 0) = s;
        r(0, up) = -s;
        r(0, 0) = s;
    }
    CMatrix rot = CMatrix::Identity(levels, levels);
    if (kind != FrameKind::bare_to_dressed) {
        rot(up, up) = std::polar(1.0, omega_prime * t);
        rot(0, 0) = std::polar(1.0, -omega_prime * t);
    }
    return embed_ion_operator(basis, j, rot * r);
}

StateVector to_frame(const StateVector &state, const FrameTransform &transform, double t) {
    if (!(state.picture == transform.source())) {
        throw std::invalid_argument("state is in the " + state.picture.describe() + " picture, transform expects " +
                                    transform.source().describe());
    }
    return {state.basis, transform.matrix(*state.basis, t) * state.amplitudes, transform.target()};
}

StateVector from_frame(const StateVector &state, const FrameTransform &transform, double t) {
    if (!(state.picture == transform.target())) {
        throw std::invalid_argument("state is in the " + state.picture.describe() + " picture, transform expects " +
                                    transform.target().describe());
    }
    return {state.basis, transform.matrix(*state.basis, t).adjoint() * state.amplitudes, transform.source()};
}

std::vector<DressedAmplitude> analytic_jc_oracle(double eta, double nu, double t, const std::string &initial) {
    const double g = nu * eta / 2.0;
    const cplx up = std::polar(1.0, -nu * t / 2.0);  // |+> picks up e^{-i nu t/2}
    const cplx dn = std::polar(1.0, nu * t / 2.0);   // |-> picks up e^{+i nu t/2}
    if (initial == "-0") return {{-1, 0, dn}};
    if (initial == "+0") return {{+1, 0, up * std::cos(g * t)}, {-1, 1, -dn * std::sin(g * t)}};
    if (initial == "-1") return {{-1, 1, dn * std::cos(g * t)}, {+1, 0, up * std::sin(g * t)}};
    if (initial == "+1") {
        const double a = std::sqrt(2.0) * g * t;
        return {{+1, 1, up * std::cos(a)}, {-1, 2, -dn * std::sin(a)}};
    }
    throw std::invalid_argument("analytic oracle covers only -0, +0, -1, +1; got '" + initial + "'");
}

}  // namespace iontrap
