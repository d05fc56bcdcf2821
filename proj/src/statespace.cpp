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

#include "iontrap/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace iontrap {

int upper_level(Transition t) { return t == Transition::g_e ? static_cast<int>(Level::e) : static_cast<int>(Level::e_aux); }

std::string to_string(Transition t) { return t == Transition::g_e ? "g-e" : "g-e'"; }

Transition parse_transition(const std::string &s) {
    if (s == "g-e" || s == "g_e") return Transition::g_e;
    if (s == "g-e'" || s == "g-eaux" || s == "g_eaux") return Transition::g_eaux;
    throw std::invalid_argument("unknown transition '" + s + "' (expected g-e or g-e')");
}

Basis::Basis(std::vector<int> ion_levels, std::vector<int> mode_truncations)
    : ion_levels_(std::move(ion_levels)), n_max_(std::move(mode_truncations)) {
    for (int l : ion_levels_) {
        if (l != 2 && l != 3) throw std::invalid_argument("ion level count must be 2 or 3, got " + std::to_string(l));
    }
    for (int n : n_max_) {
        if (n < 0) throw std::invalid_argument("Fock truncation must be >= 0, got " + std::to_string(n));
    }
    for (int l : ion_levels_) dims_.push_back(static_cast<std::size_t>(l));
    for (int n : n_max_) dims_.push_back(static_cast<std::size_t>(n) + 1);
    strides_.assign(dims_.size(), 1);
    for (std::size_t k = dims_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * dims_[k];
    dim_ = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

int Basis::ion_levels(std::size_t ion) const {
    if (ion >= ion_levels_.size()) throw std::invalid_argument("ion index " + std::to_string(ion) + " out of range");
    return ion_levels_[ion];
}

int Basis::n_max(std::size_t mode) const {
    if (mode >= n_max_.size()) throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range");
    return n_max_[mode];
}

std::size_t Basis::index(std::span<const int> levels, std::span<const int> fock) const {
    if (levels.size() != num_ions() || fock.size() != num_modes()) {
        throw std::invalid_argument("basis index needs one level per ion and one Fock number per mode");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] < 0 || levels[k] >= ion_levels_[k]) throw std::invalid_argument("ion level out of range");
        flat += strides_[k] * static_cast<std::size_t>(levels[k]);
    }
    for (std::size_t m = 0; m < fock.size(); ++m) {
        if (fock[m] < 0 || fock[m] > n_max_[m]) throw std::invalid_argument("Fock number out of range");
        flat += strides_[num_ions() + m] * static_cast<std::size_t>(fock[m]);
    }
    return flat;
}

std::vector<int> Basis::digits(std::size_t flat) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) out[k] = static_cast<int>((flat / strides_[k]) % dims_[k]);
    return out;
}

int Basis::level_of(std::size_t flat, std::size_t ion) const {
    return static_cast<int>((flat / strides_[ion]) % dims_[ion]);
}

int Basis::fock_of(std::size_t flat, std::size_t mode) const {
    const std::size_t k = num_ions() + mode;
    return static_cast<int>((flat / strides_[k]) % dims_[k]);
}

std::string Basis::describe() const {
    std::ostringstream os;
    os << "ions[";
    for (std::size_t i = 0; i < ion_levels_.size(); ++i) os << (i ? "," : "") << ion_levels_[i];
    os << "] modes[";
    for (std::size_t m = 0; m < n_max_.size(); ++m) os << (m ? "," : "") << n_max_[m];
    os << "] dim " << dim_;
    return os.str();
}

BasisPtr make_basis(std::vector<int> ion_levels, std::vector<int> mode_truncations) {
    return std::make_shared<const Basis>(std::move(ion_levels), std::move(mode_truncations));
}

std::string Picture::describe() const {
    switch (kind) {
        case PictureKind::interaction:
            return "interaction";
        case PictureKind::dressed:
            return "dressed(ion " + std::to_string(ion) + ", " + to_string(transition) + ")";
        case PictureKind::dressed_rotating: {
            std::ostringstream os;
            os << "dressed-rotating(ion " << ion << ", " << to_string(transition) << ", Omega'=" << omega_prime << ")";
            return os.str();
        }
    }
    return "unknown";
}

double StateVector::top_fock_population(std::size_t mode) const {
    const int top = basis->n_max(mode);
    double p = 0.0;
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        if (basis->fock_of(i, mode) == top) p += std::norm(amplitudes[static_cast<Eigen::Index>(i)]);
    }
    return p;
}

double StateVector::max_top_fock_population() const {
    double worst = 0.0;
    for (std::size_t m = 0; m < basis->num_modes(); ++m) worst = std::max(worst, top_fock_population(m));
    return worst;
}

void StateVector::check_truncation_leak(double bound) const {
    for (std::size_t m = 0; m < basis->num_modes(); ++m) {
        const double p = top_fock_population(m);
        if (p > bound) {
            std::ostringstream os;
            os << "truncation leak: mode " << m << " has population " << p << " in its top Fock level "
               << basis->n_max(m) << " (bound " << bound << "); increase the Fock truncation";
            throw NumericalError(os.str());
        }
    }
}

StateVector Operator::apply(const StateVector &psi) const {
    if (!(*psi.basis == *basis)) throw std::invalid_argument("operator and state live on different bases");
    return {psi.basis, matrix * psi.amplitudes, psi.picture};
}

double hermiticity_defect(const CMatrix &m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double unitarity_defect(const CMatrix &u) {
    return (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double commutator_norm(const CMatrix &a, const CMatrix &b) { return (a * b - b * a).cwiseAbs().maxCoeff(); }

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

CMatrix identity(std::size_t n) { return CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)); }

std::size_t modes_dim(const Basis &basis) {
    std::size_t d = 1;
    for (int n : basis.mode_truncations()) d *= static_cast<std::size_t>(n) + 1;
    return d;
}

CMatrix single_mode_annihilation(int n_max) {
    CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

void check_transition(const Basis &basis, std::size_t ion, Transition transition) {
    const int levels = basis.ion_levels(ion);
    if (upper_level(transition) >= levels) {
        throw std::invalid_argument("ion " + std::to_string(ion) + " has " + std::to_string(levels) +
                                    " levels; transition " + to_string(transition) + " needs the auxiliary level e'");
    }
}

}  // namespace

CMatrix embed_ion_operator(const Basis &basis, std::size_t ion, const CMatrix &local) {
    return embed_ion_mode_operator(basis, ion, local, identity(modes_dim(basis)));
}

CMatrix embed_ion_mode_operator(const Basis &basis, std::size_t ion, const CMatrix &ion_op, const CMatrix &mode_op) {
    if (ion >= basis.num_ions()) throw std::invalid_argument("ion index " + std::to_string(ion) + " out of range");
    if (ion_op.rows() != basis.ion_levels(ion)) throw std::invalid_argument("ion operator has wrong dimension");
    if (static_cast<std::size_t>(mode_op.rows()) != modes_dim(basis)) {
        throw std::invalid_argument("mode operator has wrong dimension");
    }
    std::size_t before = 1, after = 1;
    for (std::size_t k = 0; k < ion; ++k) before *= static_cast<std::size_t>(basis.ion_levels(k));
    for (std::size_t k = ion + 1; k < basis.num_ions(); ++k) after *= static_cast<std::size_t>(basis.ion_levels(k));
    CMatrix ions = kron(kron(identity(before), ion_op), identity(after));
    return kron(ions, mode_op);
}

Operator build_identity(const BasisPtr &basis) { return {basis, identity(basis->dim())}; }

Operator build_ladder(const BasisPtr &basis, std::size_t mode) {
    if (mode >= basis->num_modes()) {
        throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range (basis has " +
                                    std::to_string(basis->num_modes()) + " modes)");
    }
    CMatrix modes = CMatrix::Identity(1, 1);
    for (std::size_t m = 0; m < basis->num_modes(); ++m) {
        const int n_max = basis->n_max(m);
        modes = kron(modes, m == mode ? single_mode_annihilation(n_max) : identity(static_cast<std::size_t>(n_max) + 1));
    }
    std::size_t ions_dim = 1;
    for (int l : basis->ion_levels()) ions_dim *= static_cast<std::size_t>(l);
    return {basis, kron(identity(ions_dim), modes)};
}

Operator build_number(const BasisPtr &basis, std::size_t mode) {
    const Operator a = build_ladder(basis, mode);
    return {basis, a.matrix.adjoint() * a.matrix};
}

Operator build_pauli(const BasisPtr &basis, std::size_t ion, PauliKind which, Transition transition) {
    if (ion >= basis->num_ions()) throw std::invalid_argument("ion index " + std::to_string(ion) + " out of range");
    check_transition(*basis, ion, transition);
    const int levels = basis->ion_levels(ion);
    const int up = upper_level(transition);
    const int g = static_cast<int>(Level::g);
    CMatrix local = CMatrix::Zero(levels, levels);
    switch (which) {
        case PauliKind::plus:
            local(up, g) = 1.0;
            break;
        case PauliKind::minus:
            local(g, up) = 1.0;
            break;
        case PauliKind::z:
            local(up, up) = 1.0;
            local(g, g) = -1.0;
            break;
    }
    return {basis, embed_ion_operator(*basis, ion, local)};
}

Operator dressed_rotation(const BasisPtr &basis, std::size_t ion, Transition transition) {
    if (ion >= basis->num_ions()) throw std::invalid_argument("ion index " + std::to_string(ion) + " out of range");
    check_transition(*basis, ion, transition);
    const int levels = basis->ion_levels(ion);
    const int up = upper_level(transition);
    const int g = static_cast<int>(Level::g);
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix local = CMatrix::Identity(levels, levels);
    local(up, up) = s;
    local(up, g) = s;
    local(g, up) = -s;
    local(g, g) = s;
    return {basis, embed_ion_operator(*basis, ion, local)};
}

Eigen::Matrix2cd single_ion_pauli(PauliKind which) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    switch (which) {
        case PauliKind::plus:
            m(1, 0) = 1.0;
            break;
        case PauliKind::minus:
            m(0, 1) = 1.0;
            break;
        case PauliKind::z:
            m(1, 1) = 1.0;
            m(0, 0) = -1.0;
            break;
    }
    return m;
}

Eigen::Matrix2cd single_ion_rotation_R() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd r;
    // rows/cols in (g, e) order
    r(1, 1) = s;
    r(1, 0) = s;
    r(0, 1) = -s;
    r(0, 0) = s;
    return r;
}

ConjugatedPauli conjugate_pauli_by_R(PauliKind which) {
    if (which == PauliKind::z) throw std::invalid_argument("conjugate_pauli_by_R takes sigma_+ or sigma_-");
    const Eigen::Matrix2cd r = single_ion_rotation_R();
    const Eigen::Matrix2cd sp = single_ion_pauli(PauliKind::plus);
    const Eigen::Matrix2cd sm = single_ion_pauli(PauliKind::minus);
    const Eigen::Matrix2cd sz = single_ion_pauli(PauliKind::z);
    ConjugatedPauli out;
    out.computed = r * single_ion_pauli(which) * r.adjoint();
    const double sign = which == PauliKind::plus ? 1.0 : -1.0;
    out.expected = 0.5 * (sz + sign * (sp - sm));
    out.defect = (out.computed - out.expected).cwiseAbs().maxCoeff();
    if (out.defect > 1e-12) throw NumericalError("R sigma R^dagger does not match (sigma_z +/- (sigma_+ - sigma_-))/2");
    return out;
}

CVector ion_ket(int levels, Level level) {
    const int l = static_cast<int>(level);
    if (l >= levels) throw std::invalid_argument("level not present in a " + std::to_string(levels) + "-level ion");
    CVector v = CVector::Zero(levels);
    v[l] = 1.0;
    return v;
}

CVector dressed_ket(int levels, int sign, Transition transition) {
    const int up = upper_level(transition);
    if (up >= levels) throw std::invalid_argument("dressed ket needs the auxiliary level");
    if (sign != 1 && sign != -1) throw std::invalid_argument("dressed ket sign must be +1 or -1");
    CVector v = CVector::Zero(levels);
    const double s = 1.0 / std::sqrt(2.0);
    v[static_cast<int>(Level::g)] = s;
    v[up] = sign * s;
    return v;
}

StateVector product_state(const BasisPtr &basis, const std::vector<CVector> &ion_kets, std::span<const int> fock) {
    if (ion_kets.size() != basis->num_ions() || fock.size() != basis->num_modes()) {
        throw std::invalid_argument("product state needs one ket per ion and one Fock number per mode");
    }
    CMatrix v = CMatrix::Ones(1, 1);
    for (std::size_t i = 0; i < ion_kets.size(); ++i) {
        if (ion_kets[i].size() != basis->ion_levels(i)) throw std::invalid_argument("ion ket has wrong dimension");
        v = kron(v, ion_kets[i]);
    }
    for (std::size_t m = 0; m < fock.size(); ++m) {
        const int n_max = basis->n_max(m);
        if (fock[m] < 0 || fock[m] > n_max) throw std::invalid_argument("Fock number out of range");
        CVector f = CVector::Zero(n_max + 1);
        f[fock[m]] = 1.0;
        v = kron(v, f);
    }
    return {basis, v.col(0), Picture::interaction()};
}

StateVector basis_state(const BasisPtr &basis, std::span<const int> levels, std::span<const int> fock) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
    v[static_cast<Eigen::Index>(basis->index(levels, fock))] = 1.0;
    return {basis, v, Picture::interaction()};
}

}  // namespace iontrap
