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

// Tensor-product Hilbert space of trapped-ion internal levels and truncated
// motional Fock modes.
//
// Ordering: the tensor factors are laid out ions first, then modes, in
// row-major order, so the last mode is the fastest-varying index. Every module
// goes through Basis::index() / Basis::digits() rather than computing strides.
//
// Ion levels: index 0 = |g>, 1 = |e>, 2 = |e'> (auxiliary, optional).

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iontrap {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Failure of a numerical guarantee (norm drift, truncation leak, step
/// convergence). Precondition violations use std::invalid_argument.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Level : int { g = 0, e = 1, e_aux = 2 };

/// Which optical transition an ion operator acts on: g<->e or g<->e'.
enum class Transition { g_e, g_eaux };

int upper_level(Transition t);
std::string to_string(Transition t);
Transition parse_transition(const std::string &s);

class Basis {
   public:
    /// ion_levels: 2 or 3 per ion. mode_truncations: n_max per mode (>= 0).
    Basis(std::vector<int> ion_levels, std::vector<int> mode_truncations);

    std::size_t dim() const { return dim_; }
    std::size_t num_ions() const { return ion_levels_.size(); }
    std::size_t num_modes() const { return n_max_.size(); }
    int ion_levels(std::size_t ion) const;
    int n_max(std::size_t mode) const;
    const std::vector<int> &ion_levels() const { return ion_levels_; }
    const std::vector<int> &mode_truncations() const { return n_max_; }

    /// Flat index of |levels...>|fock...>.
    std::size_t index(std::span<const int> levels, std::span<const int> fock) const;
    /// Inverse of index(): per-factor digits, ions first.
    std::vector<int> digits(std::size_t flat) const;
    int level_of(std::size_t flat, std::size_t ion) const;
    int fock_of(std::size_t flat, std::size_t mode) const;

    /// Stride of tensor factor k (ions 0..I-1, then modes I..I+M-1).
    std::size_t stride(std::size_t factor) const { return strides_[factor]; }
    std::size_t factor_dim(std::size_t factor) const { return dims_[factor]; }

    bool operator==(const Basis &other) const {
        return ion_levels_ == other.ion_levels_ && n_max_ == other.n_max_;
    }

    std::string describe() const;

   private:
    std::vector<int> ion_levels_;
    std::vector<int> n_max_;
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_basis(std::vector<int> ion_levels, std::vector<int> mode_truncations);

/// Which unitary frame a state or Hamiltonian lives in.
enum class PictureKind {
    interaction,       // common trap interaction picture (bare ion labels)
    dressed,           // R applied to one ion transition
    dressed_rotating,  // V(t) = exp(i Omega' t sigma_z) R applied to one ion transition
};

struct Picture {
    PictureKind kind = PictureKind::interaction;
    int ion = -1;
    Transition transition = Transition::g_e;
    double omega_prime = 0.0;

    static Picture interaction() { return {}; }
    bool operator==(const Picture &) const = default;
    std::string describe() const;
};

struct StateVector {
    BasisPtr basis;
    CVector amplitudes;
    Picture picture;

    double norm() const { return amplitudes.norm(); }
    double population(std::size_t flat) const { return std::norm(amplitudes[static_cast<Eigen::Index>(flat)]); }
    /// Probability of finding mode `mode` in its highest retained Fock level.
    double top_fock_population(std::size_t mode) const;
    /// Largest top_fock_population over all modes.
    double max_top_fock_population() const;
    /// Throws NumericalError if any mode's top-level population exceeds bound.
    void check_truncation_leak(double bound) const;
};

struct Operator {
    BasisPtr basis;
    CMatrix matrix;

    Operator adjoint() const { return {basis, matrix.adjoint()}; }
    StateVector apply(const StateVector &psi) const;
};

/// max |M - M^dagger| elementwise.
double hermiticity_defect(const CMatrix &m);
/// max |U U^dagger - 1| elementwise.
double unitarity_defect(const CMatrix &u);
/// max |AB - BA| elementwise.
double commutator_norm(const CMatrix &a, const CMatrix &b);

enum class PauliKind { plus, minus, z };

/// Annihilation operator a_p on mode `mode`, identity elsewhere.
Operator build_ladder(const BasisPtr &basis, std::size_t mode);
/// sigma_+ = |upper><g|, sigma_- = its adjoint, sigma_z = |upper><upper| - |g><g|.
Operator build_pauli(const BasisPtr &basis, std::size_t ion, PauliKind which, Transition transition = Transition::g_e);
/// Number operator a^dagger a on one mode.
Operator build_number(const BasisPtr &basis, std::size_t mode);
/// Identity of the right dimension.
Operator build_identity(const BasisPtr &basis);

/// R = (1/sqrt2)[[1,1],[-1,1]] in (upper, g) components on one ion transition:
/// R|+> = |upper>, R|-> = |g>.
Operator dressed_rotation(const BasisPtr &basis, std::size_t ion, Transition transition = Transition::g_e);

/// 2x2 pieces in (g, e) component order.
Eigen::Matrix2cd single_ion_pauli(PauliKind which);
Eigen::Matrix2cd single_ion_rotation_R();

struct ConjugatedPauli {
    Eigen::Matrix2cd computed;   // R sigma R^dagger
    Eigen::Matrix2cd expected;   // (sigma_z +/- (sigma_+ - sigma_-)) / 2
    double defect;
};
/// Computes R sigma_+/- R^dagger and checks it against the closed form; throws
/// NumericalError if they differ by more than 1e-12.
ConjugatedPauli conjugate_pauli_by_R(PauliKind which);

/// Single-ion kets (length = number of levels).
CVector ion_ket(int levels, Level level);
/// (|g> + s|upper>)/sqrt2 on the given transition, s = +1 or -1.
CVector dressed_ket(int levels, int sign, Transition transition = Transition::g_e);

/// Tensor product state |ion kets...>|fock...>.
StateVector product_state(const BasisPtr &basis, const std::vector<CVector> &ion_kets, std::span<const int> fock);
/// Computational basis ket from level and Fock indices.
StateVector basis_state(const BasisPtr &basis, std::span<const int> levels, std::span<const int> fock);

/// Kronecker product A (x) B.
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Embeds a single-ion operator (levels x levels) acting on `ion`.
CMatrix embed_ion_operator(const Basis &basis, std::size_t ion, const CMatrix &local);
/// Embeds an operator acting on all modes jointly (dim = prod(n_max+1)).
/// The ion factor `ion` receives `ion_op`, other ions the identity.
CMatrix embed_ion_mode_operator(const Basis &basis, std::size_t ion, const CMatrix &ion_op, const CMatrix &mode_op);

}  // namespace iontrap
