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

#include <numbers>

#include "iontrap/statespace.hpp"

namespace iontrap {
namespace {

using V = std::vector<int>;

TEST(Basis, LastModeVariesFastest) {
    const Basis b({2, 3}, {3, 2});
    EXPECT_EQ(b.dim(), 2u * 3u * 4u * 3u);
    EXPECT_EQ(b.index(V{0, 0}, V{0, 1}), 1u);
    EXPECT_EQ(b.index(V{0, 0}, V{1, 0}), 3u);
    EXPECT_EQ(b.index(V{0, 1}, V{0, 0}), 12u);
    EXPECT_EQ(b.index(V{1, 0}, V{0, 0}), 36u);
}

TEST(Basis, IndexAndDigitsAreInverse) {
    const Basis b({3, 2}, {2, 4});
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const auto d = b.digits(i);
        ASSERT_EQ(d.size(), 4u);
        EXPECT_EQ(b.index(std::span<const int>(d).first(2), std::span<const int>(d).subspan(2)), i);
        EXPECT_EQ(b.level_of(i, 1), d[1]);
        EXPECT_EQ(b.fock_of(i, 1), d[3]);
    }
}

TEST(Basis, RejectsBadShapes) {
    EXPECT_THROW(Basis({4}, {2}), std::invalid_argument);
    EXPECT_THROW(Basis({2}, {-1}), std::invalid_argument);
    const Basis b({2}, {2});
    EXPECT_THROW(b.index(V{2}, V{0}), std::invalid_argument);
    EXPECT_THROW(b.index(V{0}, V{3}), std::invalid_argument);
    EXPECT_THROW(b.index(V{0, 0}, V{0}), std::invalid_argument);
}

TEST(Operators, LadderCommutatorIsIdentityBelowTruncation) {
    const auto b = make_basis({2}, {6, 3});
    for (std::size_t m = 0; m < 2; ++m) {
        const CMatrix a = build_ladder(b, m).matrix;
        const CMatrix c = a * a.adjoint() - a.adjoint() * a;
        for (std::size_t i = 0; i < b->dim(); ++i) {
            const int n = b->fock_of(i, m);
            const double want = n == b->n_max(m) ? -static_cast<double>(n) : 1.0;
            EXPECT_NEAR(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), want, 1e-14);
        }
        EXPECT_LT(commutator_norm(build_number(b, m).matrix, a.adjoint() * a), 1e-14);
        EXPECT_LT((build_number(b, m).matrix - a.adjoint() * a).cwiseAbs().maxCoeff(), 1e-14);
    }
    EXPECT_THROW(build_ladder(b, 2), std::invalid_argument);
}

TEST(Operators, PauliAlgebra) {
    const auto b = make_basis({3, 2}, {1});
    for (Transition tr : {Transition::g_e, Transition::g_eaux}) {
        const CMatrix sp = build_pauli(b, 0, PauliKind::plus, tr).matrix;
        const CMatrix sm = build_pauli(b, 0, PauliKind::minus, tr).matrix;
        const CMatrix sz = build_pauli(b, 0, PauliKind::z, tr).matrix;
        EXPECT_LT((sp.adjoint() - sm).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT((sp * sm - sm * sp - sz).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT(hermiticity_defect(sz), 1e-15);
    }
    EXPECT_THROW(build_pauli(b, 1, PauliKind::plus, Transition::g_eaux), std::invalid_argument);
}

TEST(Operators, SigmaPlusRaisesGroundToUpper) {
    const auto b = make_basis({3}, {0});
    const StateVector g = basis_state(b, V{0}, V{0});
    const StateVector out = build_pauli(b, 0, PauliKind::plus, Transition::g_eaux).apply(g);
    EXPECT_NEAR(std::abs(out.amplitudes[2] - 1.0), 0.0, 1e-15);
}

TEST(DressedRotation, MapsDressedKetsToBareLevels) {
    const auto b = make_basis({2}, {1});
    const Operator r = dressed_rotation(b, 0);
    EXPECT_LT(unitarity_defect(r.matrix), 1e-15);
    const StateVector plus = product_state(b, {dressed_ket(2, +1)}, V{0});
    const StateVector minus = product_state(b, {dressed_ket(2, -1)}, V{0});
    EXPECT_NEAR(std::norm(r.apply(plus).amplitudes[b->index(V{1}, V{0})]), 1.0, 1e-15);
    EXPECT_NEAR(std::norm(r.apply(minus).amplitudes[b->index(V{0}, V{0})]), 1.0, 1e-15);
}

TEST(DressedRotation, ConjugatedLaddersMatchClosedForm) {
    for (PauliKind k : {PauliKind::plus, PauliKind::minus}) EXPECT_LT(conjugate_pauli_by_R(k).defect, 1e-12);
    EXPECT_THROW(conjugate_pauli_by_R(PauliKind::z), std::invalid_argument);
    const Eigen::Matrix2cd r = single_ion_rotation_R();
    const double s = 1.0 / std::numbers::sqrt2;
    // (g, e) component order: R(e,e) = R(e,g) = s, R(g,e) = -s, R(g,g) = s.
    EXPECT_NEAR(r(1, 1).real(), s, 1e-16);
    EXPECT_NEAR(r(1, 0).real(), s, 1e-16);
    EXPECT_NEAR(r(0, 1).real(), -s, 1e-16);
    EXPECT_NEAR(r(0, 0).real(), s, 1e-16);
}

TEST(Kron, MatchesProductOnProductVectors) {
    CMatrix a(2, 2), b(3, 3);
    a << 1.0, cplx(0, 2), 3.0, 4.0;
    b << 1, 2, 3, 4, 5, 6, 7, 8, cplx(9, 1);
    CVector x(2), y(3);
    x << 1.0, cplx(0, -1);
    y << 2.0, 0.5, cplx(1, 1);
    const CMatrix k = kron(a, b);
    const CVector xy = kron(x, y);
    EXPECT_LT((k * xy - kron(a * x, b * y)).norm(), 1e-13);
}

TEST(EmbedIonMode, AgreesWithIndependentEmbedding) {
    const auto b = make_basis({2, 3}, {2, 1});
    const Eigen::Matrix2cd sp = single_ion_pauli(PauliKind::plus);
    const CMatrix a0 = build_ladder(b, 0).matrix;
    const CMatrix modes_a0 = kron(CMatrix(build_ladder(make_basis({}, {2, 1}), 0).matrix), CMatrix::Identity(1, 1));
    const CMatrix embedded = embed_ion_mode_operator(*b, 0, sp, modes_a0);
    const CMatrix expected = embed_ion_operator(*b, 0, sp) * a0;
    EXPECT_LT((embedded - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(States, ProductStatesAreNormalized) {
    const auto b = make_basis({2, 3}, {2, 2});
    const StateVector s = product_state(b, {dressed_ket(2, -1), dressed_ket(3, +1, Transition::g_eaux)}, V{1, 0});
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    EXPECT_THROW(product_state(b, {ion_ket(3, Level::g), ion_ket(3, Level::g)}, V{0, 0}), std::invalid_argument);
    EXPECT_THROW(ion_ket(2, Level::e_aux), std::invalid_argument);
    EXPECT_THROW(dressed_ket(2, 0), std::invalid_argument);
}

TEST(States, TruncationLeakNamesTheFix) {
    const auto b = make_basis({2}, {3});
    const StateVector top = basis_state(b, V{0}, V{3});
    EXPECT_DOUBLE_EQ(top.top_fock_population(0), 1.0);
    try {
        top.check_truncation_leak(1e-6);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError &e) {
        EXPECT_NE(std::string(e.what()).find("increase"), std::string::npos);
    }
    EXPECT_NO_THROW(basis_state(b, V{0}, V{2}).check_truncation_leak(1e-6));
}

TEST(States, OperatorRejectsForeignBasis) {
    const auto b1 = make_basis({2}, {2});
    const auto b2 = make_basis({2}, {3});
    EXPECT_THROW(build_identity(b1).apply(basis_state(b2, V{0}, V{0})), std::invalid_argument);
}

TEST(Transitions, ParseAndName) {
    EXPECT_EQ(parse_transition("g-e"), Transition::g_e);
    EXPECT_EQ(parse_transition("g-e'"), Transition::g_eaux);
    EXPECT_EQ(parse_transition(to_string(Transition::g_eaux)), Transition::g_eaux);
    EXPECT_THROW(parse_transition("e-g"), std::invalid_argument);
    EXPECT_EQ(upper_level(Transition::g_eaux), 2);
}

}  // namespace
}  // namespace iontrap
