// Copyright 2026 The fgqc Authors
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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fgqc/dynamics.hpp"
#include "fgqc/model.hpp"
#include "test_util.hpp"

namespace fgqc {
namespace {

using testing::max_diff;
using testing::phase_free_overlap;

constexpr double kOmega0 = 4.0 * std::numbers::pi;
// N·[1 − J₀(4/1.026)] to 15 digits, computed externally.
constexpr double kOmegaEffSingle = 0.402779718275417;

TEST(SingleQubitHamiltonian, Examples) {
  EXPECT_LT(max_diff(single_qubit_hamiltonian({0.0, kOmega0, 0.0}), Matrix2(0.5 * kOmega0 * pauli::x())), 1e-15);
  EXPECT_LT(max_diff(single_qubit_hamiltonian({2.0 * 0.7, 0.0, 0.0}), Matrix2(0.7 * pauli::z())), 1e-15);
  const Matrix2 y = single_qubit_hamiltonian({0.0, 0.0, 2.0 * 1.3});
  EXPECT_LT(max_diff(y, Matrix2(1.3 * pauli::y())), 1e-15);
  EXPECT_TRUE(is_hermitian<2>(y));
}

TEST(SingleQubitModel, HermitianOnDenseGrid) {
  for (Scheme sc : {Scheme::FGQC, Scheme::NGQC, Scheme::DG})
    for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
      const HamiltonianModel<2> m = single_qubit_model(make_schedule(sc, g));
      for (int k = 0; k <= 1000; ++k) EXPECT_LE(max_asymmetry(m(m.duration() * k / 1000)), 1e-12);
    }
}

TEST(TwoQubitHamiltonian, LabDiagonalIsBlockadeShift) {
  const TwoQubitSchedule s = make_two_qubit_schedule();
  for (double t : {0.0, 1.1, 5.0, s.duration()})
    EXPECT_EQ(two_qubit_hamiltonian(s, t, Frame::LabTwoQubit)(3, 3), Complex(330.0, 0.0));
}

TEST(TwoQubitHamiltonian, RotatedBrightCoupling) {
  const TwoQubitSchedule s = make_two_qubit_schedule();
  const Matrix4 h = two_qubit_hamiltonian(s, 0.0, Frame::RotatedTwoQubit);
  const Vector4 b = bright_state(s.mixing_angle());
  const Complex coupling = (b.adjoint() * h * basis_state<4>(0))(0, 0);
  EXPECT_NEAR(coupling.real(), kOmega0 / 2, 1e-13);
  EXPECT_NEAR(coupling.imag(), 0.0, 1e-13);
  // The doubly excited state couples through −|B'> with e^{−iVt}.
  const double t = 0.37;
  const Matrix4 ht = two_qubit_hamiltonian(s, t, Frame::RotatedTwoQubit);
  const Complex leak = (bright_partner(s.mixing_angle()).adjoint() * ht * basis_state<4>(3))(0, 0);
  const Complex want = -std::conj(s.rabi(t)) * std::exp(Complex(0.0, -330.0 * t));
  EXPECT_LT(std::abs(leak - want), 1e-12);
  EXPECT_EQ(ht(3, 3), Complex(0.0, 0.0));
}

TEST(TwoQubitHamiltonian, HermitianAtRandomTimes) {
  std::mt19937_64 rng(3);
  for (Scheme sc : {Scheme::FGQC, Scheme::NGQC}) {
    const TwoQubitSchedule s = make_two_qubit_schedule(sc);
    std::uniform_real_distribution<double> u(0.0, s.duration());
    for (int k = 0; k < 1000; ++k) {
      const double t = u(rng);
      EXPECT_LE(max_asymmetry(two_qubit_hamiltonian(s, t, Frame::LabTwoQubit)), 1e-12);
      EXPECT_LE(max_asymmetry(two_qubit_hamiltonian(s, t, Frame::RotatedTwoQubit)), 1e-12);
    }
  }
}

TEST(TwoQubitHamiltonian, RejectsSingleQubitFrame) {
  EXPECT_THROW(two_qubit_hamiltonian(make_two_qubit_schedule(), 0.0, Frame::LabSingle), PreconditionError);
  EXPECT_THROW(parse_two_qubit_frame("interaction"), PreconditionError);
  EXPECT_EQ(parse_two_qubit_frame("lab"), Frame::LabTwoQubit);
  EXPECT_EQ(parse_two_qubit_frame("rotated"), Frame::RotatedTwoQubit);
}

// U_lab(τ) = exp(−iVτ|11><11|)·U_rot(τ): both frames describe the same dynamics.
TEST(TwoQubitHamiltonian, FramesAgreeThroughInteractionPicture) {
  TwoQubitParameters p = TwoQubitParameters::defaults(Scheme::NGQC);
  const TwoQubitSchedule s = make_two_qubit_schedule(p);
  const TimeGrid grid = TimeGrid::resolving(s.duration(), s.max_frequency(), 8);
  const Matrix4 lab = propagate_unitary(two_qubit_model(s, Frame::LabTwoQubit), grid);
  const Matrix4 rot = propagate_unitary(two_qubit_model(s, Frame::RotatedTwoQubit), grid);
  Matrix4 phase = Matrix4::Identity();
  phase(3, 3) = std::exp(Complex(0.0, -s.interaction() * s.duration()));
  EXPECT_LT(max_diff(lab, Matrix4(phase * rot)), 1e-6);
}

TEST(EffectiveGenerator, ZAxisAndMagnitude) {
  const PulseSchedule s = make_fgqc_schedule(Gate::Z);
  for (double t : {0.0, 2.0, 7.0}) {
    const EffectiveGenerator<2> g = effective_generator(s, t);
    EXPECT_LT((g.axis - Vector3::UnitZ()).norm(), 1e-12);
    EXPECT_NEAR(g.magnitude, kOmegaEffSingle, 1e-13);
    EXPECT_NEAR(g.magnitude, 0.4029, 1e-3);
    EXPECT_LT(max_diff(g.matrix, Matrix2(kOmegaEffSingle * 0.5 * pauli::z())), 1e-13);
  }
}

TEST(EffectiveGenerator, XAxisIsMinusX) {
  const PulseSchedule s = make_fgqc_schedule(Gate::X);
  const EffectiveGenerator<2> g = effective_generator(s, 3.3);
  EXPECT_LT((g.axis + Vector3::UnitX()).norm(), 1e-12);
  EXPECT_NEAR(g.magnitude, kOmegaEffSingle, 1e-13);
}

TEST(EffectiveGenerator, ConstantControlsGiveZero) {
  for (Scheme sc : {Scheme::NGQC, Scheme::DG}) {
    const EffectiveGenerator<2> g = effective_generator(make_baseline_schedule(sc, Gate::X), 0.1);
    EXPECT_EQ(g.magnitude, 0.0);
    EXPECT_EQ(g.matrix, Matrix2(Matrix2::Zero()));
  }
}

TEST(EffectiveGenerator, UnitAxisAndFixedPlane) {
  for (Gate gate : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(gate);
    const EffectiveGenerator<2> first = effective_generator(s, 0.0);
    for (int k = 0; k <= 200; ++k) {
      const double t = s.duration() * k / 200;
      const EffectiveGenerator<2> g = effective_generator(s, t);
      EXPECT_NEAR(g.axis.norm(), 1.0, 1e-10);
      EXPECT_LT((g.axis - first.axis).norm(), 1e-10);
      EXPECT_LE(commutator<2>(g.matrix, first.matrix).norm(), 1e-10);
    }
  }
}

// Ω n = r×ṙ/|r|² recomputed here from finite differences of r(t).
TEST(EffectiveGenerator, MatchesFiniteDifferenceCrossProduct) {
  const PulseSchedule s = make_fgqc_schedule(Gate::H);
  const double h = 1e-5, t = 4.1;
  const Vector3 r = s.envelope(t);
  const Vector3 rdot = (s.envelope(t + h) - s.envelope(t - h)) / (2 * h);
  const Vector3 w = r.cross(rdot) / r.squaredNorm();
  const EffectiveGenerator<2> g = effective_generator(s, t);
  EXPECT_LT((g.axis - w.normalized()).norm(), 1e-8);
  EXPECT_NEAR(g.magnitude, w.norm() * (1.0 - bessel_j0(r.norm() / s.carrier_frequency())), 1e-9);
}

TEST(EffectiveGenerator, TwoQubitReducesToPseudoSpinZ) {
  const TwoQubitSchedule s = make_two_qubit_schedule();
  const double c = s.effective_coupling();
  const PseudoSpin sigma(s.mixing_angle());
  const Matrix4 reordered = basis_reversal() * averaged_two_qubit_matrix(c, s.mixing_angle()) * basis_reversal();
  for (double t : {0.0, 3.0, s.duration()}) {
    const EffectiveGenerator<4> g = effective_generator(s, t);
    EXPECT_EQ(g.subspace, Subspace::BrightGround);
    EXPECT_LT(max_diff(g.matrix, Matrix4(c * sigma.z)), 1e-12);
    EXPECT_LT(max_diff(g.matrix, reordered), 1e-12);
  }
}

TEST(EffectiveGenerator, PseudoSpinAlgebra) {
  const PseudoSpin s(0.7);
  EXPECT_LT(max_diff(commutator<4>(s.x, s.y), Matrix4(2.0 * kI * s.z)), 1e-14);
  EXPECT_TRUE(is_hermitian<4>(s.y));
  EXPECT_NEAR(bright_state(0.7).norm(), 1.0, 1e-15);
}

TEST(GeometricAngle, ReferenceParameters) {
  EXPECT_NEAR(geometric_angle(make_fgqc_schedule(Gate::Z)), kPi, 0.005 * kPi);
  EXPECT_NEAR(geometric_angle(make_fgqc_schedule(Gate::T)), kPi / 4, 0.02 * kPi / 4);
  EXPECT_NEAR(geometric_angle(make_fgqc_schedule(Gate::T)), 0.786, 2e-3);
}

TEST(GeometricAngle, QuadratureAgreesWithClosedForm) {
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(g);
    EXPECT_NEAR(geometric_angle(s), s.calibrated_angle(), 1e-6);
  }
}

TEST(GeometricAngle, EmptyIntervalAndRejection) {
  EXPECT_EQ(geometric_angle(make_fgqc_schedule(Gate::Z), 0.0), 0.0);
  EXPECT_THROW(geometric_angle(make_baseline_schedule(Scheme::DG, Gate::Z)), PreconditionError);
}

TEST(TargetUnitary, Examples) {
  Matrix2 z = Matrix2::Zero();
  z(0, 0) = kI;
  z(1, 1) = -kI;
  EXPECT_LT(max_diff(target_unitary(kPi, Vector3::UnitZ()), z), 1e-15);
  EXPECT_LT(max_diff(target_unitary(0.0, Vector3(0.6, 0.0, 0.8)), Matrix2(Matrix2::Identity())), 1e-15);
  EXPECT_THROW(target_unitary(kPi, Vector3(1.0, 1.0, 0.0)), PreconditionError);
}

TEST(TargetUnitary, TextbookGatesUpToPhase) {
  Matrix2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  Matrix2 t = Matrix2::Identity();
  t(1, 1) = std::exp(Complex(0.0, kPi / 4));
  EXPECT_NEAR(phase_free_overlap<2>(target_unitary(Gate::Z), pauli::z()), 1.0, 1e-15);
  EXPECT_NEAR(phase_free_overlap<2>(target_unitary(Gate::X), pauli::x()), 1.0, 1e-15);
  EXPECT_NEAR(phase_free_overlap<2>(target_unitary(Gate::H), h), 1.0, 1e-15);
  EXPECT_NEAR(phase_free_overlap<2>(target_unitary(Gate::T), t), 1.0, 1e-15);
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) EXPECT_TRUE(is_unitary<2>(target_unitary(g)));
}

TEST(TargetUnitary, TwoQubitSwapLike) {
  const Matrix4 u = swap_like_target();
  EXPECT_TRUE(is_unitary<4>(u));
  EXPECT_LT((u * basis_state<4>(2) - basis_state<4>(1)).norm(), 1e-15);  // |10> → |01>
  EXPECT_LT((u * basis_state<4>(1) - basis_state<4>(2)).norm(), 1e-15);
  EXPECT_LT((u * basis_state<4>(3) + basis_state<4>(3)).norm(), 1e-15);  // |11> → −|11>
  EXPECT_LT((u * basis_state<4>(0) - basis_state<4>(0)).norm(), 1e-15);
}

TEST(TargetUnitary, SwapFormulaIsExponentialOfAveragedMatrix) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const double c = u(rng), tau = 1.0 + u(rng), phi = u(rng);
    const Matrix4 direct = expm_hermitian<4>(averaged_two_qubit_matrix(c, phi), tau);
    EXPECT_LT(max_diff(direct, swap_like_propagator(c * tau, phi)), 1e-12);
  }
}

// Rotation of the {|B>, |00>} pseudo-spin equals the SWAP-like matrix read
// in reversed basis order.
TEST(TargetUnitary, PseudoSpinRotationMatchesSwapForm) {
  const double phi = kPi / 2;
  const PseudoSpin s(phi);
  const Matrix4 rotation = expm_hermitian<4>(Matrix4(-kPi * s.z), 1.0);  // C τ = −π
  const Matrix4 reordered = basis_reversal() * swap_like_target() * basis_reversal();
  EXPECT_NEAR(phase_free_overlap<4>(rotation, reordered), 1.0, 1e-14);
  EXPECT_LT(max_diff(rotation, reordered), 1e-14);
}

TEST(PeriodAverage, ModelRoundTrip) {
  const HamiltonianModel<2> m = constant_model<2>(pauli::x(), 2.0);
  EXPECT_EQ(m.duration(), 2.0);
  EXPECT_EQ(m(1.0), pauli::x());
}

}  // namespace
}  // namespace fgqc
