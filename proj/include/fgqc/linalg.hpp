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

#pragma once

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "fgqc/errors.hpp"

namespace fgqc {

using Complex = std::complex<double>;

template <int D>
using CMatrix = Eigen::Matrix<Complex, D, D>;
template <int D>
using CVector = Eigen::Matrix<Complex, D, 1>;

using Matrix2 = CMatrix<2>;
using Matrix4 = CMatrix<4>;
using Vector2 = CVector<2>;
using Vector4 = CVector<4>;
using Vector3 = Eigen::Vector3d;

inline constexpr Complex kI{0.0, 1.0};

// Entrywise tolerances. Fixed so golden outputs never depend on configuration.
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

namespace pauli {

inline Matrix2 identity() { return Matrix2::Identity(); }

inline Matrix2 x() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix2 y() {
  Matrix2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline Matrix2 z() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// |0><1|: takes the Rydberg level |1> down to the ground level |0>.
inline Matrix2 lowering() {
  Matrix2 m;
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

// |k><k| for k in {0, 1}.
inline Matrix2 projector(int k) {
  Matrix2 m = Matrix2::Zero();
  m(k, k) = 1.0;
  return m;
}

}  // namespace pauli

// F·n with F = (σx, σy, σz)/2.
inline Matrix2 spin_component(const Vector3& n) {
  return 0.5 * (n.x() * pauli::x() + n.y() * pauli::y() + n.z() * pauli::z());
}

// Largest |M - M†| entry.
template <int D>
double max_asymmetry(const CMatrix<D>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <int D>
bool is_hermitian(const CMatrix<D>& m, double tol = kHermitianTolerance) {
  return max_asymmetry(m) <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

// ‖U†U − I‖_max.
template <int D>
double unitarity_defect(const CMatrix<D>& u) {
  return (u.adjoint() * u - CMatrix<D>::Identity()).cwiseAbs().maxCoeff();
}

template <int D>
bool is_unitary(const CMatrix<D>& u, double tol = kUnitaryTolerance) {
  return unitarity_defect(u) <= tol;
}

/// exp(−i·s·H) for Hermitian H, through the spectral decomposition of H.
///
/// The 2×2 case uses the closed-form eigensystem of a0·I + a·σ; larger
/// matrices go through Eigen's self-adjoint solver. Either way the result is
/// unitary to rounding, independent of ‖H‖·|s|.
template <int D>
CMatrix<D> expm_hermitian(const CMatrix<D>& h, double s) {
  if (!is_hermitian(h)) {
    std::ostringstream msg;
    msg << "expm_hermitian: input is not Hermitian (max |H - H^dagger| = "
        << max_asymmetry(h) << ")";
    throw PreconditionError(msg.str());
  }
  if constexpr (D == 2) {
    const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double ax = 0.5 * (h(0, 1).real() + h(1, 0).real());
    const double ay = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
    const double norm = std::sqrt(ax * ax + ay * ay + az * az);
    const Complex phase = std::exp(Complex(0.0, -s * a0));
    const double c = std::cos(s * norm);
    // sin(s|a|)/|a| with the removable singularity at |a| = 0.
    const double sinc = norm > 0.0 ? std::sin(s * norm) / norm : s;
    Matrix2 out;
    out(0, 0) = phase * Complex(c, -sinc * az);
    out(1, 1) = phase * Complex(c, sinc * az);
    out(0, 1) = phase * (-kI * sinc) * Complex(ax, -ay);
    out(1, 0) = phase * (-kI * sinc) * Complex(ax, ay);
    return out;
  } else {
    const CMatrix<D> sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix<D>> solver(sym);
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    CVector<D> phases;
    for (int k = 0; k < D; ++k) phases(k) = std::exp(Complex(0.0, -s * vals(k)));
    return vecs * phases.asDiagonal() * vecs.adjoint();
  }
}

template <int A, int B>
CMatrix<A * B> kron(const CMatrix<A>& a, const CMatrix<B>& b) {
  CMatrix<A * B> out;
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) out.template block<B, B>(i * B, j * B) = a(i, j) * b;
  return out;
}

template <int A, int B>
CVector<A * B> kron(const CVector<A>& a, const CVector<B>& b) {
  CVector<A * B> out;
  for (int i = 0; i < A; ++i) out.template segment<B>(i * B) = a(i) * b;
  return out;
}

template <int D>
CVector<D> basis_state(int k) {
  CVector<D> v = CVector<D>::Zero();
  v(k) = 1.0;
  return v;
}

template <int D>
CMatrix<D> pure_density(const CVector<D>& psi) {
  return psi * psi.adjoint();
}

template <int D>
CMatrix<D> commutator(const CMatrix<D>& a, const CMatrix<D>& b) {
  return a * b - b * a;
}

}  // namespace fgqc
