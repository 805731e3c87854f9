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
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "fgqc/bessel.hpp"
#include "fgqc/errors.hpp"
#include "fgqc/linalg.hpp"
#include "fgqc/pulses.hpp"

namespace fgqc {

enum class Frame { LabSingle, LabTwoQubit, RotatedTwoQubit, Effective };

// Config selector for two-qubit frames: "lab" | "rotated".
inline Frame parse_two_qubit_frame(std::string_view name) {
  if (name == "lab") return Frame::LabTwoQubit;
  if (name == "rotated") return Frame::RotatedTwoQubit;
  throw PreconditionError("unknown frame '" + std::string(name) + "' (expected lab or rotated)");
}

inline std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::LabSingle: return "lab-single";
    case Frame::LabTwoQubit: return "lab";
    case Frame::RotatedTwoQubit: return "rotated";
    case Frame::Effective: return "effective";
  }
  return "?";
}

/// t ↦ H(t) on [0, duration], D×D Hermitian.
///
/// max_frequency is the fastest angular frequency the step size must resolve.
template <int D>
class HamiltonianModel {
 public:
  using Matrix = CMatrix<D>;
  using Function = std::function<Matrix(double)>;

  HamiltonianModel(Function h, double duration, double max_frequency, Frame frame)
      : h_(std::move(h)), duration_(duration), max_frequency_(max_frequency), frame_(frame) {}

  Matrix operator()(double t) const { return h_(t); }
  double duration() const { return duration_; }
  double max_frequency() const { return max_frequency_; }
  Frame frame() const { return frame_; }

 private:
  Function h_;
  double duration_;
  double max_frequency_;
  Frame frame_;
};

// (Δ/2)σz + (ε_x/2)σx + (ε_y/2)σy.
inline Matrix2 single_qubit_hamiltonian(const ControlSample& c) {
  Matrix2 h;
  h(0, 0) = 0.5 * c.detuning;
  h(1, 1) = -0.5 * c.detuning;
  h(0, 1) = 0.5 * Complex(c.rabi_x, -c.rabi_y);
  h(1, 0) = 0.5 * Complex(c.rabi_x, c.rabi_y);
  return h;
}

inline HamiltonianModel<2> single_qubit_model(const PulseSchedule& schedule) {
  return HamiltonianModel<2>([schedule](double t) { return single_qubit_hamiltonian(schedule.eval(t)); },
                             schedule.duration(), schedule.max_frequency(), Frame::LabSingle);
}

template <int D>
HamiltonianModel<D> constant_model(const CMatrix<D>& h, double duration, Frame frame = Frame::LabSingle) {
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  return HamiltonianModel<D>([h](double) { return h; }, duration, scale, frame);
}

// ---------------------------------------------------------------------------
// Two atoms. Basis order |00>, |01>, |10>, |11>; the first label is atom 1.

namespace detail {

// Ω|1><0| + Ω*|0><1| for one atom.
inline Matrix2 atom_drive(Complex rabi) {
  Matrix2 h;
  h << 0.0, std::conj(rabi), rabi, 0.0;
  return h;
}

}  // namespace detail

/// Two-atom Hamiltonian at time t.
///
/// Lab: H₁⊗I + I⊗H₂ + V|11><11|. Rotated: the same couplings in the frame
/// of exp(−iVt|11><11|), so every coupling into |11> carries e^{−iVt}; the
/// blockade-leakage terms are kept.
inline Matrix4 two_qubit_hamiltonian(const TwoQubitSchedule& schedule, double t, Frame frame) {
  const auto [rabi1, rabi2] = schedule.atom_rabi(t);
  Matrix4 h = kron<2, 2>(detail::atom_drive(rabi1), pauli::identity()) +
              kron<2, 2>(pauli::identity(), detail::atom_drive(rabi2));
  switch (frame) {
    case Frame::LabTwoQubit:
      h(3, 3) += schedule.interaction();
      return h;
    case Frame::RotatedTwoQubit: {
      const Complex phase = std::exp(Complex(0.0, -schedule.interaction() * t));
      for (int k = 0; k < 3; ++k) {
        h(k, 3) *= phase;
        h(3, k) *= std::conj(phase);
      }
      return h;
    }
    default:
      throw PreconditionError("two-qubit Hamiltonian: frame must be lab or rotated");
  }
}

inline HamiltonianModel<4> two_qubit_model(const TwoQubitSchedule& schedule,
                                           Frame frame = Frame::RotatedTwoQubit) {
  if (frame != Frame::LabTwoQubit && frame != Frame::RotatedTwoQubit)
    throw PreconditionError("two-qubit model: frame must be lab or rotated");
  return HamiltonianModel<4>([schedule, frame](double t) { return two_qubit_hamiltonian(schedule, t, frame); },
                             schedule.duration(), schedule.max_frequency(), frame);
}

// |B> = sin(φ/2)|01> − cos(φ/2)|10>.
inline Vector4 bright_state(double mixing) {
  Vector4 v = Vector4::Zero();
  v(1) = std::sin(0.5 * mixing);
  v(2) = -std::cos(0.5 * mixing);
  return v;
}

// |B'> = cos(φ/2)|01> − sin(φ/2)|10>, the partner coupled to |11>.
inline Vector4 bright_partner(double mixing) {
  Vector4 v = Vector4::Zero();
  v(1) = std::cos(0.5 * mixing);
  v(2) = -std::sin(0.5 * mixing);
  return v;
}

/// Pseudo-spin Pauli operators on Span{|B>, |00>}:
/// σ̃x = |B><00| + h.c., σ̃y = −i|B><00| + h.c., σ̃z = |B><B| − |00><00|.
struct PseudoSpin {
  Matrix4 x, y, z;

  explicit PseudoSpin(double mixing) {
    const Vector4 b = bright_state(mixing);
    const Vector4 g = basis_state<4>(0);
    const Matrix4 up = b * g.adjoint();
    x = up + up.adjoint();
    y = -kI * up + kI * up.adjoint();
    z = b * b.adjoint() - g * g.adjoint();
  }

  Matrix4 component(const Vector3& n) const { return 0.5 * (n.x() * x + n.y() * y + n.z() * z); }
};

// Relabels |00>↔|11>, |01>↔|10>.
inline Matrix4 basis_reversal() {
  Matrix4 p = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) p(k, 3 - k) = 1.0;
  return p;
}

/// The averaged two-qubit generator as the 4×4 matrix
/// C·[[0,0,0,0],[0,cos²(φ/2),−sinφ/2,0],[0,−sinφ/2,sin²(φ/2),0],[0,0,0,−1]],
/// read with rows ordered |11>,|10>,|01>,|00> (see basis_reversal()).
inline Matrix4 averaged_two_qubit_matrix(double coupling, double mixing) {
  const double c = std::cos(0.5 * mixing);
  const double s = std::sin(0.5 * mixing);
  Matrix4 m = Matrix4::Zero();
  m(1, 1) = c * c;
  m(1, 2) = m(2, 1) = -0.5 * std::sin(mixing);
  m(2, 2) = s * s;
  m(3, 3) = -1.0;
  return coupling * m;
}

// ---------------------------------------------------------------------------
// Floquet-averaged generator.

enum class Subspace { Qubit, BrightGround };

/// Ω_eff(t)·F·n(t) with Ω(t)n(t) = r×ṙ/|r|² and Ω_eff = Ω·[1 − J₀(|r|/ω)].
/// Evolution under it is U = T exp(−i ∫ generator dt).
template <int D>
struct EffectiveGenerator {
  double magnitude = 0.0;      // Ω_eff, rad/μs
  Vector3 axis = Vector3::Zero();  // unit where magnitude ≠ 0, zero otherwise
  CMatrix<D> matrix = CMatrix<D>::Zero();
  Subspace subspace = Subspace::Qubit;
};

namespace detail {

struct AxisRate {
  double magnitude = 0.0;
  Vector3 axis = Vector3::Zero();
};

inline AxisRate averaged_axis(const Vector3& r, const Vector3& r_dot, double carrier) {
  const double r2 = r.squaredNorm();
  if (r2 == 0.0) return {};
  const Vector3 w = r.cross(r_dot) / r2;
  const double omega = w.norm();
  if (omega == 0.0) return {};
  return {omega * (1.0 - bessel_j0(std::sqrt(r2) / carrier)), w / omega};
}

}  // namespace detail

inline EffectiveGenerator<2> effective_generator(const PulseSchedule& schedule, double t) {
  EffectiveGenerator<2> g;
  if (!schedule.is_floquet()) return g;  // constant controls: ṙ = 0
  const auto [mag, axis] =
      detail::averaged_axis(schedule.envelope(t), schedule.envelope_rate(t), schedule.carrier_frequency());
  g.magnitude = mag;
  g.axis = axis;
  g.matrix = mag * spin_component(axis);
  return g;
}

inline EffectiveGenerator<4> effective_generator(const TwoQubitSchedule& schedule, double t) {
  EffectiveGenerator<4> g;
  g.subspace = Subspace::BrightGround;
  if (schedule.scheme() != Scheme::FGQC) return g;
  const auto [mag, axis] = detail::averaged_axis(schedule.envelope(t), schedule.envelope_rate(t),
                                                 schedule.parameters().carrier);
  g.magnitude = mag;
  g.axis = axis;
  g.matrix = mag * PseudoSpin(schedule.mixing_angle()).component(axis);
  return g;
}

/// t ↦ effective generator, on the schedule's time span.
template <int D>
class EffectiveModel {
 public:
  using Function = std::function<EffectiveGenerator<D>(double)>;

  EffectiveModel(Function g, double duration, double max_frequency)
      : g_(std::move(g)), duration_(duration), max_frequency_(max_frequency) {}

  EffectiveGenerator<D> operator()(double t) const { return g_(t); }
  double duration() const { return duration_; }
  double max_frequency() const { return max_frequency_; }

 private:
  Function g_;
  double duration_;
  double max_frequency_;
};

inline EffectiveModel<2> effective_model(const PulseSchedule& s) {
  return EffectiveModel<2>([s](double t) { return effective_generator(s, t); }, s.duration(),
                           std::max(s.rate(), 1e-300));
}

inline EffectiveModel<4> effective_model(const TwoQubitSchedule& s) {
  return EffectiveModel<4>([s](double t) { return effective_generator(s, t); }, s.duration(),
                           std::max(s.parameters().rate, 1e-300));
}

/// γ(t) = ∫₀ᵗ Ω_eff dt' by composite Simpson (2000 panels).
inline double geometric_angle(const PulseSchedule& schedule, double until) {
  if (!schedule.is_floquet()) throw PreconditionError("geometric_angle needs an FGQC schedule");
  if (until == 0.0) return 0.0;
  constexpr int kPanels = 2000;
  const double h = until / kPanels;
  double sum = 0.0;
  for (int k = 0; k <= kPanels; ++k) {
    const double w = (k == 0 || k == kPanels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * effective_generator(schedule, k * h).magnitude;
  }
  return sum * h / 3.0;
}

inline double geometric_angle(const PulseSchedule& schedule) {
  return geometric_angle(schedule, schedule.duration());
}

// ---------------------------------------------------------------------------
// Targets.

struct GateSpec {
  int dim = 2;
  double angle = 0.0;
  Vector3 axis = Vector3::UnitZ();
};

/// e^{iγ F·n}. Rejects |n| ≠ 1.
inline Matrix2 target_unitary(double angle, const Vector3& axis) {
  if (std::abs(axis.norm() - 1.0) > 1e-10) throw PreconditionError("target_unitary: axis is not a unit vector");
  return expm_hermitian<2>(spin_component(axis), -angle);
}

/// (γ, n) with e^{iγF·n} equal to the textbook gate up to global phase.
inline GateSpec gate_spec(Gate gate) {
  switch (gate) {
    case Gate::Z: return {2, kPi, Vector3::UnitZ()};
    case Gate::X: return {2, kPi, Vector3::UnitX()};
    case Gate::H: return {2, kPi, Vector3(1.0, 0.0, 1.0).normalized()};
    case Gate::T: return {2, kPi / 4, -Vector3::UnitZ()};
  }
  return {};
}

inline Matrix2 target_unitary(const GateSpec& spec) { return target_unitary(spec.angle, spec.axis); }
inline Matrix2 target_unitary(Gate gate) { return target_unitary(gate_spec(gate)); }

/// General SWAP-like propagator exp(−iτ·M) of averaged_two_qubit_matrix():
/// [[1,0,0,0],[0,(D1−D2cosφ)/2,D2sinφ/2,0],[0,D2sinφ/2,(D1+D2cosφ)/2,0],[0,0,0,e^{iCτ}]]
/// with D1 = 1 + e^{−iCτ}, D2 = 1 − e^{−iCτ}.
inline Matrix4 swap_like_propagator(double coupling_times_duration, double mixing) {
  const Complex e = std::exp(Complex(0.0, -coupling_times_duration));
  const Complex d1 = 1.0 + e;
  const Complex d2 = 1.0 - e;
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = 0.5 * (d1 - d2 * std::cos(mixing));
  u(1, 2) = u(2, 1) = 0.5 * d2 * std::sin(mixing);
  u(2, 2) = 0.5 * (d1 + d2 * std::cos(mixing));
  u(3, 3) = std::conj(e);
  return u;
}

// |00>→|00>, |01>↔|10>, |11>→−|11>.
inline Matrix4 swap_like_target() { return swap_like_propagator(kPi, kPi / 2); }

}  // namespace fgqc
