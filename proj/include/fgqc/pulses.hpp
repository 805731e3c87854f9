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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fgqc/bessel.hpp"
#include "fgqc/errors.hpp"
#include "fgqc/linalg.hpp"

namespace fgqc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Scheme { FGQC, NGQC, DG };
enum class Gate { Z, X, H, T };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::FGQC: return "FGQC";
    case Scheme::NGQC: return "NGQC";
    case Scheme::DG: return "DG";
  }
  return "?";
}

inline std::string_view to_string(Gate g) {
  switch (g) {
    case Gate::Z: return "Z";
    case Gate::X: return "X";
    case Gate::H: return "H";
    case Gate::T: return "T";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  if (name == "FGQC" || name == "fgqc") return Scheme::FGQC;
  if (name == "NGQC" || name == "ngqc") return Scheme::NGQC;
  if (name == "DG" || name == "dg") return Scheme::DG;
  throw PreconditionError("unknown scheme '" + std::string(name) + "'");
}

inline Gate parse_gate(std::string_view name) {
  if (name == "Z" || name == "z") return Gate::Z;
  if (name == "X" || name == "x") return Gate::X;
  if (name == "H" || name == "h") return Gate::H;
  if (name == "T" || name == "t") return Gate::T;
  throw PreconditionError("unknown gate '" + std::string(name) + "'");
}

// Rotation angle each gate needs from the geometric phase.
inline double target_angle(Gate g) { return g == Gate::T ? kPi / 4.0 : kPi; }

/// Control values at one instant, all in rad/μs.
///
/// The polar drive ε·e^{iφ} maps to rabi_x = ε·cosφ, rabi_y = ε·sinφ.
struct ControlSample {
  double detuning = 0.0;
  double rabi_x = 0.0;
  double rabi_y = 0.0;
};

// Constant controls on [start, end).
struct Segment {
  double start = 0.0;
  double end = 0.0;
  ControlSample controls;
  double phase = 0.0;  // drive phase, for the NGQC tables
};

// Parameters of an FGQC single-qubit schedule (angular units, rad/μs and μs).
struct FgqcParameters {
  double omega0 = 2.0 * kTwoPi;
  double carrier = 0.513 * kTwoPi;
  double rate = 45.728 * kTwoPi * 1e-3;  // N, M, N_H or N_T
  double duration = 0.0;
  double carrier_phase = 0.0;  // θ₀

  /// Defaults used for the Z/X/H gates and, with two carrier periods, the T gate.
  static FgqcParameters defaults(Gate gate) {
    FgqcParameters p;
    const double periods = gate == Gate::T ? 2.0 : 8.0;  // ωτ = periods·π
    p.duration = periods * kPi / p.carrier;
    return p;
  }
};

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

// ωτ must be a positive integer multiple of π, so sin(ωτ + θ₀) = sin(θ₀).
inline void check_carrier_boundary(double carrier, double duration) {
  const double k = carrier * duration / kPi;
  const double nearest = std::round(k);
  if (nearest < 1.0 || std::abs(k - nearest) > 1e-9 * std::max(1.0, k)) {
    throw PreconditionError("carrier boundary condition violated: omega*tau/pi = " +
                            format_double(k) + " is not a positive integer");
  }
}

}  // namespace detail

/// Closed-form control schedule for one scheme/gate pair.
///
/// FGQC schedules are cos(ωt+θ₀)·F·r(t) with r(t) the slow envelope; the
/// baselines are piecewise constant. Instances are immutable.
class PulseSchedule {
 public:
  Scheme scheme() const { return scheme_; }
  Gate gate() const { return gate_; }
  double duration() const { return duration_; }
  double omega0() const { return omega0_; }
  double carrier_frequency() const { return carrier_; }
  double carrier_phase() const { return carrier_phase_; }
  double rate() const { return rate_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool is_floquet() const { return scheme_ == Scheme::FGQC; }

  // Fastest frequency the integrator has to resolve.
  double max_frequency() const {
    return is_floquet() ? std::max(omega0_, carrier_) : omega0_;
  }

  ControlSample eval(double t) const {
    t = checked_time(t);
    if (is_floquet()) return from_envelope(envelope(t), carrier(t));
    return segment_at(t).controls;
  }

  /// Controls with the fast factor cos(ωt+θ₀) replaced by `carrier_value`.
  /// Baselines have no fast factor and ignore the argument.
  ControlSample eval_with_carrier(double t, double carrier_value) const {
    t = checked_time(t);
    if (is_floquet()) return from_envelope(envelope(t), carrier_value);
    return segment_at(t).controls;
  }

  double carrier(double t) const {
    return is_floquet() ? std::cos(carrier_ * t + carrier_phase_) : 1.0;
  }

  /// Slow envelope r(t) = (ε₀cosφ, ε₀sinφ, Δ₀). Baselines return their
  /// constant control vector.
  Vector3 envelope(double t) const {
    if (!is_floquet()) {
      const ControlSample c = segment_at(checked_time(t)).controls;
      return {c.rabi_x, c.rabi_y, c.detuning};
    }
    const double a = rate_ * t;
    const double s = std::sin(a);
    const double c = std::cos(a);
    switch (gate_) {
      case Gate::Z:
      case Gate::T: return omega0_ * Vector3(c, s, 0.0);
      case Gate::X: return omega0_ * Vector3(0.0, s, c);
      case Gate::H: return omega0_ * Vector3(s / std::numbers::sqrt2, c, -s / std::numbers::sqrt2);
    }
    return Vector3::Zero();
  }

  // dr/dt in closed form; zero for the piecewise-constant baselines.
  Vector3 envelope_rate(double t) const {
    if (!is_floquet()) return Vector3::Zero();
    const double a = rate_ * t;
    const double s = std::sin(a);
    const double c = std::cos(a);
    const double k = omega0_ * rate_;
    switch (gate_) {
      case Gate::Z:
      case Gate::T: return k * Vector3(-s, c, 0.0);
      case Gate::X: return k * Vector3(0.0, c, -s);
      case Gate::H: return k * Vector3(c / std::numbers::sqrt2, -s, -c / std::numbers::sqrt2);
    }
    return Vector3::Zero();
  }

  const Segment& segment_at(double t) const {
    for (const Segment& s : segments_)
      if (t < s.end) return s;
    return segments_.back();  // t == τ belongs to the last segment
  }

  /// rate·[1 − J₀(Ω₀/ω)]·τ, the rotation angle an FGQC schedule accumulates.
  double calibrated_angle() const {
    return rate_ * (1.0 - bessel_j0(omega0_ / carrier_)) * duration_;
  }

  friend PulseSchedule make_fgqc_schedule(Gate, const FgqcParameters&);
  friend PulseSchedule make_baseline_schedule(Scheme, Gate, double);

 private:
  PulseSchedule() = default;

  static ControlSample from_envelope(const Vector3& r, double f) {
    return {f * r.z(), f * r.x(), f * r.y()};
  }

  double checked_time(double t) const {
    const double slack = 1e-12 * std::max(1.0, duration_);
    if (!(t >= -slack && t <= duration_ + slack)) {
      throw PreconditionError("time " + detail::format_double(t) + " outside [0, " +
                              detail::format_double(duration_) + "]");
    }
    return std::clamp(t, 0.0, duration_);
  }

  Scheme scheme_ = Scheme::FGQC;
  Gate gate_ = Gate::Z;
  double duration_ = 0.0;
  double omega0_ = 0.0;
  double carrier_ = 0.0;
  double carrier_phase_ = 0.0;
  double rate_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<std::string> warnings_;
};

/// FGQC schedule for `gate`. Rejects ωτ ≠ kπ; a rotation angle off by more
/// than 1% from the gate's target is recorded as a warning only.
inline PulseSchedule make_fgqc_schedule(Gate gate, const FgqcParameters& p) {
  if (!(p.omega0 > 0.0) || !(p.carrier > 0.0) || !(p.duration > 0.0))
    throw PreconditionError("FGQC schedule needs positive omega0, carrier and duration");
  detail::check_carrier_boundary(p.carrier, p.duration);
  PulseSchedule s;
  s.scheme_ = Scheme::FGQC;
  s.gate_ = gate;
  s.duration_ = p.duration;
  s.omega0_ = p.omega0;
  s.carrier_ = p.carrier;
  s.carrier_phase_ = p.carrier_phase;
  s.rate_ = p.rate;
  const double angle = s.calibrated_angle();
  const double want = target_angle(gate);
  if (std::abs(angle - want) > 0.01 * want) {
    s.warnings_.push_back("rotation angle " + detail::format_double(angle) + " differs from target " +
                          detail::format_double(want) + " by more than 1%");
  }
  return s;
}

inline PulseSchedule make_fgqc_schedule(Gate gate) {
  return make_fgqc_schedule(gate, FgqcParameters::defaults(gate));
}

/// NGQC or DG baseline, piecewise constant.
inline PulseSchedule make_baseline_schedule(Scheme scheme, Gate gate, double omega0 = 2.0 * kTwoPi) {
  if (scheme == Scheme::FGQC) throw PreconditionError("FGQC is not a baseline scheme");
  if (!(omega0 > 0.0)) throw PreconditionError("baseline schedule needs omega0 > 0");
  PulseSchedule s;
  s.scheme_ = scheme;
  s.gate_ = gate;
  s.omega0_ = omega0;

  auto drive = [omega0](double phase) {
    return ControlSample{0.0, omega0 * std::cos(phase), omega0 * std::sin(phase)};
  };
  // (fraction of τ at which the segment ends, phase)
  auto phase_table = [&](std::initializer_list<std::pair<double, double>> table) {
    double start = 0.0;
    for (const auto& [frac, phase] : table) {
      const double end = frac * s.duration_;
      s.segments_.push_back({start, end, drive(phase), phase});
      start = end;
    }
  };

  if (scheme == Scheme::NGQC) {
    s.duration_ = kTwoPi / omega0;
    switch (gate) {
      case Gate::Z: phase_table({{0.5, kPi}, {1.0, -kPi / 2}}); break;
      case Gate::X: phase_table({{0.25, -kPi / 2}, {0.75, kPi}, {1.0, -kPi / 2}}); break;
      case Gate::H: phase_table({{0.125, -kPi / 2}, {0.625, 0.0}, {1.0, -kPi / 2}}); break;
      case Gate::T: phase_table({{0.5, kPi / 2}, {1.0, kPi / 2 + kPi / 8}}); break;
    }
    return s;
  }

  ControlSample c;
  switch (gate) {
    case Gate::Z:
      s.duration_ = kPi / omega0;
      c = {omega0, 0.0, 0.0};
      break;
    case Gate::X:
      s.duration_ = kPi / omega0;
      c = {0.0, omega0, 0.0};
      break;
    case Gate::H:
      s.duration_ = kPi / omega0;
      c = {omega0 / std::numbers::sqrt2, omega0 / std::numbers::sqrt2, 0.0};
      break;
    case Gate::T:
      s.duration_ = 0.25 * kPi / omega0;
      c = {omega0, 0.0, 0.0};
      break;
  }
  s.segments_.push_back({0.0, s.duration_, c, 0.0});
  return s;
}

inline PulseSchedule make_schedule(Scheme scheme, Gate gate) {
  return scheme == Scheme::FGQC ? make_fgqc_schedule(gate) : make_baseline_schedule(scheme, gate);
}

// ---------------------------------------------------------------------------
// Two atoms with Rydberg blockade.

struct TwoQubitParameters {
  Scheme scheme = Scheme::FGQC;
  double omega0 = 2.0 * kTwoPi;
  double carrier = 0.52 * kTwoPi;
  double rate = 0.58;  // N, phase ramp φ(t) = N t
  double interaction = 330.0;  // V
  double mixing_angle = kPi / 2;
  double duration = 0.0;

  /// FGQC defaults: τ = 8π/ω and N closing |C|τ = π exactly (N ≈ 0.5823).
  static TwoQubitParameters defaults(Scheme scheme = Scheme::FGQC) {
    TwoQubitParameters p;
    p.scheme = scheme;
    if (scheme == Scheme::NGQC) {
      p.duration = kTwoPi / p.omega0;
      p.rate = 0.0;
      return p;
    }
    p.duration = 8.0 * kPi / p.carrier;
    p.rate = kTwoPi / ((1.0 - bessel_j0(p.omega0 / p.carrier)) * p.duration);
    return p;
  }
};

/// Ω_R(t) = (Ω₀/2)·cos(ωt)·e^{iNt} (FGQC) or Ω₀/2 (NGQC), split onto the two
/// atoms as Ω₁ = −Ω_R cos(φ/2), Ω₂ = Ω_R sin(φ/2).
class TwoQubitSchedule {
 public:
  Scheme scheme() const { return p_.scheme; }
  const TwoQubitParameters& parameters() const { return p_; }
  double duration() const { return p_.duration; }
  double interaction() const { return p_.interaction; }
  double mixing_angle() const { return p_.mixing_angle; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double max_frequency() const { return std::max({p_.omega0, p_.carrier, p_.interaction}); }

  // C = −(N/2)[1 − J₀(Ω₀/ω)].
  double effective_coupling() const {
    return -0.5 * p_.rate * (1.0 - bessel_j0(p_.omega0 / p_.carrier));
  }

  double carrier(double t) const {
    return p_.scheme == Scheme::FGQC ? std::cos(p_.carrier * t) : 1.0;
  }

  Complex rabi(double t) const { return rabi_with_carrier(t, carrier(checked_time(t))); }

  Complex rabi_with_carrier(double t, double carrier_value) const {
    t = checked_time(t);
    if (p_.scheme == Scheme::NGQC) return 0.5 * p_.omega0;
    return 0.5 * p_.omega0 * carrier_value * std::exp(Complex(0.0, p_.rate * t));
  }

  std::pair<Complex, Complex> atom_rabi(double t) const {
    const Complex r = rabi(t);
    return {-r * std::cos(0.5 * p_.mixing_angle), r * std::sin(0.5 * p_.mixing_angle)};
  }

  /// Slow envelope r'(t) = Ω₀(cos Nt, −sin Nt, 0) in the {|B>, |00>} pseudo-spin.
  Vector3 envelope(double t) const {
    const double a = p_.rate * t;
    return p_.omega0 * Vector3(std::cos(a), -std::sin(a), 0.0);
  }

  Vector3 envelope_rate(double t) const {
    const double a = p_.rate * t;
    return p_.omega0 * p_.rate * Vector3(-std::sin(a), -std::cos(a), 0.0);
  }

  friend TwoQubitSchedule make_two_qubit_schedule(const TwoQubitParameters&);

 private:
  TwoQubitSchedule() = default;

  double checked_time(double t) const {
    const double slack = 1e-12 * std::max(1.0, p_.duration);
    if (!(t >= -slack && t <= p_.duration + slack))
      throw PreconditionError("time " + detail::format_double(t) + " outside [0, tau]");
    return std::clamp(t, 0.0, p_.duration);
  }

  TwoQubitParameters p_;
  std::vector<std::string> warnings_;
};

inline TwoQubitSchedule make_two_qubit_schedule(const TwoQubitParameters& p) {
  if (p.scheme == Scheme::DG) throw PreconditionError("no DG two-qubit gate");
  if (!(p.omega0 > 0.0) || !(p.duration > 0.0) || !(p.interaction > 0.0))
    throw PreconditionError("two-qubit schedule needs positive omega0, duration and V");
  TwoQubitSchedule s;
  s.p_ = p;
  if (p.scheme == Scheme::FGQC) {
    if (!(p.carrier > 0.0)) throw PreconditionError("FGQC two-qubit schedule needs omega > 0");
    detail::check_carrier_boundary(p.carrier, p.duration);
    const double angle = std::abs(s.effective_coupling()) * p.duration;
    if (std::abs(angle - kPi) > 0.01 * kPi)
      s.warnings_.push_back("|C|tau = " + detail::format_double(angle) + " differs from pi by more than 1%");
  }
  if (p.interaction <= 10.0 * p.omega0)
    s.warnings_.push_back("V <= 10*omega0: blockade approximation degraded");
  return s;
}

inline TwoQubitSchedule make_two_qubit_schedule(Scheme scheme = Scheme::FGQC) {
  return make_two_qubit_schedule(TwoQubitParameters::defaults(scheme));
}

}  // namespace fgqc
