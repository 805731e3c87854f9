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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fgqc/dynamics.hpp"
#include "fgqc/errors.hpp"
#include "fgqc/grid.hpp"
#include "fgqc/linalg.hpp"
#include "fgqc/model.hpp"
#include "fgqc/noise.hpp"
#include "fgqc/parallel.hpp"
#include "fgqc/pulses.hpp"

namespace fgqc {

inline constexpr double kFidelityCeiling = 1.0 + 1e-9;
inline constexpr double kFidelityFloor = -1e-7;

// Clamps to [0, 1]; values past the ceiling or floor are integrator faults.
inline double clamp_fidelity(double f) {
  if (!std::isfinite(f) || f > kFidelityCeiling || f < kFidelityFloor) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "fidelity " << f << " outside [0, 1]";
    throw InvariantError(msg.str());
  }
  return std::clamp(f, 0.0, 1.0);
}

/// <ψ|ρ|ψ>, clamped to [0, 1].
template <class RhoT, class PsiT>
double state_fidelity(const Eigen::MatrixBase<RhoT>& rho, const Eigen::MatrixBase<PsiT>& psi) {
  if (rho.rows() != rho.cols() || psi.cols() != 1 || rho.rows() != psi.rows())
    throw PreconditionError("state_fidelity: dimension mismatch between state and density matrix");
  return clamp_fidelity((psi.adjoint() * rho * psi)(0, 0).real());
}

// |Tr(U†V)| / dim: agreement of two unitaries modulo global phase.
template <int D>
double unitary_fidelity(const CMatrix<D>& u, const CMatrix<D>& v) {
  return clamp_fidelity(std::abs((u.adjoint() * v).trace()) / D);
}

template <int D>
using StateMap = std::function<CMatrix<D>(const CMatrix<D>&)>;

template <int D>
StateMap<D> unitary_map(const CMatrix<D>& u) {
  return [u](const CMatrix<D>& rho) -> CMatrix<D> { return u * rho * u.adjoint(); };
}

// Θ_j = 2πj/(n − 1), both ends included.
inline std::vector<double> theta_grid(int n) {
  if (n < 2) throw PreconditionError("theta grid needs at least 2 points");
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = kTwoPi * j / (n - 1);
  return out;
}

/// Mean of <ψ_I|ρ_final|ψ_I> over cosΘ|0> + sinΘ|1>, ψ_I = target·ψ.
inline double gate_fidelity_theta(const StateMap<2>& evolve, const Matrix2& target, int n_theta = 101) {
  const auto thetas = theta_grid(n_theta);
  double sum = 0.0;
  for (double theta : thetas) {
    Vector2 psi;
    psi << std::cos(theta), std::sin(theta);
    sum += state_fidelity(evolve(pure_density(psi)), (target * psi).eval());
  }
  return clamp_fidelity(sum / n_theta);
}

/// Mean over the computational basis of <target·k|ρ_final|target·k>.
inline double two_qubit_fidelity(const StateMap<4>& evolve, const Matrix4& target) {
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Vector4 in = basis_state<4>(k);
    sum += state_fidelity(evolve(pure_density(in)), (target * in).eval());
  }
  return clamp_fidelity(sum / 4.0);
}

inline double two_qubit_fidelity(const Matrix4& u, const Matrix4& target) {
  return two_qubit_fidelity(unitary_map<4>(u), target);
}

// |<target|U|in>| for basis labels.
inline double transition_overlap(const Matrix4& u, int from, int to) { return std::abs(u(to, from)); }

template <int D>
std::vector<double> populations(const Trajectory<D>& traj, int k) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& rho : traj.states) out.push_back(rho(k, k).real());
  return out;
}

// ---------------------------------------------------------------------------
// Convergence gate: accept a grid once halving dt moves the figure by ≤ tol.

inline constexpr double kConvergenceTolerance = 1e-6;

struct Converged {
  double value = 0.0;
  std::size_t steps = 0;
  double change = 0.0;  // |f(dt) − f(dt/2)|
};

template <class F>
Converged converge(F&& f, TimeGrid grid, double tol = kConvergenceTolerance, int max_doublings = 4) {
  double v = f(grid);
  for (int i = 0; i <= max_doublings; ++i) {
    const TimeGrid fine = grid.refined();
    const double w = f(fine);
    if (std::abs(w - v) <= tol) return {v, grid.steps(), std::abs(w - v)};
    if (i == max_doublings) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "convergence gate failed: dt = " << grid.dt() << " us (" << grid.steps()
          << " steps) vs dt/2 changed the fidelity by " << std::abs(w - v) << " > " << tol;
      throw ConvergenceError(msg.str());
    }
    grid = fine;
    v = w;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Single-qubit gate runs.

/// One schedule plus static error and decoherence, compared to the gate target.
class GateSimulator {
 public:
  explicit GateSimulator(PulseSchedule schedule, double delta = 0.0, double gamma1_hz = 0.0,
                         double gamma2_hz = 0.0)
      : schedule_(std::move(schedule)),
        model_(single_qubit_model(schedule_)),
        target_(target_unitary(schedule_.gate())),
        channels_(decoherence_channels<2>(gamma1_hz, gamma2_hz)),
        delta_(delta) {
    std::erase_if(channels_, [](const Channel<2>& c) { return c.rate == 0.0; });
  }

  const PulseSchedule& schedule() const { return schedule_; }
  const HamiltonianModel<2>& model() const { return model_; }
  const Matrix2& target() const { return target_; }
  bool noiseless() const { return channels_.empty(); }
  TimeGrid base_grid() const { return TimeGrid::resolving(schedule_.duration(), schedule_.max_frequency()); }

  ControlError error(std::span<const double> path = {}, double zoom = 0.0) const { return {delta_, zoom, path}; }

  // ρ₀ ↦ ρ(τ). Without decoherence the propagator is built once.
  StateMap<2> final_map(const TimeGrid& grid, const ControlError& err) const {
    if (noiseless()) return unitary_map<2>(propagate_unitary(model_, grid, err));
    return [this, grid, err](const Matrix2& rho0) {
      return lindblad_evolve(model_, channels_, err, rho0, grid, 0).final_state();
    };
  }

  double gate_fidelity(const TimeGrid& grid, int n_theta = 101, std::span<const double> path = {},
                       double zoom = 0.0) const {
    return gate_fidelity_theta(final_map(grid, error(path, zoom)), target_, n_theta);
  }

  // Fidelity of ρ(τ) from |k> against target·|k>.
  double state_fidelity_from(int k, const TimeGrid& grid) const {
    const Vector2 in = basis_state<2>(k);
    return state_fidelity(final_map(grid, error())(pure_density(in)), (target_ * in).eval());
  }

  Trajectory<2> trajectory_from(int k, const TimeGrid& grid, std::size_t stride) const {
    return lindblad_evolve(model_, channels_, error(), pure_density(basis_state<2>(k)), grid, stride);
  }

 private:
  PulseSchedule schedule_;
  HamiltonianModel<2> model_;
  Matrix2 target_;
  std::vector<Channel<2>> channels_;
  double delta_;
};

// ---------------------------------------------------------------------------
// Sweeps.

struct Series {
  std::string label;
  std::vector<double> values;
  std::vector<double> standard_errors;  // empty unless ensemble-averaged
  std::vector<std::size_t> steps;
  std::vector<double> refinement_change;
};

/// Fidelity curves over one control parameter, with provenance.
struct SweepResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<Series> series;
  std::vector<std::pair<std::string, std::string>> metadata;

  const Series& find(std::string_view label) const {
    for (const auto& s : series)
      if (s.label == label) return s;
    throw PreconditionError("no series named '" + std::string(label) + "'");
  }

  void validate() const {
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) throw InvariantError("sweep grid is not strictly increasing");
    for (const auto& s : series) {
      if (s.values.size() != grid.size()) throw InvariantError("series '" + s.label + "' length mismatch");
      for (double v : s.values) clamp_fidelity(v);
    }
  }
};

inline void check_sweep_grid(std::span<const double> values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw PreconditionError("sweep grid must be strictly increasing");
}

struct SweepOptions {
  int theta_points = 101;
  double tolerance = kConvergenceTolerance;
  int max_doublings = 4;
  unsigned workers = 1;
};

inline std::string fidelity_label(Scheme s) {
  std::string name(to_string(s));
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return "F_" + name;
}

/// Noiseless Θ-averaged gate fidelity vs static δ, one series per scheme.
inline SweepResult robustness_sweep(std::span<const Scheme> schemes, Gate gate, std::span<const double> deltas,
                                    const SweepOptions& opt = {}) {
  check_sweep_grid(deltas);
  SweepResult out;
  out.parameter = "delta";
  out.grid.assign(deltas.begin(), deltas.end());
  const std::size_t nd = deltas.size();
  std::vector<Converged> cells(schemes.size() * nd);
  parallel_for(
      cells.size(),
      [&](std::size_t job) {
        const GateSimulator sim(make_schedule(schemes[job / nd], gate), deltas[job % nd]);
        cells[job] = converge([&](const TimeGrid& g) { return sim.gate_fidelity(g, opt.theta_points); },
                              sim.base_grid(), opt.tolerance, opt.max_doublings);
      },
      opt.workers);
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    Series series{fidelity_label(schemes[s]), {}, {}, {}, {}};
    for (std::size_t d = 0; d < nd; ++d) {
      const Converged& c = cells[s * nd + d];
      series.values.push_back(c.value);
      series.steps.push_back(c.steps);
      series.refinement_change.push_back(c.change);
    }
    out.series.push_back(std::move(series));
  }
  out.metadata = {{"gate", std::string(to_string(gate))}, {"theta_points", std::to_string(opt.theta_points)}};
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Two qubits.

inline TimeGrid two_qubit_base_grid(const TwoQubitSchedule& s) {
  return TimeGrid::resolving(s.duration(), s.max_frequency());
}

inline Matrix4 two_qubit_propagator(const TwoQubitSchedule& s, Frame frame, double delta, const TimeGrid& grid) {
  return propagate_unitary(two_qubit_model(s, frame), grid, ControlError{delta, 0.0, {}});
}

/// Computational-basis fidelity to the SWAP-like target vs static δ.
inline SweepResult two_qubit_sweep(std::span<const TwoQubitSchedule> schedules, std::span<const double> deltas,
                                   Frame frame, const SweepOptions& opt = {}) {
  check_sweep_grid(deltas);
  SweepResult out;
  out.parameter = "delta";
  out.grid.assign(deltas.begin(), deltas.end());
  const std::size_t nd = deltas.size();
  const Matrix4 target = swap_like_target();
  std::vector<Converged> cells(schedules.size() * nd);
  parallel_for(
      cells.size(),
      [&](std::size_t job) {
        const TwoQubitSchedule& s = schedules[job / nd];
        const double delta = deltas[job % nd];
        cells[job] = converge(
            [&](const TimeGrid& g) { return two_qubit_fidelity(two_qubit_propagator(s, frame, delta, g), target); },
            two_qubit_base_grid(s), opt.tolerance, opt.max_doublings);
      },
      opt.workers);
  for (std::size_t s = 0; s < schedules.size(); ++s) {
    Series series{fidelity_label(schedules[s].scheme()), {}, {}, {}, {}};
    for (std::size_t d = 0; d < nd; ++d) {
      const Converged& c = cells[s * nd + d];
      series.values.push_back(c.value);
      series.steps.push_back(c.steps);
      series.refinement_change.push_back(c.change);
    }
    out.series.push_back(std::move(series));
  }
  out.metadata = {{"frame", std::string(to_string(frame))}};
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// First-order error diagnostic.

/// Average of H over one carrier period at slow time t; the schedule itself
/// for carrier-free baselines.
inline Matrix2 period_averaged_hamiltonian(const PulseSchedule& s, double t, int samples = 64) {
  if (!s.is_floquet()) return single_qubit_hamiltonian(s.eval(t));
  Matrix2 sum = Matrix2::Zero();
  for (int k = 0; k < samples; ++k)
    sum += single_qubit_hamiltonian(s.eval_with_carrier(t, std::cos(kTwoPi * k / samples)));
  return sum / static_cast<double>(samples);
}

struct ErrorIntegral {
  Matrix2 q = Matrix2::Zero();
  double norm = 0.0;  // Frobenius
};

/// Q(τ) = ∫ U†(t) H̄(t) U(t) dt along the ideal evolution U, midpoint rule.
/// An error path scales H̄ step by step.
inline ErrorIntegral first_order_error_integral(const PulseSchedule& s, const TimeGrid& grid,
                                                const ControlError& error = {}) {
  const HamiltonianModel<2> model = single_qubit_model(s);
  detail::check_grid(model.duration(), model.max_frequency(), grid);
  const double dt = grid.dt();
  Matrix2 u = Matrix2::Identity();
  ErrorIntegral out;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const Matrix2 half = expm_hermitian<2>(model(t + 0.25 * dt), 0.5 * dt) * u;
    out.q += error.factor(k) * dt * (half.adjoint() * period_averaged_hamiltonian(s, t + 0.5 * dt) * half);
    u = expm_hermitian<2>(model(t + 0.5 * dt), dt) * u;
  }
  out.norm = out.q.norm();
  return out;
}

// ---------------------------------------------------------------------------
// Ornstein–Uhlenbeck ensembles.

struct EnsembleFidelity {
  double mean = 0.0;
  double standard_error = 0.0;
  double deterministic = 0.0;  // M = 0
  std::vector<double> samples;
};

/// Γ from the dimensionless Γτ and the reference run time.
inline double ou_rate(double gamma_tau, double reference_duration) { return gamma_tau / reference_duration; }

/// Mean noiseless gate fidelity over n O-U paths; realization i uses
/// derive_seed(seed, i). The mean is formed as f₀ + Σ(fᵢ − f₀)/n.
inline EnsembleFidelity ou_average_fidelity(const GateSimulator& sim, double zoom, double rate, int n,
                                            std::uint64_t seed, const TimeGrid& grid, int n_theta = 101,
                                            unsigned workers = 1) {
  if (!(zoom >= 0.0)) throw PreconditionError("ou_average_fidelity: M must be non-negative");
  if (n < 1) throw PreconditionError("ou_average_fidelity: need at least one realization");
  EnsembleFidelity out;
  out.deterministic = sim.gate_fidelity(grid, n_theta);
  out.samples.resize(n);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) {
        const std::vector<double> path = sample_ou_path(rate, grid, derive_seed(seed, i));
        out.samples[i] = sim.gate_fidelity(grid, n_theta, path, zoom);
      },
      workers);
  double shift = 0.0;
  for (double f : out.samples) shift += f - out.deterministic;
  out.mean = out.deterministic + shift / n;
  double ss = 0.0;
  for (double f : out.samples) ss += (f - out.mean) * (f - out.mean);
  out.standard_error = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------

/// Least-squares slope of log y against log x.
inline double fit_power_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fit_power_exponent: need matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_power_exponent: samples must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fgqc
