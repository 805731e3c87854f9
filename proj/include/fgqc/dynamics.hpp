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
#include <cstddef>
#include <sstream>
#include <vector>

#include "fgqc/errors.hpp"
#include "fgqc/grid.hpp"
#include "fgqc/linalg.hpp"
#include "fgqc/model.hpp"
#include "fgqc/noise.hpp"

namespace fgqc {

inline constexpr double kPropagatorUnitarity = 1e-9;
inline constexpr double kTraceDriftLimit = 1e-6;

namespace detail {

inline void check_grid(double model_duration, double max_frequency, const TimeGrid& grid) {
  if (std::abs(grid.duration() - model_duration) > 1e-12 * std::max(1.0, model_duration))
    throw PreconditionError("time grid does not span the model duration");
  grid.validate(max_frequency);
}

inline void check_path(const ControlError& error, const TimeGrid& grid) {
  if (!error.path.empty() && error.path.size() < grid.steps())
    throw PreconditionError("control-error path is shorter than the time grid");
}

template <int D>
void check_propagator(const CMatrix<D>& u) {
  const double defect = unitarity_defect(u);
  if (defect > kPropagatorUnitarity) {
    std::ostringstream msg;
    msg << "propagator lost unitarity (defect " << defect << ")";
    throw IntegrationError(msg.str(), 0);
  }
}

}  // namespace detail

/// T exp(−i∫H'dt) by midpoint-exponential steps,
/// U ← exp(−i·H'((k+½)dt)·dt)·U.
template <int D>
CMatrix<D> propagate_unitary(const HamiltonianModel<D>& model, const TimeGrid& grid,
                             const ControlError& error = {}) {
  detail::check_grid(model.duration(), model.max_frequency(), grid);
  detail::check_path(error, grid);
  const double dt = grid.dt();
  CMatrix<D> u = CMatrix<D>::Identity();
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    u = expm_hermitian<D>(apply_error<D>(model(t), error, k), dt) * u;
  }
  detail::check_propagator(u);
  return u;
}

/// Same stepping applied to the averaged generator.
template <int D>
CMatrix<D> propagate_effective(const EffectiveModel<D>& model, const TimeGrid& grid) {
  detail::check_grid(model.duration(), model.max_frequency(), grid);
  const double dt = grid.dt();
  CMatrix<D> u = CMatrix<D>::Identity();
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    u = expm_hermitian<D>(model(t).matrix, dt) * u;
  }
  detail::check_propagator(u);
  return u;
}

// ---------------------------------------------------------------------------
// Master equation.

/// Density-matrix snapshots on (a subset of) the grid nodes. The final
/// node is always stored.
template <int D>
struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix<D>> states;

  const CMatrix<D>& final_state() const { return states.back(); }

  // Hermiticity 1e-10, unit trace 1e-8, smallest eigenvalue ≥ −1e-7.
  void check_invariants() const {
    for (std::size_t k = 0; k < states.size(); ++k) {
      const CMatrix<D>& rho = states[k];
      std::ostringstream where;
      where << " at t = " << times[k];
      if (max_asymmetry(rho) > 1e-10) throw InvariantError("density matrix not Hermitian" + where.str());
      if (std::abs(rho.trace() - 1.0) > 1e-8) throw InvariantError("density matrix trace drifted" + where.str());
      Eigen::SelfAdjointEigenSolver<CMatrix<D>> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
      if (solver.eigenvalues()(0) < -1e-7) throw InvariantError("density matrix not positive" + where.str());
    }
  }
};

template <int D>
class Lindbladian {
 public:
  explicit Lindbladian(const std::vector<Channel<D>>& channels) {
    for (const auto& c : channels) {
      if (!(c.rate >= 0.0)) throw PreconditionError("Lindblad channel rate must be non-negative");
      if (c.rate == 0.0) continue;
      terms_.push_back({c.op, c.op.adjoint(), c.op.adjoint() * c.op, c.rate});
    }
  }

  // −i[H,ρ] + Σ γ(AρA† − ½{A†A, ρ}).
  CMatrix<D> operator()(const CMatrix<D>& h, const CMatrix<D>& rho) const {
    CMatrix<D> out = -kI * (h * rho - rho * h);
    for (const auto& t : terms_)
      out += t.rate * (t.op * rho * t.op_dag - 0.5 * (t.number * rho + rho * t.number));
    return out;
  }

 private:
  struct Term {
    CMatrix<D> op, op_dag, number;
    double rate;
  };
  std::vector<Term> terms_;
};

/// RK4 integration of dρ/dt = −i[H',ρ] + Σ γ D[A]ρ. The control-error factor
/// is held fixed within each step. `stride` sets which nodes are stored.
template <int D>
Trajectory<D> lindblad_evolve(const HamiltonianModel<D>& model, const std::vector<Channel<D>>& channels,
                              const ControlError& error, const CMatrix<D>& rho0, const TimeGrid& grid,
                              std::size_t stride = 1) {
  detail::check_grid(model.duration(), model.max_frequency(), grid);
  detail::check_path(error, grid);
  if (max_asymmetry(rho0) > 1e-10 || std::abs(rho0.trace() - 1.0) > 1e-10)
    throw PreconditionError("lindblad_evolve: initial state is not a density matrix");
  if (stride == 0) stride = grid.steps();
  const Lindbladian<D> rhs(channels);
  const double dt = grid.dt();

  Trajectory<D> traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  CMatrix<D> rho = rho0;
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double f = error.factor(k);
    const CMatrix<D> h0 = f * model(t);
    const CMatrix<D> hm = f * model(t + 0.5 * dt);
    const CMatrix<D> h1 = f * model(grid.time(k + 1));
    const CMatrix<D> k1 = rhs(h0, rho);
    const CMatrix<D> k2 = rhs(hm, rho + 0.5 * dt * k1);
    const CMatrix<D> k3 = rhs(hm, rho + 0.5 * dt * k2);
    const CMatrix<D> k4 = rhs(h1, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double drift = std::abs(rho.trace() - 1.0);
    if (drift > kTraceDriftLimit) {
      std::ostringstream msg;
      msg << "lindblad_evolve: trace drift " << drift << " at step " << k + 1;
      throw IntegrationError(msg.str(), k + 1);
    }
    if ((k + 1) % stride == 0 || k + 1 == grid.steps()) {
      traj.times.push_back(grid.time(k + 1));
      traj.states.push_back(rho);
    }
  }
  return traj;
}

}  // namespace fgqc
