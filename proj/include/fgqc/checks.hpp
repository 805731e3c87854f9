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
#include <string>
#include <vector>

#include "fgqc/bessel.hpp"
#include "fgqc/csv.hpp"
#include "fgqc/dynamics.hpp"
#include "fgqc/metrics.hpp"
#include "fgqc/model.hpp"
#include "fgqc/noise.hpp"
#include "fgqc/pulses.hpp"

namespace fgqc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace checks {

inline CheckResult unitarity() {
  double worst = 0.0;
  for (Scheme s : {Scheme::FGQC, Scheme::NGQC, Scheme::DG})
    for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
      const GateSimulator sim(make_schedule(s, g));
      worst = std::max(worst, unitarity_defect(propagate_unitary(sim.model(), sim.base_grid())));
    }
  for (Scheme s : {Scheme::FGQC, Scheme::NGQC}) {
    const TwoQubitSchedule q = make_two_qubit_schedule(s);
    worst = std::max(worst, unitarity_defect(two_qubit_propagator(q, Frame::RotatedTwoQubit, 0.0,
                                                                  two_qubit_base_grid(q))));
  }
  return {"propagator unitarity <= 1e-9", worst <= 1e-9, "max defect " + format_number(worst)};
}

inline CheckResult trace_conservation() {
  const GateSimulator sim(make_fgqc_schedule(Gate::Z), 0.05, 12.83, 128.3);
  const Trajectory<2> traj = sim.trajectory_from(1, sim.base_grid(), 1);
  double worst = 0.0;
  for (const auto& rho : traj.states) worst = std::max(worst, std::abs(rho.trace() - 1.0));
  bool ok = worst <= 1e-8;
  std::string detail = "max |tr rho - 1| " + format_number(worst);
  try {
    traj.check_invariants();
  } catch (const InvariantError& e) {
    ok = false;
    detail += "; " + std::string(e.what());
  }
  return {"trace conservation <= 1e-8", ok, detail};
}

inline CheckResult analytic_channels() {
  const double rate = 0.3;  // 1/μs, large enough to be visible
  const double tau = 2.0;
  const HamiltonianModel<2> zero = constant_model<2>(Matrix2::Zero(), tau);
  const TimeGrid grid(tau, 2000);
  std::vector<Channel<2>> dephase{{ChannelKind::Dephase, 0, pauli::z(), rate}};
  std::vector<Channel<2>> decay{{ChannelKind::Decay, 0, pauli::lowering(), rate}};
  Vector2 plus;
  plus << std::sqrt(0.5), std::sqrt(0.5);
  const Trajectory<2> a = lindblad_evolve(zero, dephase, {}, pure_density(plus), grid);
  const Trajectory<2> b = lindblad_evolve(zero, decay, {}, pure_density(basis_state<2>(1)), grid);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const double t = a.times[k];
    worst = std::max(worst, std::abs(a.states[k](0, 1) - 0.5 * std::exp(-2.0 * rate * t)));
    worst = std::max(worst, std::abs(b.states[k](1, 1).real() - std::exp(-rate * t)));
  }
  return {"dephasing/decay analytic curves <= 1e-6", worst <= 1e-6, "max deviation " + format_number(worst)};
}

// The three J₀ branches agree with each other where their ranges meet.
inline CheckResult bessel_branches() {
  double worst = 0.0;
  for (int k = 0; k <= 800; ++k) {
    const double x = 0.01 * k;
    worst = std::max(worst, std::abs(detail::j0_series(x) - detail::j0_backward(x)));
  }
  for (int k = 0; k <= 2500; ++k) {
    const double x = 25.0 + 0.01 * k;
    worst = std::max(worst, std::abs(detail::j0_asymptotic(x) - detail::j0_backward(x)));
  }
  return {"J0 branch agreement <= 1e-12", worst <= 1e-12, "max difference " + format_number(worst)};
}

inline CheckResult dt_halving() {
  double worst = 0.0;
  std::string detail;
  bool ok = true;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const GateSimulator sim(make_fgqc_schedule(g), 0.05, 12.83, 128.3);
    const TimeGrid grid = sim.base_grid();
    const double change = std::abs(sim.gate_fidelity(grid) - sim.gate_fidelity(grid.refined()));
    worst = std::max(worst, change);
  }
  ok = worst <= 1e-6;
  detail = "max change " + format_number(worst);
  return {"dt halving moves gate fidelity <= 1e-6", ok, detail};
}

inline CheckResult seeded_rerun() {
  const GateSimulator sim(make_fgqc_schedule(Gate::Z));
  const TimeGrid grid = sim.base_grid();
  const double rate = ou_rate(1e-3, sim.schedule().duration());
  const EnsembleFidelity a = ou_average_fidelity(sim, 0.1, rate, 8, 7, grid, 11, 1);
  const EnsembleFidelity b = ou_average_fidelity(sim, 0.1, rate, 8, 7, grid, 11, 4);
  const bool same = a.samples == b.samples && a.mean == b.mean && a.standard_error == b.standard_error;
  return {"seeded ensemble reruns bit-identical", same, "mean " + format_number(a.mean)};
}

inline CheckResult floquet_approximation() {
  double worst = 1.0;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(g);
    const GateSimulator sim(s);
    const Matrix2 exact = propagate_unitary(sim.model(), sim.base_grid());
    const EffectiveModel<2> eff = effective_model(s);
    const Matrix2 avg = propagate_effective(eff, TimeGrid::resolving(s.duration(), eff.max_frequency()));
    worst = std::min(worst, unitary_fidelity(exact, avg));
  }
  return {"exact vs averaged propagation >= 0.999", worst >= 0.999, "min fidelity " + format_number(worst)};
}

inline CheckResult first_order_cancellation() {
  double worst = 0.0;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(g);
    worst = std::max(worst, first_order_error_integral(s, TimeGrid::resolving(s.duration(), s.max_frequency())).norm);
  }
  return {"FGQC first-order error integral <= 1e-8", worst <= 1e-8, "max norm " + format_number(worst)};
}

}  // namespace checks

/// Numerical-hygiene suite behind the `check` verb.
inline std::vector<CheckResult> run_checks() {
  return {checks::unitarity(),       checks::trace_conservation(), checks::analytic_channels(),
          checks::bessel_branches(), checks::dt_halving(),         checks::seeded_rerun(),
          checks::floquet_approximation(), checks::first_order_cancellation()};
}

}  // namespace fgqc
