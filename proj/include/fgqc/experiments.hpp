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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fgqc/config.hpp"
#include "fgqc/csv.hpp"
#include "fgqc/dynamics.hpp"
#include "fgqc/metrics.hpp"
#include "fgqc/model.hpp"
#include "fgqc/noise.hpp"
#include "fgqc/pulses.hpp"

namespace fgqc {

/// Output bundle under construction: CSVs plus summary lines.
class RunContext {
 public:
  RunContext(std::filesystem::path dir, unsigned workers) : dir_(std::move(dir)), workers_(workers) {}

  const std::filesystem::path& dir() const { return dir_; }
  unsigned workers() const { return workers_; }
  const std::vector<std::string>& summary() const { return summary_; }
  const std::vector<std::string>& files() const { return files_; }

  void line(std::string s) { summary_.push_back(std::move(s)); }

  void kv(const std::string& key, const std::string& value) { line(key + " = " + value); }
  void kv(const std::string& key, double value) { kv(key, format_number(value)); }

  void csv(const std::string& name, const CsvTable& table) {
    emit_csv(table, dir_ / name);
    files_.push_back(name);
  }

 private:
  std::filesystem::path dir_;
  unsigned workers_;
  std::vector<std::string> summary_;
  std::vector<std::string> files_;
};

using ExperimentRunner = std::function<void(RunContext&)>;
// Reads the experiment's parameters and returns the deferred computation.
using ExperimentPlanner = ExperimentRunner (*)(ConfigReader&);

struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
  ExperimentPlanner plan;
};

namespace experiments {

inline std::vector<double> symmetric_grid(double limit, double step) {
  const int n = static_cast<int>(std::lround(limit / step));
  std::vector<double> out;
  for (int k = -n; k <= n; ++k) out.push_back(k * step);
  return out;
}

inline std::vector<Scheme> read_schemes(ConfigReader& r, const std::vector<std::string>& fallback) {
  std::vector<Scheme> out;
  for (const auto& name : r.texts("schemes", fallback)) {
    try {
      out.push_back(parse_scheme(name));
    } catch (const PreconditionError& e) {
      r.fail("schemes", e.what());
    }
  }
  if (out.empty()) r.fail("schemes", "must not be empty");
  return out;
}

inline Gate read_gate(ConfigReader& r, const std::string& key, const std::string& fallback) {
  const std::string name = r.text(key, fallback);
  try {
    return parse_gate(name);
  } catch (const PreconditionError& e) {
    r.fail(key, e.what());
  }
}

inline std::vector<Gate> read_gates(ConfigReader& r, const std::vector<std::string>& fallback) {
  std::vector<Gate> out;
  for (const auto& name : r.texts("gates", fallback)) {
    try {
      out.push_back(parse_gate(name));
    } catch (const PreconditionError& e) {
      r.fail("gates", e.what());
    }
  }
  if (out.empty()) r.fail("gates", "must not be empty");
  return out;
}

inline std::vector<double> read_grid(ConfigReader& r, const std::string& key, const std::vector<double>& fallback) {
  std::vector<double> g = r.numbers(key, fallback);
  if (g.empty()) r.fail(key, "must not be empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) r.fail(key, "must be strictly increasing");
  return g;
}

inline int read_theta_points(ConfigReader& r) {
  return static_cast<int>(r.integer("theta_points", 101, 2));
}

// Θ points plus the optional "convergence" block.
inline SweepOptions read_sweep_options(ConfigReader& r) {
  SweepOptions opt;
  opt.theta_points = read_theta_points(r);
  ConfigReader c = r.child("convergence");
  opt.tolerance = c.number("tolerance", kConvergenceTolerance);
  if (!(opt.tolerance > 0.0)) c.fail("tolerance", "must be positive");
  opt.max_doublings = static_cast<int>(c.integer("max_doublings", 4, 0));
  c.finish();
  return opt;
}

/// Single-qubit schedule with optional overrides under "pulse".
inline PulseSchedule read_schedule(ConfigReader& pulse, Scheme scheme, Gate gate) {
  if (scheme != Scheme::FGQC) {
    const double omega0 = pulse.number("omega0", 2.0 * kTwoPi);
    pulse.finish();
    return make_baseline_schedule(scheme, gate, omega0);
  }
  FgqcParameters p = FgqcParameters::defaults(gate);
  const double periods = p.duration * p.carrier / kPi;
  p.omega0 = pulse.number("omega0", p.omega0);
  p.carrier = pulse.number("carrier", p.carrier);
  p.rate = pulse.number("rate", p.rate);
  p.duration = pulse.number("duration", periods * kPi / p.carrier);
  p.carrier_phase = pulse.number("carrier_phase", p.carrier_phase);
  pulse.finish();
  return make_fgqc_schedule(gate, p);
}

inline TwoQubitSchedule read_two_qubit_schedule(ConfigReader& pulse, Scheme scheme) {
  TwoQubitParameters p = TwoQubitParameters::defaults(scheme);
  p.omega0 = pulse.number("omega0", p.omega0);
  p.interaction = pulse.number("interaction", p.interaction);
  p.mixing_angle = pulse.number("mixing_angle", p.mixing_angle);
  if (scheme == Scheme::FGQC) {
    p.carrier = pulse.number("carrier", p.carrier);
    p.duration = pulse.number("duration", 8.0 * kPi / p.carrier);
    p.rate = pulse.number("rate", kTwoPi / ((1.0 - bessel_j0(p.omega0 / p.carrier)) * p.duration));
  } else {
    p.duration = pulse.number("duration", kTwoPi / p.omega0);
  }
  pulse.finish();
  return make_two_qubit_schedule(p);
}

inline std::string scheme_name(Scheme s) { return std::string(to_string(s)); }
inline std::string gate_name(Gate g) { return std::string(to_string(g)); }

inline void describe(RunContext& ctx, const std::string& prefix, const PulseSchedule& s) {
  ctx.kv(prefix + ".duration_us", s.duration());
  ctx.kv(prefix + ".omega0", s.omega0());
  if (s.is_floquet()) {
    ctx.kv(prefix + ".carrier", s.carrier_frequency());
    ctx.kv(prefix + ".rate", s.rate());
    ctx.kv(prefix + ".carrier_phase", s.carrier_phase());
    ctx.kv(prefix + ".calibrated_angle", s.calibrated_angle());
  }
  for (const auto& w : s.warnings()) ctx.kv(prefix + ".warning", w);
}

// Series ordering: F_fgqc ≥ every other series wherever |x| ≥ threshold.
inline std::vector<std::string> ordering_violations(const SweepResult& r, double threshold) {
  std::vector<std::string> out;
  const Series* fgqc = nullptr;
  for (const auto& s : r.series)
    if (s.label == fidelity_label(Scheme::FGQC)) fgqc = &s;
  if (fgqc == nullptr) return out;
  for (const auto& s : r.series) {
    if (&s == fgqc) continue;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      if (std::abs(r.grid[i]) >= threshold - 1e-12 && fgqc->values[i] < s.values[i])
        out.push_back(s.label + " at " + r.parameter + " = " + format_number(r.grid[i]));
  }
  return out;
}

inline void report_ordering(RunContext& ctx, const std::string& key, const SweepResult& r) {
  const auto bad = ordering_violations(r, 0.05);
  ctx.kv(key, bad.empty() ? "PASS" : "FAIL");
  for (const auto& b : bad) ctx.kv(key + ".violation", b);
}

inline CsvTable sweep_table(const SweepResult& r, bool with_errors = false) {
  CsvTable t;
  t.header.push_back(r.parameter);
  for (const auto& s : r.series) {
    t.header.push_back(s.label);
    if (with_errors) t.header.push_back("se" + s.label.substr(1));
  }
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    std::vector<CsvCell> row{r.grid[i]};
    for (const auto& s : r.series) {
      row.emplace_back(s.values[i]);
      if (with_errors) row.emplace_back(s.standard_errors[i]);
    }
    t.add(std::move(row));
  }
  return t;
}

inline void report_steps(RunContext& ctx, const std::string& prefix, const SweepResult& r) {
  for (const auto& s : r.series) {
    std::size_t lo = s.steps.empty() ? 0 : *std::min_element(s.steps.begin(), s.steps.end());
    std::size_t hi = s.steps.empty() ? 0 : *std::max_element(s.steps.begin(), s.steps.end());
    double change = 0.0;
    for (double c : s.refinement_change) change = std::max(change, c);
    ctx.kv(prefix + "." + s.label + ".n_steps", std::to_string(lo) + ".." + std::to_string(hi));
    ctx.kv(prefix + "." + s.label + ".max_dt_halving_change", change);
  }
}

// Even part of the infidelity relative to δ = 0, F(0) − [F(δ) + F(−δ)]/2,
// fitted as δ^p on 0.01 ≤ δ ≤ 0.1.
inline void report_scaling(RunContext& ctx, const std::string& prefix, const SweepResult& r) {
  auto find = [&](double x) {
    return std::find_if(r.grid.begin(), r.grid.end(), [x](double d) { return std::abs(d - x) < 1e-12; });
  };
  const auto zero = find(0.0);
  if (zero == r.grid.end()) return;
  const std::size_t i0 = static_cast<std::size_t>(zero - r.grid.begin());
  for (const auto& s : r.series) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      const double d = r.grid[i];
      const auto mirror = find(-d);
      if (d < 0.01 - 1e-12 || d > 0.1 + 1e-12 || mirror == r.grid.end()) continue;
      const std::size_t im = static_cast<std::size_t>(mirror - r.grid.begin());
      const double excess = s.values[i0] - 0.5 * (s.values[i] + s.values[im]);
      if (excess > 0.0) {
        xs.push_back(d);
        ys.push_back(excess);
      }
    }
    if (xs.size() >= 2) ctx.kv(prefix + "." + s.label + ".excess_infidelity_exponent", fit_power_exponent(xs, ys));
  }
}

inline std::size_t index_of(const std::vector<double>& grid, double x) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - x) < 1e-12) return i;
  return grid.size();
}

// ---------------------------------------------------------------------------

struct GateTraceRequest {
  PulseSchedule schedule;
  double delta;
  double gamma1_hz;
  double gamma2_hz;
  int theta_points;
  int trace_points;
  int initial;
};

/// Fidelities after the gate plus a population/fidelity trace, for one gate.
inline void gate_trace(RunContext& ctx, const GateTraceRequest& req, const std::string& csv_name) {
  const GateSimulator sim(req.schedule, req.delta, req.gamma1_hz, req.gamma2_hz);
  const std::string key = scheme_name(req.schedule.scheme()) + "." + gate_name(req.schedule.gate());
  const Converged state =
      converge([&](const TimeGrid& g) { return sim.state_fidelity_from(req.initial, g); }, sim.base_grid());
  const Converged gate =
      converge([&](const TimeGrid& g) { return sim.gate_fidelity(g, req.theta_points); }, sim.base_grid());

  const TimeGrid grid(req.schedule.duration(), state.steps);
  const std::size_t stride = std::max<std::size_t>(1, grid.steps() / static_cast<std::size_t>(req.trace_points));
  const Trajectory<2> traj = sim.trajectory_from(req.initial, grid, stride);
  traj.check_invariants();
  const Vector2 want = sim.target() * basis_state<2>(req.initial);
  CsvTable t{{"t_us", "P0", "P1", "F_target"}, {}};
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    t.add({traj.times[k], traj.states[k](0, 0).real(), traj.states[k](1, 1).real(),
           state_fidelity(traj.states[k], want)});
  ctx.csv(csv_name, t);

  describe(ctx, key, req.schedule);
  ctx.kv(key + ".initial_state", "|" + std::to_string(req.initial) + ">");
  ctx.kv(key + ".state_fidelity", state.value);
  ctx.kv(key + ".gate_fidelity", gate.value);
  ctx.kv(key + ".state_fidelity.n_steps", std::to_string(state.steps));
  ctx.kv(key + ".state_fidelity.dt_halving_change", state.change);
  ctx.kv(key + ".gate_fidelity.n_steps", std::to_string(gate.steps));
  ctx.kv(key + ".gate_fidelity.dt_halving_change", gate.change);
  ctx.kv(key + ".trace", csv_name);
}

inline ExperimentRunner plan_gate_trace(ConfigReader& p) {
  const Scheme scheme = parse_scheme(p.text("scheme", "FGQC"));
  const std::vector<Gate> gates = read_gates(p, {"Z", "X"});
  const double delta = p.number("delta", 0.05);
  const double g1 = p.number("gamma1_hz", 12.83);
  const double g2 = p.number("gamma2_hz", 128.3);
  const int theta = read_theta_points(p);
  const int points = static_cast<int>(p.integer("trace_points", 200, 1));
  const int initial = static_cast<int>(p.integer("initial_state", 1, 0));
  if (initial > 1) p.fail("initial_state", "must be 0 or 1");
  ConfigReader pulse = p.child("pulse");
  std::vector<GateTraceRequest> reqs;
  for (Gate g : gates) {
    ConfigReader copy = pulse;  // same overrides for every gate
    reqs.push_back({read_schedule(copy, scheme, g), delta, g1, g2, theta, points, initial});
  }
  return [reqs](RunContext& ctx) {
    for (const auto& r : reqs) gate_trace(ctx, r, "trace_" + gate_name(r.schedule.gate()) + ".csv");
  };
}

inline void delta_sweep(RunContext& ctx, const std::vector<Scheme>& schemes, Gate gate,
                        const std::vector<double>& deltas, SweepOptions opt) {
  opt.workers = ctx.workers();
  const SweepResult r = robustness_sweep(schemes, gate, deltas, opt);
  const std::string name = "delta_sweep_" + gate_name(gate) + ".csv";
  ctx.csv(name, sweep_table(r));
  const std::string key = "delta_sweep." + gate_name(gate);
  ctx.kv(key + ".csv", name);
  report_ordering(ctx, key + ".fgqc_ordering_abs_delta_ge_0.05", r);
  report_steps(ctx, key, r);
  report_scaling(ctx, key, r);
  const std::size_t i = index_of(r.grid, 0.1);
  if (i < r.grid.size()) {
    for (const auto& s : r.series) ctx.kv(key + "." + s.label + ".infidelity_at_0.1", 1.0 - s.values[i]);
  }
}

inline ExperimentRunner plan_delta_sweep(ConfigReader& p) {
  const std::vector<Gate> gates = read_gates(p, {"Z", "X"});
  const std::vector<Scheme> schemes = read_schemes(p, {"FGQC", "NGQC", "DG"});
  const std::vector<double> deltas = read_grid(p, "deltas", symmetric_grid(0.2, 0.025));
  const SweepOptions opt = read_sweep_options(p);
  return [=](RunContext& ctx) {
    for (Gate g : gates) delta_sweep(ctx, schemes, g, deltas, opt);
  };
}

inline ExperimentRunner plan_appendix_gates(ConfigReader& p) {
  const std::vector<Gate> gates = read_gates(p, {"H", "T"});
  const std::vector<Scheme> schemes = read_schemes(p, {"FGQC", "NGQC", "DG"});
  const double delta = p.number("delta", 0.1);
  const double g1 = p.number("gamma1_hz", 8.0);
  const double g2 = p.number("gamma2_hz", 80.0);
  const SweepOptions opt = read_sweep_options(p);
  const int theta = opt.theta_points;
  const int points = static_cast<int>(p.integer("trace_points", 200, 1));
  const std::vector<double> deltas = read_grid(p, "deltas", symmetric_grid(0.2, 0.025));
  return [=](RunContext& ctx) {
    for (Gate g : gates)
      gate_trace(ctx, {make_fgqc_schedule(g), delta, g1, g2, theta, points, 1}, "trace_" + gate_name(g) + ".csv");
    for (Gate g : gates) delta_sweep(ctx, schemes, g, deltas, opt);
  };
}

inline ExperimentRunner plan_two_qubit_sweep(ConfigReader& p) {
  const std::vector<Scheme> schemes = read_schemes(p, {"FGQC", "NGQC"});
  const std::vector<double> deltas = read_grid(p, "deltas", symmetric_grid(0.2, 0.05));
  const std::string frame_name = p.text("frame", "rotated");
  Frame frame;
  try {
    frame = parse_two_qubit_frame(frame_name);
  } catch (const PreconditionError& e) {
    p.fail("frame", e.what());
  }
  ConfigReader pulse = p.child("pulse");
  std::vector<TwoQubitSchedule> schedules;
  for (Scheme s : schemes) {
    if (s == Scheme::DG) p.fail("schemes", "the two-qubit gate has no DG variant");
    ConfigReader sub = pulse.child(scheme_name(s));
    schedules.push_back(read_two_qubit_schedule(sub, s));
  }
  pulse.finish();
  ConfigReader c = p.child("convergence");
  SweepOptions base;
  base.tolerance = c.number("tolerance", kConvergenceTolerance);
  if (!(base.tolerance > 0.0)) c.fail("tolerance", "must be positive");
  base.max_doublings = static_cast<int>(c.integer("max_doublings", 4, 0));
  c.finish();
  return [=](RunContext& ctx) {
    SweepOptions opt = base;
    opt.workers = ctx.workers();
    const SweepResult r = two_qubit_sweep(schedules, deltas, frame, opt);
    ctx.csv("two_qubit_sweep.csv", sweep_table(r));
    ctx.kv("two_qubit.frame", std::string(to_string(frame)));
    for (const auto& s : schedules) {
      const std::string key = "two_qubit." + scheme_name(s.scheme());
      ctx.kv(key + ".duration_us", s.duration());
      ctx.kv(key + ".coupling_times_duration", std::abs(s.effective_coupling()) * s.duration());
      for (const auto& w : s.warnings()) ctx.kv(key + ".warning", w);
    }
    report_ordering(ctx, "two_qubit.fgqc_ordering_abs_delta_ge_0.05", r);
    report_steps(ctx, "two_qubit", r);
    for (const auto& s : schedules) {
      if (s.scheme() != Scheme::FGQC) continue;
      const Matrix4 target = swap_like_target();
      const Converged c = converge(
          [&](const TimeGrid& g) { return two_qubit_fidelity(two_qubit_propagator(s, frame, 0.0, g), target); },
          two_qubit_base_grid(s));
      const Matrix4 u = two_qubit_propagator(s, frame, 0.0, TimeGrid(s.duration(), c.steps));
      ctx.kv("two_qubit.FGQC.delta0.fidelity", c.value);
      ctx.kv("two_qubit.FGQC.delta0.n_steps", std::to_string(c.steps));
      ctx.kv("two_qubit.FGQC.delta0.overlap_10_to_01", transition_overlap(u, 2, 1));
      ctx.kv("two_qubit.FGQC.delta0.overlap_01_to_10", transition_overlap(u, 1, 2));
      ctx.kv("two_qubit.FGQC.delta0.overlap_11_to_11", transition_overlap(u, 3, 3));
      ctx.kv("two_qubit.FGQC.delta0.leakage_from_11", 1.0 - std::norm(u(3, 3)));
    }
  };
}

inline ExperimentRunner plan_ou_sweep(ConfigReader& p) {
  const Gate gate = read_gate(p, "gate", "Z");
  const std::vector<Scheme> schemes = read_schemes(p, {"FGQC", "NGQC", "DG"});
  const std::vector<double> zooms = read_grid(p, "zooms", {0.0, 0.05, 0.1, 0.15, 0.2});
  if (zooms.front() < 0.0) p.fail("zooms", "must be non-negative");
  const double gamma_tau = p.number("gamma_tau", 1e-3);
  if (!(gamma_tau > 0.0)) p.fail("gamma_tau", "must be positive");
  const int n = static_cast<int>(p.integer("realizations", 100, 1));
  const std::uint64_t seed = p.seed("seed", 20240601);
  const int theta = read_theta_points(p);
  return [=](RunContext& ctx) {
    const double reference = make_fgqc_schedule(gate).duration();
    const double rate = ou_rate(gamma_tau, reference);
    SweepResult r;
    r.parameter = "M";
    r.grid = zooms;
    const std::string key = "ou_sweep." + gate_name(gate);
    for (Scheme s : schemes) {
      const PulseSchedule schedule = make_schedule(s, gate);
      // Grid chosen so a static error of three standard deviations at the
      // largest M already passes the convergence gate.
      const GateSimulator probe(schedule, 3.0 * zooms.back());
      const Converged c = converge([&](const TimeGrid& g) { return probe.gate_fidelity(g, theta); },
                                   probe.base_grid());
      const TimeGrid grid(schedule.duration(), c.steps);
      const GateSimulator sim(schedule);
      Series series{fidelity_label(s), {}, {}, {}, {}};
      for (double m : zooms) {
        const EnsembleFidelity e = ou_average_fidelity(sim, m, rate, n, seed, grid, theta, ctx.workers());
        series.values.push_back(e.mean);
        series.standard_errors.push_back(e.standard_error);
        series.steps.push_back(grid.steps());
        series.refinement_change.push_back(c.change);
        if (m == 0.0) {
          if (e.mean != e.deterministic)
            throw InvariantError("M = 0 ensemble mean differs from the deterministic fidelity");
          ctx.kv(key + "." + fidelity_label(s) + ".M0_equals_deterministic", "PASS");
        }
      }
      ctx.kv(key + "." + series.label + ".n_steps", std::to_string(grid.steps()));
      ctx.kv(key + "." + series.label + ".duration_us", schedule.duration());
      r.series.push_back(std::move(series));
    }
    r.validate();
    ctx.csv("ou_sweep_" + gate_name(gate) + ".csv", sweep_table(r, true));
    ctx.kv(key + ".gamma_tau", gamma_tau);
    ctx.kv(key + ".gamma_per_us", rate);
    ctx.kv(key + ".reference_duration_us", reference);
    ctx.kv(key + ".realizations", std::to_string(n));
    ctx.kv(key + ".seed", std::to_string(seed));
    ctx.kv(key + ".seed_derivation", "realization i uses splitmix64(seed + i*0x9E3779B97F4A7C15)");

    // FGQC ≥ baseline within two combined standard errors. M = 0 is the
    // noiseless point, where the baselines are exact by construction.
    const Series& f = r.find(fidelity_label(Scheme::FGQC));
    std::vector<std::string> bad;
    for (const auto& s : r.series) {
      if (&s == &f) continue;
      for (std::size_t i = 0; i < zooms.size(); ++i) {
        if (zooms[i] == 0.0) continue;
        const double se = std::hypot(f.standard_errors[i], s.standard_errors[i]);
        if (f.values[i] < s.values[i] - 2.0 * se) bad.push_back(s.label + " at M = " + format_number(zooms[i]));
      }
    }
    ctx.kv(key + ".fgqc_ordering_within_2se", bad.empty() ? "PASS" : "FAIL");
    for (const auto& b : bad) ctx.kv(key + ".fgqc_ordering_within_2se.violation", b);
  };
}

inline ExperimentRunner plan_q_integral(ConfigReader& p) {
  const std::vector<Scheme> schemes = read_schemes(p, {"FGQC", "NGQC", "DG"});
  const std::vector<Gate> gates = read_gates(p, {"Z", "X", "H", "T"});
  const int refine = static_cast<int>(p.integer("refine", 4, 1));
  return [=](RunContext& ctx) {
    CsvTable t{{"scheme", "gate", "q_norm", "q_max_abs_entry", "n_steps", "dt_halving_change"}, {}};
    double fgqc_max = 0.0;
    bool have_fgqc = false;
    for (Scheme s : schemes)
      for (Gate g : gates) {
        const PulseSchedule schedule = make_schedule(s, g);
        const TimeGrid grid = TimeGrid::resolving(schedule.duration(), schedule.max_frequency(), refine);
        const ErrorIntegral q = first_order_error_integral(schedule, grid);
        const ErrorIntegral q2 = first_order_error_integral(schedule, grid.refined());
        t.add({scheme_name(s), gate_name(g), q.norm, q.q.cwiseAbs().maxCoeff(),
               static_cast<long long>(grid.steps()), std::abs(q2.norm - q.norm)});
        if (s == Scheme::FGQC) {
          have_fgqc = true;
          fgqc_max = std::max(fgqc_max, q.norm);
        }
        if (s == Scheme::DG && g == Gate::Z) {
          ctx.kv("q_integral.DG.Z.q00", format_number(q.q(0, 0).real()) + " " + format_number(q.q(0, 0).imag()) + "i");
          ctx.kv("q_integral.DG.Z.q11", format_number(q.q(1, 1).real()) + " " + format_number(q.q(1, 1).imag()) + "i");
        }
      }
    ctx.csv("q_integral.csv", t);
    if (have_fgqc) {
      ctx.kv("q_integral.FGQC.max_norm", fgqc_max);
      ctx.kv("q_integral.FGQC.below_1e-8", fgqc_max <= 1e-8 ? "PASS" : "FAIL");
    }
  };
}

}  // namespace experiments

inline const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> registry = {
      {"gate-trace", "single-qubit gate under static error and decoherence: populations, state and gate fidelity",
       experiments::plan_gate_trace},
      {"delta-sweep", "noiseless gate fidelity vs static control error for FGQC, NGQC and DG (Z, X)",
       experiments::plan_delta_sweep},
      {"two-qubit-sweep", "SWAP-like Rydberg gate fidelity vs static control error, blockade leakage kept",
       experiments::plan_two_qubit_sweep},
      {"ou-sweep", "gate fidelity averaged over Ornstein-Uhlenbeck error paths vs zoom factor M",
       experiments::plan_ou_sweep},
      {"appendix-gates", "Hadamard and T gates: noisy traces and control-error sweeps",
       experiments::plan_appendix_gates},
      {"q-integral", "first-order error integral ||Q(tau)|| for every scheme and gate", experiments::plan_q_integral},
  };
  return registry;
}

inline const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry())
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : experiment_registry()) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw ConfigError("config: unknown experiment '" + name + "' (known: " + known + ")");
}

struct RunResult {
  std::filesystem::path dir;
  std::vector<std::string> summary;
  std::vector<std::string> files;
};

/// Validates the whole config, writes resolved_config.json, runs the
/// experiment, then writes summary.txt.
inline RunResult run_experiment(const Json& config, unsigned workers, const std::string& output_override = "") {
  Json resolved;
  ConfigReader top(&config, &resolved, "");
  const long long version = top.integer("schema_version", -1, -1);
  if (!config.contains("schema_version")) top.fail("schema_version", "is required");
  if (version != kSchemaVersion)
    top.fail("schema_version", "must be " + std::to_string(kSchemaVersion) + ", got " + std::to_string(version));
  if (!config.contains("experiment")) top.fail("experiment", "is required");
  const std::string name = top.text("experiment", "");
  const ExperimentInfo& info = find_experiment(name);
  std::string out = top.text("output_dir", "out/" + name);
  if (!output_override.empty()) out = output_override, resolved["output_dir"] = out;
  ConfigReader params = top.child("params");
  const ExperimentRunner runner = info.plan(params);
  params.finish();
  top.finish();

  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "resolved_config.json", std::ios::binary | std::ios::trunc);
    f << resolved.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + (dir / "resolved_config.json").string());
  }
  RunContext ctx(dir, workers);
  ctx.kv("experiment", name);
  ctx.kv("schema_version", std::to_string(kSchemaVersion));
  ctx.kv("prng", std::string(kPrngAlgorithm));
  ctx.kv("integrator", "unitary: midpoint exponential; density matrix: RK4; dt*f_max <= 0.05, dt halved until fidelity moves <= 1e-6");
  runner(ctx);
  {
    std::ofstream f(dir / "summary.txt", std::ios::binary | std::ios::trunc);
    for (const auto& l : ctx.summary()) f << l << '\n';
    if (!f) throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
  }
  return {dir, ctx.summary(), ctx.files()};
}

inline Json load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
}

}  // namespace fgqc
