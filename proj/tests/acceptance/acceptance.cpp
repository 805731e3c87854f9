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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fgqc/checks.hpp"
#include "fgqc/experiments.hpp"

using namespace fgqc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "FAILED " << what << "; ";
    }
  }
  template <class T>
  void note(const std::string& key, const T& v) {
    detail << key << "=" << v << " ";
  }
};

std::string fmt(double v) { return format_number(v); }

bool within(double v, double want, double tol) { return std::abs(v - want) <= tol; }

int failures = 0;

void report(int n, const std::string& title, Verdict& v) {
  std::cout << (v.ok ? "[PASS] " : "[FAIL] ") << "AC" << n << " " << title << " :: " << v.detail.str() << std::endl;
  if (!v.ok) ++failures;
}

Converged state_fid(const GateSimulator& sim) {
  return converge([&](const TimeGrid& g) { return sim.state_fidelity_from(1, g); }, sim.base_grid());
}

Converged gate_fid(const GateSimulator& sim) {
  return converge([&](const TimeGrid& g) { return sim.gate_fidelity(g); }, sim.base_grid());
}

void ac1() {
  Verdict v;
  const GateSimulator sim(make_fgqc_schedule(Gate::Z), 0.05, 12.83, 128.3);
  const double s = state_fid(sim).value, g = gate_fid(sim).value;
  v.note("state", fmt(s));
  v.note("gate", fmt(g));
  v.require(within(s, 0.9998, 0.0005), "state fidelity in 0.9998 +- 0.0005");
  v.require(within(g, 0.9992, 0.0015), "gate fidelity in 0.9992 +- 0.0015");
  report(1, "FGQC Z with reference noise", v);
}

void ac2() {
  Verdict v;
  const GateSimulator sim(make_fgqc_schedule(Gate::X), 0.05, 12.83, 128.3);
  const double s = state_fid(sim).value, g = gate_fid(sim).value;
  v.note("state", fmt(s));
  v.note("gate", fmt(g));
  v.require(within(s, 0.9997, 0.0005), "state fidelity in 0.9997 +- 0.0005");
  v.require(within(g, 0.9992, 0.0015), "gate fidelity in 0.9992 +- 0.0015");
  report(2, "FGQC X with reference noise", v);
}

void ac3() {
  Verdict v;
  const GateSimulator h(make_fgqc_schedule(Gate::H), 0.1, 8.0, 80.0);
  const GateSimulator t(make_fgqc_schedule(Gate::T), 0.1, 8.0, 80.0);
  const double hs = state_fid(h).value, ts = state_fid(t).value, tg = gate_fid(t).value;
  v.note("H_state", fmt(hs));
  v.note("T_state", fmt(ts));
  v.note("T_gate", fmt(tg));
  v.require(within(hs, 0.999338, 0.001), "H state fidelity in 0.999338 +- 0.001");
  v.require(within(ts, 0.999263, 0.001), "T state fidelity in 0.999263 +- 0.001");
  v.require(within(tg, 0.99984, 0.001), "T gate fidelity in 0.99984 +- 0.001");
  report(3, "FGQC Hadamard and T with reference noise", v);
}

void ac4() {
  Verdict v;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(g);
    const GateSimulator sim(s);
    const Matrix2 exact = propagate_unitary(sim.model(), sim.base_grid().refined());
    const EffectiveModel<2> eff = effective_model(s);
    const Matrix2 avg = propagate_effective(eff, TimeGrid::resolving(s.duration(), eff.max_frequency()));
    const double f = unitary_fidelity(exact, avg);
    v.note(std::string(to_string(g)), fmt(f));
    v.require(f >= 0.999, std::string(to_string(g)) + " exact vs averaged >= 0.999");
  }
  report(4, "Floquet approximation for Z, X, H, T", v);
}

void ac5() {
  Verdict v;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const double angle = make_fgqc_schedule(g).calibrated_angle();
    const double want = target_angle(g);
    const double rel = std::abs(angle / want - 1.0);
    v.note(std::string(to_string(g)) + "_angle", fmt(angle));
    v.require(rel <= (g == Gate::T ? 0.02 : 0.005), std::string(to_string(g)) + " angle closes");
  }
  // Rounded two-qubit values N = 0.58 rad/us, tau = 7.7 us, omega = 0.52*2pi.
  const double rounded = 0.5 * 0.58 * (1.0 - bessel_j0(2.0 * kTwoPi / (0.52 * kTwoPi))) * 7.7;
  const TwoQubitSchedule q = make_two_qubit_schedule();
  const double built = std::abs(q.effective_coupling()) * q.duration();
  v.note("Ctau_rounded", fmt(rounded));
  v.note("Ctau_default", fmt(built));
  v.require(std::abs(rounded / kPi - 1.0) <= 0.01, "rounded |C|tau within 1% of pi");
  v.require(std::abs(built / kPi - 1.0) <= 0.01, "default |C|tau within 1% of pi");
  report(5, "calibration identities", v);
}

void check_order(Verdict& v, const SweepResult& r, const std::string& tag) {
  const Series& f = r.find("F_fgqc");
  int checked = 0;
  for (const auto& s : r.series) {
    if (&s == &f) continue;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      if (std::abs(r.grid[i]) < 0.05 - 1e-12) continue;
      ++checked;
      v.require(f.values[i] >= s.values[i], tag + " F_fgqc >= " + s.label + " at delta " + fmt(r.grid[i]));
    }
  }
  v.note(tag + "_points", checked);
}

void ac6() {
  Verdict v;
  const std::vector<Scheme> schemes{Scheme::FGQC, Scheme::NGQC, Scheme::DG};
  const std::vector<double> deltas = experiments::symmetric_grid(0.2, 0.025);
  SweepOptions opt;
  opt.workers = worker_count();
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T})
    check_order(v, robustness_sweep(schemes, g, deltas, opt), std::string(to_string(g)));
  const std::vector<TwoQubitSchedule> pair{make_two_qubit_schedule(Scheme::FGQC),
                                           make_two_qubit_schedule(Scheme::NGQC)};
  const std::vector<double> dq = experiments::symmetric_grid(0.2, 0.05);
  check_order(v, two_qubit_sweep(pair, dq, Frame::RotatedTwoQubit, opt), "two_qubit");
  report(6, "robustness ordering for |delta| >= 0.05", v);
}

void ac7() {
  Verdict v;
  double worst = 0.0;
  for (Gate g : {Gate::Z, Gate::X, Gate::H, Gate::T}) {
    const PulseSchedule s = make_fgqc_schedule(g);
    worst = std::max(worst, first_order_error_integral(s, TimeGrid::resolving(s.duration(), s.max_frequency())).norm);
  }
  v.note("fgqc_max_norm", fmt(worst));
  v.require(worst <= 1e-8, "FGQC ||Q|| <= 1e-8");
  const PulseSchedule dg = make_baseline_schedule(Scheme::DG, Gate::Z);
  const ErrorIntegral q = first_order_error_integral(dg, TimeGrid::resolving(dg.duration(), dg.max_frequency()));
  v.note("dg_q00", fmt(q.q(0, 0).real()));
  v.note("dg_q11", fmt(q.q(1, 1).real()));
  v.require(std::abs(q.q(0, 0) - kPi / 2) <= 1e-9 && std::abs(q.q(1, 1) + kPi / 2) <= 1e-9,
            "DG Z diagonal entries +-pi/2");
  report(7, "first-order cancellation", v);
}

void ac8() {
  Verdict v;
  const TwoQubitSchedule s = make_two_qubit_schedule();
  const Matrix4 target = swap_like_target();
  const Converged c = converge(
      [&](const TimeGrid& g) {
        return two_qubit_fidelity(two_qubit_propagator(s, Frame::RotatedTwoQubit, 0.0, g), target);
      },
      two_qubit_base_grid(s));
  const Matrix4 u = two_qubit_propagator(s, Frame::RotatedTwoQubit, 0.0, TimeGrid(s.duration(), c.steps));
  const double o1 = transition_overlap(u, 2, 1), o2 = transition_overlap(u, 1, 2), o3 = transition_overlap(u, 3, 3);
  v.note("F", fmt(c.value));
  v.note("steps", c.steps);
  v.note("10->01", fmt(o1));
  v.note("01->10", fmt(o2));
  v.note("11->11", fmt(o3));
  v.require(c.value < 1.0 && c.value >= 0.98, "fidelity in [0.98, 1)");
  v.require(o1 >= 0.99 && o2 >= 0.99 && o3 >= 0.99, "overlaps >= 0.99");
  report(8, "two-qubit gate with leakage retained", v);
}

void ac9() {
  Verdict v;
  const Gate gate = Gate::Z;
  const std::vector<double> zooms{0.0, 0.05, 0.1, 0.15, 0.2};
  const double rate = ou_rate(1e-3, make_fgqc_schedule(gate).duration());
  const unsigned workers = worker_count();
  std::vector<std::vector<EnsembleFidelity>> table;
  for (Scheme s : {Scheme::FGQC, Scheme::NGQC, Scheme::DG}) {
    const PulseSchedule schedule = make_schedule(s, gate);
    const GateSimulator probe(schedule, 3.0 * zooms.back());
    const Converged c = converge([&](const TimeGrid& g) { return probe.gate_fidelity(g); }, probe.base_grid());
    const GateSimulator sim(schedule);
    const TimeGrid grid(schedule.duration(), c.steps);
    std::vector<EnsembleFidelity> row;
    for (double m : zooms) row.push_back(ou_average_fidelity(sim, m, rate, 100, 20240601, grid, 101, workers));
    v.require(row[0].mean == row[0].deterministic, std::string(to_string(s)) + " M=0 equals deterministic");
    table.push_back(std::move(row));
  }
  for (std::size_t b = 1; b < table.size(); ++b)
    for (std::size_t i = 0; i < zooms.size(); ++i) {
      if (zooms[i] == 0.0) continue;
      const double se = std::hypot(table[0][i].standard_error, table[b][i].standard_error);
      v.require(table[0][i].mean >= table[b][i].mean - 2.0 * se,
                "ordering vs " + std::string(b == 1 ? "NGQC" : "DG") + " at M " + fmt(zooms[i]));
    }
  for (std::size_t i = 0; i < zooms.size(); ++i)
    v.note("M" + fmt(zooms[i]), fmt(table[0][i].mean) + "/" + fmt(table[1][i].mean) + "/" + fmt(table[2][i].mean));
  report(9, "O-U ensemble ordering (M > 0) and exact M = 0", v);
}

using Big = boost::multiprecision::cpp_bin_float_50;

double j0_series_oracle(double xd) {
  const Big x(xd), q = x * x / 4;
  Big term = 1, sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (Big(k) * k);
    sum += term;
    if (k > 10 && abs(term) < Big("1e-40")) break;
  }
  return static_cast<double>(sum);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac10() {
  Verdict v;
  for (const auto& c : run_checks()) {
    v.require(c.passed, c.name + " (" + c.detail + ")");
    if (c.passed) v.note(c.name.substr(0, c.name.find(' ')), c.detail.substr(c.detail.rfind(' ') + 1));
  }
  double worst = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double x = 50.0 * k / 10000;
    worst = std::max(worst, std::abs(bessel_j0(x) - j0_series_oracle(x)));
  }
  v.note("j0_vs_series", fmt(worst));
  v.require(worst <= 1e-12, "J0 vs series oracle <= 1e-12");

  const auto tmp = std::filesystem::temp_directory_path();
  const Json cfg{{"schema_version", 1},
                 {"experiment", "ou-sweep"},
                 {"params", {{"zooms", {0.0, 0.1}}, {"realizations", 10}, {"theta_points", 21}}}};
  std::vector<std::string> files;
  for (const char* name : {"fgqc_acc_a", "fgqc_acc_b"}) {
    std::filesystem::remove_all(tmp / name);
    run_experiment(cfg, worker_count(), (tmp / name).string());
    files.push_back(slurp(tmp / name / "ou_sweep_Z.csv") + slurp(tmp / name / "summary.txt"));
  }
  v.require(!files[0].empty() && files[0] == files[1], "seeded reruns byte-identical");
  v.note("rerun_bytes", files[0].size());
  report(10, "numerical hygiene", v);
}

}  // namespace

int main() {
  try {
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
    ac8();
    ac9();
    ac10();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
