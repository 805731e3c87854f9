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

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fgqc/checks.hpp"
#include "fgqc/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kConvergenceFailure = 3, kInvariantBreach = 4 };

int run(const std::string& path, const std::string& output) {
  const fgqc::Json config = fgqc::load_config(path);
  const fgqc::RunResult r = fgqc::run_experiment(config, fgqc::worker_count(), output);
  for (const auto& line : r.summary) std::cout << line << '\n';
  std::cout << "wrote " << r.dir.string() << '\n';
  return kOk;
}

int list() {
  for (const auto& e : fgqc::experiment_registry()) std::cout << e.name << "\t" << e.description << '\n';
  return kOk;
}

int check() {
  bool ok = true;
  for (const auto& c : fgqc::run_checks()) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kInvariantBreach;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet geometric gate simulator"};
  app.require_subcommand(1);
  std::string config_path, output;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("-o,--output", output, "output directory (overrides output_dir)");
  CLI::App* list_cmd = app.add_subcommand("list-experiments", "list experiment names");
  CLI::App* check_cmd = app.add_subcommand("check", "run the numerical invariant suite");
  app.footer("Environment: FGQC_WORKERS sets the number of worker threads.\n"
             "Exit codes: 0 ok, 2 config error, 3 convergence failure, 4 invariant breach.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return run(config_path, output);
    if (*list_cmd) return list();
    if (*check_cmd) return check();
  } catch (const fgqc::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergenceFailure;
  } catch (const fgqc::InvariantError& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kInvariantBreach;
  } catch (const fgqc::IntegrationError& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kInvariantBreach;
  } catch (const fgqc::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
