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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgqc {

// Caller supplied something outside an operation's contract.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Time grid too coarse for the fastest frequency in the model.
class ResolutionError : public PreconditionError {
 public:
  ResolutionError(const std::string& what, std::size_t required_steps)
      : PreconditionError(what), required_steps_(required_steps) {}
  std::size_t required_steps() const { return required_steps_; }

 private:
  std::size_t required_steps_;
};

// The density-matrix integrator lost trace (or otherwise broke an invariant).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Halving dt moved a reported figure of merit by more than the gate allows.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed quantity violates a documented invariant (fidelity > 1, ...).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fgqc
