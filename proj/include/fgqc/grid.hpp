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
#include <cstddef>
#include <string>

#include "fgqc/errors.hpp"

namespace fgqc {

/// Uniform grid t_k = k·dt on [0, duration].
class TimeGrid {
 public:
  // Largest allowed phase advance of the fastest frequency per step, rad.
  static constexpr double kMaxPhasePerStep = 0.05;
  static constexpr std::size_t kMinSteps = 100;

  TimeGrid(double duration, std::size_t steps) : duration_(duration), steps_(steps) {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw PreconditionError("TimeGrid: duration must be positive");
    if (steps < kMinSteps)
      throw ResolutionError("TimeGrid: at least " + std::to_string(kMinSteps) + " steps required", kMinSteps);
  }

  static std::size_t required_steps(double duration, double max_frequency) {
    const double n = std::ceil(duration * max_frequency / kMaxPhasePerStep - 1e-9);
    return std::max(kMinSteps, static_cast<std::size_t>(std::max(n, 0.0)));
  }

  // Coarsest admissible grid, optionally refined by an integer factor.
  static TimeGrid resolving(double duration, double max_frequency, std::size_t refine = 1) {
    return TimeGrid(duration, required_steps(duration, max_frequency) * refine);
  }

  double duration() const { return duration_; }
  std::size_t steps() const { return steps_; }
  double dt() const { return duration_ / static_cast<double>(steps_); }
  double time(std::size_t k) const {
    return k == steps_ ? duration_ : static_cast<double>(k) * dt();
  }
  TimeGrid refined(std::size_t factor = 2) const { return TimeGrid(duration_, steps_ * factor); }

  // Throws ResolutionError carrying the step count that would be accepted.
  void validate(double max_frequency) const {
    const std::size_t need = required_steps(duration_, max_frequency);
    if (steps_ < need)
      throw ResolutionError("TimeGrid: " + std::to_string(steps_) + " steps cannot resolve frequency " +
                                std::to_string(max_frequency) + " rad/us over " + std::to_string(duration_) +
                                " us; need n_steps >= " + std::to_string(need),
                            need);
  }

 private:
  double duration_;
  std::size_t steps_;
};

}  // namespace fgqc
