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
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "fgqc/errors.hpp"
#include "fgqc/grid.hpp"
#include "fgqc/linalg.hpp"

namespace fgqc {

// ---------------------------------------------------------------------------
// Lindblad channels.

enum class ChannelKind { Decay, Dephase };

inline std::string_view to_string(ChannelKind k) { return k == ChannelKind::Decay ? "decay" : "dephase"; }

template <int D>
struct Channel {
  ChannelKind kind = ChannelKind::Decay;
  int atom = 0;  // which qubit the operator acts on
  CMatrix<D> op = CMatrix<D>::Zero();
  double rate = 0.0;  // 1/μs
};

inline constexpr double kPerSecondToPerMicrosecond = 1e-6;

/// σ₋ at rate γ₁ and σz at rate γ₂, rates given in 1/s.
///
/// For D = 4 every operator is placed on each atom in turn.
template <int D>
std::vector<Channel<D>> decoherence_channels(double gamma1_hz, double gamma2_hz) {
  static_assert(D == 2 || D == 4);
  if (!(gamma1_hz >= 0.0) || !(gamma2_hz >= 0.0))
    throw PreconditionError("decoherence_channels: rates must be non-negative");
  const double g1 = gamma1_hz * kPerSecondToPerMicrosecond;
  const double g2 = gamma2_hz * kPerSecondToPerMicrosecond;
  std::vector<Channel<D>> out;
  const auto add = [&](ChannelKind kind, const Matrix2& op, double rate) {
    if constexpr (D == 2) {
      out.push_back({kind, 0, op, rate});
    } else {
      out.push_back({kind, 0, kron<2, 2>(op, pauli::identity()), rate});
      out.push_back({kind, 1, kron<2, 2>(pauli::identity(), op), rate});
    }
  };
  add(ChannelKind::Decay, pauli::lowering(), g1);
  add(ChannelKind::Dephase, pauli::z(), g2);
  return out;
}

// ---------------------------------------------------------------------------
// Random numbers.

inline constexpr std::string_view kPrngAlgorithm =
    "mt19937_64; seeds splitmix64(seed + i*0x9E3779B97F4A7C15); normals by Box-Muller on 53-bit uniforms";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of realization i in an ensemble started from `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + index * 0x9E3779B97F4A7C15ULL);
}

/// Standard normals with a fully specified transform, so streams agree
/// across standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stationary unit-variance Ornstein–Uhlenbeck path on the grid nodes
/// (steps + 1 values), autocorrelation e^{−Γ|Δt|}.
inline std::vector<double> sample_ou_path(double rate, const TimeGrid& grid, std::uint64_t seed) {
  if (!(rate > 0.0)) throw PreconditionError("sample_ou_path: correlation rate must be positive");
  NormalSource normal(seed);
  const double a = std::exp(-rate * grid.dt());
  const double b = std::sqrt(-std::expm1(-2.0 * rate * grid.dt()));
  std::vector<double> path(grid.steps() + 1);
  path[0] = normal();
  for (std::size_t k = 1; k < path.size(); ++k) path[k] = a * path[k - 1] + b * normal();
  return path;
}

// ---------------------------------------------------------------------------
// Control error H' = (1 + δ + M·x_k)·H on step k.

struct ControlError {
  double delta = 0.0;
  double zoom = 0.0;            // M
  std::span<const double> path;  // O-U values on grid nodes, may be empty

  double factor(std::size_t step) const {
    double f = 1.0 + delta;
    if (!path.empty() && zoom != 0.0) f += zoom * path[step];
    return f;
  }
};

template <int D>
CMatrix<D> apply_error(const CMatrix<D>& h, const ControlError& error, std::size_t step) {
  return error.factor(step) * h;
}

// ---------------------------------------------------------------------------

struct OuSpec {
  double rate = 0.0;  // Γ, 1/μs
  double zoom = 0.0;  // M
  int realizations = 100;
  std::uint64_t seed = 0;
};

struct NoiseSpec {
  double delta = 0.0;
  std::optional<OuSpec> ou;
  double gamma1_hz = 0.0;
  double gamma2_hz = 0.0;

  void validate() const {
    if (!std::isfinite(delta)) throw PreconditionError("noise: delta must be finite");
    if (!(gamma1_hz >= 0.0) || !(gamma2_hz >= 0.0)) throw PreconditionError("noise: rates must be non-negative");
    if (ou) {
      if (!(ou->rate > 0.0)) throw PreconditionError("noise: O-U rate must be positive");
      if (!(ou->zoom >= 0.0)) throw PreconditionError("noise: zoom factor M must be non-negative");
      if (ou->realizations < 1) throw PreconditionError("noise: realizations must be >= 1");
    }
  }

  bool has_decoherence() const { return gamma1_hz > 0.0 || gamma2_hz > 0.0; }
};

}  // namespace fgqc
