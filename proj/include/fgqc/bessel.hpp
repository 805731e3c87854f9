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
#include <numbers>

namespace fgqc {

namespace detail {

// Σ (−1)^k (x²/4)^k / (k!)²; cancellation stays below ~1e-14 for |x| < 8.
inline double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && std::abs(term) < 1e-17) break;
  }
  return sum;
}

// Miller's backward recurrence, normalized with J0 + 2 Σ J_2k = 1.
inline double j0_backward(double x) {
  int start = static_cast<int>(x + 30.0 + 2.0 * std::sqrt(x));
  start += start % 2;
  double next = 0.0;  // J_{n+1}
  double cur = 1e-300;  // J_n, arbitrary scale
  double norm = 0.0;
  double j0 = 0.0;
  for (int n = start; n > 0; --n) {
    const double prev = (2.0 * n / x) * cur - next;  // J_{n-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {  // rescale to stay in range
      next *= 1e-250;
      cur *= 1e-250;
      norm *= 1e-250;
    }
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * cur;
  }
  j0 = cur;
  norm += j0;
  return j0 / norm;
}

// Hankel asymptotic expansion; truncation error ~e^{−2x}, negligible for x ≥ 25.
inline double j0_asymptotic(double x) {
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k(0) / x^k
  const double inv8x = 1.0 / (8.0 * x);
  double last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (std::abs(a) > last) break;  // series started to diverge
    last = std::abs(a);
    switch (k % 4) {
      case 0: p += a; break;
      case 1: q -= a; break;
      case 2: p -= a; break;
      case 3: q += a; break;
    }
    if (std::abs(a) < 1e-18) break;
    const double odd = 2.0 * k + 1.0;
    a *= odd * odd * inv8x / (k + 1.0);
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Zero-order Bessel function of the first kind, absolute accuracy ~1e-14.
inline double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 8.0) return detail::j0_series(x);
  if (x < 25.0) return detail::j0_backward(x);
  return detail::j0_asymptotic(x);
}

}  // namespace fgqc
