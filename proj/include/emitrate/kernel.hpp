// Copyright 2026 The emitrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>

namespace emitrate {

/// Branch point between the Taylor and the closed-form evaluation of f_kernel.
inline constexpr double f_kernel_crossover = 0.1;

/// Taylor branch of f_kernel: even polynomial through x^8.
///
/// From f(x) = 1/4 int_{-1}^{1} (1 + xi^2) cos(x xi) dxi the coefficient of
/// x^{2k} is (-1)^k / (2 (2k)!) * (1/(2k+1) + 1/(2k+3)).
inline double f_kernel_taylor(double x) noexcept {
  const double x2 = x * x;
  return 2.0 / 3.0 +
         x2 * (-2.0 / 15.0 + x2 * (1.0 / 140.0 + x2 * (-1.0 / 5670.0 + x2 * (1.0 / 399168.0))));
}

/// Closed form sin x / x + cos x / x^2 - sin x / x^3, grouped so the two
/// small-x terms cancel inside one numerator.
inline double f_kernel_direct(double x) noexcept {
  const double s = std::sin(x), c = std::cos(x);
  return s / x + (x * c - s) / (x * x * x);
}

/// Angular interference kernel f(x) = sin x/x + cos x/x^2 - sin x/x^3.
///
/// Even in x, maximal at f(0) = 2/3, decays like 1/|x|.
inline double f_kernel(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < f_kernel_crossover) return f_kernel_taylor(ax);
  return f_kernel_direct(ax);
}

/// Function object wrapper so routes can be parameterised on the kernel
/// (validation injects perturbed kernels through this slot).
struct FKernel {
  double operator()(double x) const noexcept { return f_kernel(x); }
};

}  // namespace emitrate
