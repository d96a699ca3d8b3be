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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "emitrate/errors.hpp"
#include "emitrate/geometry.hpp"
#include "emitrate/kernel.hpp"
#include "emitrate/quadrature.hpp"
#include "emitrate/rate.hpp"

namespace emitrate {

/// Emitter at the midpoint of two identical planar mirrors with real
/// reflection rate r_mir, separated by d; k0d = omega0 d / c.
class CavitySpec {
 public:
  CavitySpec(double r_mir, double k0d) : r_(r_mir), k0d_(k0d) {
    if (!(std::abs(r_mir) < 1.0)) throw DegenerateMirror("cavity: |r_mir| must be < 1");
    if (!(k0d > 0.0) || !std::isfinite(k0d)) throw InvalidParams("cavity: k0d must be finite and > 0");
  }

  double r_mir() const noexcept { return r_; }
  double k0d() const noexcept { return k0d_; }
  double t_mir_squared() const noexcept { return 1.0 - r_ * r_; }

 private:
  double r_;
  double k0d_;
};

/// Truncation of the bounce series. n_max unset selects the smallest order
/// whose tail bound is below tail_tol.
struct SeriesControl {
  std::optional<std::int64_t> n_max;
  double tail_tol = 1e-12;
};

inline constexpr std::int64_t series_min_order = 8;
inline constexpr std::int64_t series_max_order = 100000;

/// Second-order subwavelength formula is flagged above this k0d.
inline constexpr double subwavelength_soft_limit = 0.3;

/// t^2 |(1 + r e^{-ix}) / (1 - r^2 e^{-2ix})|^2, the multiple-reflection
/// interference factor for phase x = k0 d cos(theta).
///
/// The numerator cancels one factor of the denominator, leaving the Poisson
/// kernel (1 - r^2) / |1 - r e^{-ix}|^2, written with sin^2(x/2) so it stays
/// accurate as r -> 1 and x -> 0.
inline double interference_kernel(double r_mir, double x) {
  if (!(std::abs(r_mir) < 1.0)) throw DegenerateMirror("interference_kernel: |r_mir| must be < 1");
  const double s = std::sin(0.5 * x);
  const double om = 1.0 - r_mir;
  return (1.0 - r_mir) * (1.0 + r_mir) / (om * om + 4.0 * r_mir * s * s);
}

struct CavityQuadratureOptions {
  double tol = 1e-10;
  /// Override of the automatic xi-node budget (0 = automatic).
  std::size_t max_nodes = 0;
};

/// (3 / 8 pi) int dOmega sum_lambda |dhat . e_{s lambda}|^2 K(r, k0 d cos theta).
///
/// Breakpoints are placed at every kernel extremum xi = j pi / k0d and at the
/// half-width points of each peak; the adaptive rule refines from there. The
/// node budget grows with the number of peaks and with 1 / (1 - |r|).
inline RateResult gamma_cavity_quadrature(const CavitySpec& spec, const CavityQuadratureOptions& copt = {}) {
  const double r = spec.r_mir(), k = spec.k0d();
  if (!(copt.tol > 0.0)) throw InvalidParams("cavity: tol must be > 0");

  SphereQuadratureOptions opt;
  opt.tol = copt.tol;
  opt.abs_tol = 1e-15;
  opt.phase_rate = k;
  const double width = std::max(1.0 - std::abs(r), 1e-300);
  const auto peaks = static_cast<std::int64_t>(std::floor(k / std::numbers::pi));
  for (std::int64_t j = -peaks; j <= peaks; ++j) {
    const double centre = static_cast<double>(j) * std::numbers::pi / k;
    opt.breakpoints.push_back(centre);
    opt.breakpoints.push_back(centre - width / k);
    opt.breakpoints.push_back(centre + width / k);
  }
  if (copt.max_nodes > 0) {
    opt.max_nodes = copt.max_nodes;
  } else {
    const double sharp = std::ceil(std::log2(2.0 / width)) + 1.0;
    const double budget = 2.0e5 + 4.0e3 * static_cast<double>(2 * peaks + 1) * sharp;
    opt.max_nodes = static_cast<std::size_t>(std::min(budget, 6.0e7));
  }

  const DipoleOrientation dhat;
  const auto integral = solid_angle_integrate(
      [&](double theta, double phi) {
        const double w = dipole_weight(dhat, Direction(theta, phi)).total();
        return w * interference_kernel(r, k * std::cos(theta));
      },
      opt);
  const double c = 3.0 / (8.0 * std::numbers::pi);
  return {c * integral.value.real(), Method::quadrature, c * integral.err_estimate};
}

/// Upper bound on the dropped terms of the bounce series truncated at order N
/// (all n > N and all m < -N), using |f| <= 2/3.
inline double series_tail_bound(double r_mir, std::int64_t n_max) {
  const double q = r_mir * r_mir;
  if (q == 0.0) return 0.0;
  const double a = (1.0 + std::abs(r_mir)) * (1.0 + std::abs(r_mir)) * (1.0 / (1.0 - q) + 1.0 / (1.0 - q * q));
  return a * std::pow(q, static_cast<double>(n_max + 1));
}

/// Smallest order in [series_min_order, series_max_order] meeting tail_tol.
inline std::int64_t series_default_order(double r_mir, double tail_tol) {
  const double q = r_mir * r_mir;
  if (q == 0.0) return series_min_order;
  const double a = (1.0 + std::abs(r_mir)) * (1.0 + std::abs(r_mir)) * (1.0 / (1.0 - q) + 1.0 / (1.0 - q * q));
  const double need = std::log(tail_tol / a) / std::log(q);
  auto n = static_cast<std::int64_t>(std::ceil(need)) - 1;
  n = std::clamp<std::int64_t>(n, series_min_order, series_max_order);
  while (n < series_max_order && series_tail_bound(r_mir, n) > tail_tol) ++n;
  return n;
}

/// Truncated double reflection series
///   (3/2) sum_{n=0}^{N} sum_{m=-N}^{n} r^{4n-2m} t^2
///        [(1 + r^2) f(2m k0d) + r f((2m-1) k0d) + r f((2m+1) k0d)].
///
/// The inner m-sum obeys T(n+1) = r^4 T(n) + r^{2(n+1)} g(n+1), so the whole
/// truncated sum costs O(N) kernel evaluations.
template <class Kernel = FKernel>
RateResult gamma_cavity_series(const CavitySpec& spec, const SeriesControl& ctl = {}, Kernel&& kernel = {}) {
  if (!(ctl.tail_tol > 0.0)) throw InvalidParams("cavity series: tail_tol must be > 0");
  const double r = spec.r_mir(), k = spec.k0d(), q = r * r;
  const std::int64_t n_max = ctl.n_max ? *ctl.n_max : series_default_order(r, ctl.tail_tol);
  if (n_max < 0) throw InvalidParams("cavity series: n_max must be >= 0");
  const double tail = series_tail_bound(r, n_max);
  if (tail > ctl.tail_tol) {
    throw TailTooLarge("cavity series: tail bound " + std::to_string(tail) + " exceeds tail_tol at n_max = " +
                           std::to_string(n_max),
                       tail);
  }

  // g(m) is even in m since f is even.
  std::vector<double> g(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t m = 0; m <= n_max; ++m) {
    const double dm = static_cast<double>(m);
    g[static_cast<std::size_t>(m)] =
        (1.0 + q) * kernel(2.0 * dm * k) + r * kernel((2.0 * dm - 1.0) * k) + r * kernel((2.0 * dm + 1.0) * k);
  }

  // T(0) = sum_{j=0}^{N} q^j g(j), summed from the small end.
  double t_n = 0.0;
  {
    std::vector<double> qp(static_cast<std::size_t>(n_max) + 1);
    double p = 1.0;
    for (std::int64_t j = 0; j <= n_max; ++j) {
      qp[static_cast<std::size_t>(j)] = p;
      p *= q;
    }
    for (std::int64_t j = n_max; j >= 0; --j) t_n += qp[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)];
  }

  // Neumaier summation over n.
  double sum = 0.0, comp = 0.0;
  double qn = 1.0;  // q^n
  for (std::int64_t n = 0;; ++n) {
    const double y = t_n;
    const double s = sum + y;
    comp += std::abs(sum) >= std::abs(y) ? (sum - s) + y : (y - s) + sum;
    sum = s;
    if (n == n_max) break;
    qn *= q;
    t_n = q * q * t_n + qn * g[static_cast<std::size_t>(n + 1)];
  }
  const double ratio = 1.5 * spec.t_mir_squared() * (sum + comp);
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(ratio);
  return {ratio, Method::series, tail + rounding};
}

/// Optical-cavity asymptote: the m = 0 part of the bounce series,
/// sum_n r^{4n} t^2 (1 + r^2) = 1 - r^{4(N+1)} for the truncated sum.
inline RateResult gamma_optical_asymptote(double r_mir, const SeriesControl& ctl = {}) {
  if (!(std::abs(r_mir) < 1.0)) throw DegenerateMirror("optical asymptote: |r_mir| must be < 1");
  const double q = r_mir * r_mir;
  const std::int64_t n_max = ctl.n_max ? *ctl.n_max : series_default_order(r_mir, ctl.tail_tol);
  double sum = 0.0, p = 1.0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    sum += p * (1.0 - q) * (1.0 + q);
    p *= q * q;
  }
  return {sum, Method::limit, p};
}

namespace detail {

inline void check_limit_r(double r_mir) {
  if (!(r_mir >= -1.0 && r_mir < 1.0)) {
    throw DegenerateMirror("subwavelength limit: r_mir must lie in [-1, 1)");
  }
}

}  // namespace detail

/// d -> 0 limit (1 + r) / (1 - r).
inline RateResult gamma_subwavelength_limit(double r_mir) {
  detail::check_limit_r(r_mir);
  return {(1.0 + r_mir) / (1.0 - r_mir), Method::limit, 0.0};
}

/// Second order in k0d: (1 + r)/(1 - r) [1 - (2/5) r/(1 - r)^2 (k0d)^2].
/// The error estimate is the size of the next correction, taken as the
/// square of the second-order term.
inline RateResult gamma_subwavelength_2nd(double r_mir, double k0d) {
  detail::check_limit_r(r_mir);
  if (!(k0d >= 0.0) || !std::isfinite(k0d)) throw InvalidParams("subwavelength: k0d must be >= 0");
  const double base = (1.0 + r_mir) / (1.0 - r_mir);
  const double corr = 0.4 * r_mir / ((1.0 - r_mir) * (1.0 - r_mir)) * k0d * k0d;
  return {base * (1.0 - corr), Method::limit, std::abs(base) * corr * corr};
}

}  // namespace emitrate
