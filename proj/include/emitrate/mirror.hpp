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
#include <complex>
#include <limits>
#include <numbers>

#include "emitrate/errors.hpp"
#include "emitrate/geometry.hpp"
#include "emitrate/kernel.hpp"
#include "emitrate/quadrature.hpp"
#include "emitrate/rate.hpp"

namespace emitrate {

/// One lossless planar interface: complex reflection rate r and real
/// transmission rate t = sqrt(1 - |r|^2).
class MirrorSpec {
 public:
  explicit MirrorSpec(std::complex<double> r) : r_(r) {
    const double r2 = std::norm(r);
    if (!(r2 <= 1.0) || !std::isfinite(r2)) throw DegenerateMirror("mirror requires |r| <= 1");
    t_ = std::sqrt(1.0 - r2);
  }

  std::complex<double> r() const noexcept { return r_; }
  double t() const noexcept { return t_; }

 private:
  std::complex<double> r_;
  double t_;
};

namespace detail {

inline void check_mirror_args(double re_r, double k0d) {
  if (!(std::abs(re_r) <= 1.0)) throw InvalidParams("mirror: |Re r| must be <= 1");
  if (!(k0d >= 0.0) || !std::isfinite(k0d)) throw InvalidParams("mirror: k0d must be finite and >= 0");
}

}  // namespace detail

/// Gamma_mir / Gamma_free = 1 + (3 Re r / 2) f(2 k0 d) for a dipole parallel to
/// the mirror at distance d. Only Re r enters.
template <class Kernel = FKernel>
RateResult gamma_mirror_closed(double re_r, double k0d, Kernel&& kernel = {}) {
  detail::check_mirror_args(re_r, k0d);
  const double ratio = 1.0 + 1.5 * re_r * kernel(2.0 * k0d);
  const double err = 1e-14 * std::abs(re_r) + 4.0 * std::numeric_limits<double>::epsilon();
  return {ratio, Method::closed_form, err};
}

inline RateResult gamma_mirror_closed(const MirrorSpec& m, double k0d) {
  return gamma_mirror_closed(m.r().real(), k0d);
}

/// Same ratio from the solid-angle interference integral
/// 1 + (3 Re r / 8 pi) Re int dOmega e^{-2 i k0 d cos theta} sum_lambda |dhat . e_{s lambda}|^2.
inline RateResult gamma_mirror_quadrature(double re_r, double k0d, double tol = 1e-10) {
  detail::check_mirror_args(re_r, k0d);
  if (!(tol > 0.0)) throw InvalidParams("mirror: tol must be > 0");
  SphereQuadratureOptions opt;
  opt.tol = tol;
  opt.abs_tol = tol;
  opt.phase_rate = 2.0 * k0d;
  const DipoleOrientation dhat;
  const auto integral = solid_angle_integrate(
      [&](double theta, double phi) {
        const double w = dipole_weight(dhat, Direction(theta, phi)).total();
        return std::polar(w, -2.0 * k0d * std::cos(theta));
      },
      opt);
  const double c = 3.0 * re_r / (8.0 * std::numbers::pi);
  return {1.0 + c * integral.value.real(), Method::quadrature, std::abs(c) * integral.err_estimate};
}

inline RateResult gamma_mirror_quadrature(const MirrorSpec& m, double k0d, double tol = 1e-10) {
  return gamma_mirror_quadrature(m.r().real(), k0d, tol);
}

}  // namespace emitrate
