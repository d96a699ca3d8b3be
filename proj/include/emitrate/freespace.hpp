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
#include <numbers>

#include "emitrate/constants.hpp"
#include "emitrate/errors.hpp"
#include "emitrate/geometry.hpp"
#include "emitrate/quadrature.hpp"

namespace emitrate {

/// Two-level emitter: transition frequency, dipole length |D01| (the electron
/// charge is carried separately) and dipole orientation.
class EmitterSpec {
 public:
  EmitterSpec(double omega0, double dipole_magnitude, DipoleOrientation dhat = {})
      : omega0_(omega0), dipole_magnitude_(dipole_magnitude), dhat_(dhat) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidParams("omega0 must be > 0");
    if (!(dipole_magnitude > 0.0) || !std::isfinite(dipole_magnitude)) {
      throw InvalidParams("dipole magnitude must be > 0");
    }
  }

  double omega0() const noexcept { return omega0_; }
  double dipole_magnitude() const noexcept { return dipole_magnitude_; }
  const DipoleOrientation& dhat() const noexcept { return dhat_; }

  double k0() const noexcept { return omega0_ / constants::speed_of_light; }
  double lambda0() const noexcept {
    return 2.0 * std::numbers::pi * constants::speed_of_light / omega0_;
  }

 private:
  double omega0_;
  double dipole_magnitude_;
  DipoleOrientation dhat_;
};

/// e^2 |D01|^2 omega0^3 / (3 pi c^3 eps0 hbar), in 1/s.
inline double gamma_free_si(const EmitterSpec& em) {
  using namespace constants;
  const double e2d2 = elementary_charge * elementary_charge * em.dipole_magnitude() * em.dipole_magnitude();
  const double w3 = em.omega0() * em.omega0() * em.omega0();
  return e2d2 * w3 /
         (3.0 * pi * speed_of_light * speed_of_light * speed_of_light * vacuum_permittivity * reduced_planck);
}

/// Same rate from the angular form: prefactor e^2 |D01|^2 omega0^3 / (8 pi^2 c^3 eps0 hbar)
/// times the solid-angle integral of sum_lambda |dhat . e_{s lambda}|^2.
inline double gamma_free_quadrature(const EmitterSpec& em, double tol = 1e-12) {
  using namespace constants;
  SphereQuadratureOptions opt;
  opt.tol = tol;
  const auto& dhat = em.dhat();
  const auto integral = solid_angle_integrate(
      [&](double theta, double phi) { return dipole_weight(dhat, Direction(theta, phi)).total(); }, opt);
  const double e2d2 = elementary_charge * elementary_charge * em.dipole_magnitude() * em.dipole_magnitude();
  const double w3 = em.omega0() * em.omega0() * em.omega0();
  const double prefactor = e2d2 * w3 /
                           (8.0 * pi * pi * speed_of_light * speed_of_light * speed_of_light *
                            vacuum_permittivity * reduced_planck);
  return prefactor * integral.value.real();
}

}  // namespace emitrate
