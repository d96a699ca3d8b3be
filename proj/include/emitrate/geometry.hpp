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

#include <Eigen/Dense>

#include "emitrate/errors.hpp"

namespace emitrate {

using Vec3 = Eigen::Vector3d;

/// Propagation direction in polar coordinates about the mirror normal (x axis).
///
/// The polar angle is measured from +x and the azimuth lives in the y-z plane,
/// so that s = (cos theta, cos phi sin theta, sin phi sin theta). Angles outside
/// theta in [0, pi], phi in [0, 2 pi) are folded back onto the same unit vector.
class Direction {
 public:
  Direction(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
      // s(2 pi - theta, phi) == s(theta, phi + pi)
      theta = two_pi - theta;
      phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    theta_ = theta;
    phi_ = phi;
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  Vec3 unit_vector() const {
    const double st = std::sin(theta_);
    return {std::cos(theta_), std::cos(phi_) * st, std::sin(phi_) * st};
  }

 private:
  double theta_;
  double phi_;
};

/// Orthonormal triple {s, e_H, e_V}: propagation direction and the two
/// transverse polarisation vectors.
struct PolarizationBasis {
  Vec3 s;
  Vec3 e_h;
  Vec3 e_v;
};

inline PolarizationBasis basis_vectors(const Direction& dir) {
  const double ct = std::cos(dir.theta()), st = std::sin(dir.theta());
  const double cp = std::cos(dir.phi()), sp = std::sin(dir.phi());
  return {Vec3{ct, cp * st, sp * st}, Vec3{0.0, sp, -cp}, Vec3{st, -cp * ct, -sp * ct}};
}

/// Real unit dipole orientation. Defaults to (0, 0, 1), parallel to the mirrors.
class DipoleOrientation {
 public:
  DipoleOrientation() : dhat_(0.0, 0.0, 1.0) {}

  explicit DipoleOrientation(const Vec3& d) {
    const double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw InvalidParams("dipole orientation must be a finite non-zero vector");
    }
    dhat_ = d / n;
  }

  const Vec3& vector() const noexcept { return dhat_; }

 private:
  Vec3 dhat_;
};

struct DipoleWeight {
  double w_h;
  double w_v;

  double total() const noexcept { return w_h + w_v; }
};

/// Squared projections |dhat . e_{s lambda}|^2 for both polarisations.
inline DipoleWeight dipole_weight(const DipoleOrientation& dhat, const Direction& dir) {
  const PolarizationBasis b = basis_vectors(dir);
  const double ph = dhat.vector().dot(b.e_h);
  const double pv = dhat.vector().dot(b.e_v);
  return {ph * ph, pv * pv};
}

/// Angular weight cos^2 phi + sin^2 phi cos^2 theta of the default (parallel)
/// dipole, summed over polarisations. Same value as dipole_weight() with the
/// default orientation, without building the basis.
inline double parallel_dipole_weight(double theta, double phi) {
  const double c = std::cos(theta), cp = std::cos(phi), sp = std::sin(phi);
  return cp * cp + sp * sp * c * c;
}

}  // namespace emitrate
