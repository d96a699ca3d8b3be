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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "emitrate/geometry.hpp"

namespace emitrate {
namespace {

constexpr double pi = std::numbers::pi;

void expect_vec(const Vec3& v, double x, double y, double z, double tol = 1e-15) {
  EXPECT_NEAR(v.x(), x, tol);
  EXPECT_NEAR(v.y(), y, tol);
  EXPECT_NEAR(v.z(), z, tol);
}

TEST(BasisVectors, PoleAlongMirrorNormal) {
  const auto b = basis_vectors(Direction(0.0, 0.0));
  expect_vec(b.s, 1, 0, 0);
  expect_vec(b.e_h, 0, 0, -1);
  expect_vec(b.e_v, 0, -1, 0);
}

TEST(BasisVectors, Equator) {
  const auto b = basis_vectors(Direction(pi / 2, 0.0));
  expect_vec(b.s, 0, 1, 0);
  expect_vec(b.e_h, 0, 0, -1);
  expect_vec(b.e_v, 1, 0, 0);
}

TEST(BasisVectors, OrthonormalForRandomDirections) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  for (int i = 0; i < 2000; ++i) {
    const auto b = basis_vectors(Direction(th(gen), ph(gen)));
    EXPECT_NEAR(b.s.norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.e_h.norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.e_v.norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.s.dot(b.e_h), 0.0, 1e-12);
    EXPECT_NEAR(b.s.dot(b.e_v), 0.0, 1e-12);
    EXPECT_NEAR(b.e_h.dot(b.e_v), 0.0, 1e-12);
  }
}

TEST(Direction, OutOfRangeAnglesFoldOntoSameVector) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> any(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double theta = any(gen), phi = any(gen);
    const Direction d(theta, phi);
    EXPECT_GE(d.theta(), 0.0);
    EXPECT_LE(d.theta(), pi);
    EXPECT_GE(d.phi(), 0.0);
    EXPECT_LT(d.phi(), 2 * pi);
    const Vec3 raw{std::cos(theta), std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta)};
    EXPECT_NEAR((d.unit_vector() - raw).norm(), 0.0, 1e-12);
  }
}

TEST(DipoleWeight, DipoleAlongPropagationHasNoTransverseProjection) {
  const auto w = dipole_weight(DipoleOrientation{}, Direction(pi / 2, pi / 2));
  EXPECT_NEAR(w.total(), 0.0, 1e-15);
}

TEST(DipoleWeight, DipolePerpendicularToPropagation) {
  for (double phi : {0.0, 0.3, 1.7, 4.0}) {
    EXPECT_NEAR(dipole_weight(DipoleOrientation{}, Direction(0.0, phi)).total(), 1.0, 1e-15);
  }
}

TEST(DipoleWeight, ParallelDipoleMatchesAngularFactor) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  for (int i = 0; i < 500; ++i) {
    const double t = th(gen), p = ph(gen);
    const double expected = std::cos(p) * std::cos(p) + std::sin(p) * std::sin(p) * std::cos(t) * std::cos(t);
    EXPECT_NEAR(dipole_weight(DipoleOrientation{}, Direction(t, p)).total(), expected, 1e-14);
    EXPECT_NEAR(parallel_dipole_weight(t, p), expected, 1e-14);
  }
}

TEST(DipoleWeight, CompletenessForRandomDipoles) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2 * pi);
  for (int i = 0; i < 2000; ++i) {
    const DipoleOrientation d(Vec3{n01(gen), n01(gen), n01(gen)});
    const Direction dir(th(gen), ph(gen));
    const double along = d.vector().dot(basis_vectors(dir).s);
    EXPECT_NEAR(dipole_weight(d, dir).total() + along * along, 1.0, 1e-12);
  }
}

TEST(DipoleOrientation, DefaultsToZAndNormalises) {
  EXPECT_EQ(DipoleOrientation{}.vector(), Vec3(0, 0, 1));
  EXPECT_NEAR(DipoleOrientation(Vec3{3, 0, 4}).vector().norm(), 1.0, 1e-15);
  EXPECT_THROW(DipoleOrientation(Vec3::Zero()), InvalidParams);
}

}  // namespace
}  // namespace emitrate
