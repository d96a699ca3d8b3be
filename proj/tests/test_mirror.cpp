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
#include <vector>

#include <gtest/gtest.h>

#include "emitrate/mirror.hpp"
#include "oracles.hpp"

namespace emitrate {
namespace {

constexpr double pi = std::numbers::pi;

// 1 + (3 Re r / 8 pi) * int w e^{-2ik cos} dOmega, with the phi integral
// done in closed form: (3 Re r / 8) int (1 + xi^2) cos(2 k xi) dxi.
double mirror_oracle(double re_r, double k0d) {
  const double integral = oracle::simpson(
      [k0d](double xi) { return (1.0 + xi * xi) * std::cos(2.0 * k0d * xi); }, -1.0, 1.0, 1e-13);
  return 1.0 + 0.375 * re_r * integral;
}

TEST(MirrorClosed, PerfectDielectricMirrorAtContact) {
  EXPECT_NEAR(gamma_mirror_closed(-1.0, 0.0).ratio, 0.0, 1e-15);
}

TEST(MirrorClosed, PerfectPlasmonicMirrorAtContact) {
  EXPECT_NEAR(gamma_mirror_closed(1.0, 0.0).ratio, 2.0, 1e-15);
}

TEST(MirrorClosed, HalfWavelengthDielectric) {
  // 1 - 3 / (8 pi^2): the bracket at 2 k0d = 2 pi is f(2 pi) = 1 / (4 pi^2).
  const double frozen = 0.9620045561341233;
  EXPECT_NEAR(mirror_oracle(-1.0, pi), frozen, 1e-11);
  EXPECT_NEAR(gamma_mirror_closed(-1.0, pi).ratio, frozen, 1e-12);
  EXPECT_NEAR(gamma_mirror_quadrature(-1.0, pi).ratio, frozen, 1e-9);
}

TEST(MirrorClosed, QuarterWavelengthDielectric) {
  // 2 k0d = pi puts the bracket at f(pi) = -1 / pi^2, giving 1 + 1.5 / pi^2.
  const double frozen = 1.1519817754635067;
  EXPECT_NEAR(mirror_oracle(-1.0, pi / 2), frozen, 1e-11);
  EXPECT_NEAR(gamma_mirror_closed(-1.0, pi / 2).ratio, frozen, 1e-12);
  EXPECT_NEAR(gamma_mirror_quadrature(-1.0, pi / 2).ratio, frozen, 1e-9);
}

TEST(MirrorClosed, OnlyRealPartEnters) {
  const MirrorSpec m({0.3, 0.4});
  EXPECT_NEAR(m.t(), std::sqrt(0.75), 1e-15);
  EXPECT_EQ(gamma_mirror_closed(m, 1.3).ratio, gamma_mirror_closed(0.3, 1.3).ratio);
}

TEST(MirrorSpec, UnitarityAndRejection) {
  const MirrorSpec m({-0.6, 0.0});
  EXPECT_NEAR(std::norm(m.r()) + m.t() * m.t(), 1.0, 1e-12);
  EXPECT_THROW(MirrorSpec({0.9, 0.9}), DegenerateMirror);
  EXPECT_THROW(gamma_mirror_closed(1.1, 1.0), InvalidParams);
  EXPECT_THROW(gamma_mirror_closed(0.5, -1.0), InvalidParams);
}

TEST(MirrorQuadrature, TransparentInterfaceIsFreeSpace) {
  for (double k : {0.0, 0.7, 13.0}) EXPECT_NEAR(gamma_mirror_quadrature(0.0, k).ratio, 1.0, 1e-10);
}

TEST(MirrorQuadrature, MatchesClosedFormAtTen) {
  EXPECT_NEAR(gamma_mirror_quadrature(-1.0, 10.0).ratio, gamma_mirror_closed(-1.0, 10.0).ratio, 1e-6);
}

TEST(MirrorQuadrature, FarFieldPlasmonic) {
  EXPECT_NEAR(gamma_mirror_quadrature(0.5, 100.0).ratio, 1.0, 1e-2);
  EXPECT_NEAR(gamma_mirror_closed(0.5, 100.0).ratio, 1.0, 1e-2);
}

TEST(MirrorRoutes, OracleEquivalenceGrid) {
  for (double k : {0.01, 0.1, 0.5, 1.0, pi, 10.0, 50.0}) {
    for (int i = -5; i <= 5; ++i) {
      const double r = 0.2 * i;
      const double closed = gamma_mirror_closed(r, k).ratio;
      EXPECT_NEAR(closed, mirror_oracle(r, k), 1e-9) << "r=" << r << " k0d=" << k;
      EXPECT_NEAR(gamma_mirror_quadrature(r, k).ratio, closed, 1e-6) << "r=" << r << " k0d=" << k;
    }
  }
}

TEST(MirrorClosed, RatioStaysBetweenZeroAndTwo) {
  for (int i = -10; i <= 10; ++i) {
    for (double k = 0.0; k < 60.0; k += 0.037) {
      const double v = gamma_mirror_closed(0.1 * i, k).ratio;
      EXPECT_GE(v, -1e-15);
      EXPECT_LE(v, 2.0 + 1e-15);
    }
  }
}

TEST(MirrorClosed, FarFieldEnvelope) {
  for (double r : {-1.0, -0.4, 0.3, 1.0}) {
    for (double k = 10.5; k < 200.0; k += 0.61) {
      const double v = gamma_mirror_closed(r, k).ratio;
      EXPECT_LT(std::abs(v - 1.0), 3.0 * std::abs(r) / (2.0 * 2.0 * k) * 1.1);
    }
  }
}

TEST(MirrorClosed, NearFieldLimit) {
  for (int i = -10; i <= 10; ++i) {
    const double r = 0.1 * i;
    EXPECT_LT(std::abs(gamma_mirror_closed(r, 1e-2).ratio - (1.0 + r)), 1e-3);
  }
}

}  // namespace
}  // namespace emitrate
