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
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "emitrate/errors.hpp"

namespace emitrate {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(std::size_t n) {
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Controls for solid_angle_integrate.
struct SphereQuadratureOptions {
  /// Relative tolerance on |value|.
  double tol = 1e-10;
  /// Absolute floor for integrals that vanish.
  double abs_tol = 1e-14;
  /// Oscillation-rate hint, typically k0 d. Sets the initial xi = cos(theta) node count
  /// to max(64, 8 * ceil(phase_rate)).
  double phase_rate = 0.0;
  /// Azimuthal trapezoid node count (>= 8, rounded up to even).
  int resolution = 16;
  /// Points in xi = cos(theta) where the integrand is sharply peaked or kinked.
  std::vector<double> breakpoints;
  /// Budget of xi nodes across all adaptive refinements.
  std::size_t max_nodes = std::size_t{1} << 22;
  /// Largest azimuthal node count tried before giving up.
  int max_resolution = 4096;
};

struct SphereQuadratureResult {
  std::complex<double> value;
  double err_estimate = 0.0;
  std::size_t xi_nodes = 0;
  int phi_nodes = 0;
};

namespace detail {

inline const GaussLegendreRule& gl16() {
  static const GaussLegendreRule rule = gauss_legendre(16);
  return rule;
}

struct Panel {
  double a, b;
  std::complex<double> whole;  // rule on [a, b]
  std::complex<double> left, right;  // rule on each half
  std::complex<double> halves_coarse;  // both halves, half the azimuthal nodes
  double err;
  double mass;  // integral of |f| over both halves

  std::complex<double> halves() const { return left + right; }
};

}  // namespace detail

/// Integrates f(theta, phi) sin(theta) over the unit sphere.
///
/// Product rule: composite 16-point Gauss-Legendre in xi = cos(theta), which
/// absorbs the sin(theta) Jacobian, times an equispaced trapezoid in phi. Panels
/// in xi are bisected adaptively (largest local error first) until the summed
/// error estimate meets tol. The azimuthal node count is doubled while the
/// difference between the full and half-density phi rules is too large.
///
/// Throws NonConvergence when the xi node budget or the azimuthal limit is hit.
template <class F>
SphereQuadratureResult solid_angle_integrate(F&& integrand, const SphereQuadratureOptions& opt = {}) {
  if (opt.resolution < 8) throw InvalidParams("solid_angle_integrate: resolution must be >= 8");
  if (!(opt.tol > 0.0)) throw InvalidParams("solid_angle_integrate: tol must be positive");

  const auto& rule = detail::gl16();
  const std::size_t initial_nodes =
      std::max<std::size_t>(64, 8 * static_cast<std::size_t>(std::ceil(std::max(0.0, opt.phase_rate))));

  std::vector<double> edges;
  {
    const std::size_t panels = (initial_nodes + 15) / 16;
    for (std::size_t i = 0; i <= panels; ++i) {
      edges.push_back(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(panels));
    }
    for (double bp : opt.breakpoints) {
      if (bp > -1.0 && bp < 1.0) edges.push_back(bp);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                edges.end());
  }

  int n_phi = opt.resolution + (opt.resolution % 2);
  for (;;) {
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    std::size_t nodes_used = 0;

    // Gauss-Legendre on [a, b]; returns (full azimuthal rule, half-density rule, rule on |f|).
    auto panel_rule = [&](double a, double b) {
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      std::complex<double> full{}, coarse{};
      double mass = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double xi = mid + half * rule.nodes[k];
        const double theta = std::acos(std::clamp(xi, -1.0, 1.0));
        std::complex<double> even{}, odd{};
        double absolute = 0.0;
        for (int j = 0; j < n_phi; ++j) {
          const std::complex<double> v = integrand(theta, j * dphi);
          if (j % 2 == 0) even += v; else odd += v;
          absolute += std::abs(v);
        }
        full += rule.weights[k] * (even + odd) * dphi;
        mass += rule.weights[k] * absolute * dphi;
        coarse += rule.weights[k] * even * (2.0 * dphi);
      }
      nodes_used += rule.nodes.size();
      return std::tuple{full * half, coarse * half, mass * half};
    };

    auto make_panel = [&](double a, double b, std::complex<double> whole) {
      const double m = 0.5 * (a + b);
      auto [l, lc, lm] = panel_rule(a, m);
      auto [r, rc, rm] = panel_rule(m, b);
      detail::Panel p{a, b, whole, l, r, lc + rc, 0.0, lm + rm};
      p.err = std::abs(p.whole - p.halves());
      return p;
    };

    auto by_err = [](const detail::Panel& x, const detail::Panel& y) { return x.err < y.err; };
    std::vector<detail::Panel> heap;
    heap.reserve(edges.size() * 4);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      auto [w, wc, wm] = panel_rule(edges[i], edges[i + 1]);
      (void)wc;
      (void)wm;
      heap.push_back(make_panel(edges[i], edges[i + 1], w));
    }
    std::make_heap(heap.begin(), heap.end(), by_err);

    double mass = 0.0;
    auto totals = [&]() {
      std::complex<double> v{}, vc{};
      double e = 0.0;
      mass = 0.0;
      for (const auto& p : heap) {
        v += p.halves();
        vc += p.halves_coarse;
        e += p.err;
        mass += p.mass;
      }
      return std::tuple{v, vc, e};
    };

    auto [value, coarse, xi_err] = totals();
    // Below this the panel differences are rounding noise.
    auto target = [&](std::complex<double> v) {
      return std::max({opt.tol * std::abs(v), opt.abs_tol, 64.0 * std::numeric_limits<double>::epsilon() * mass});
    };

    std::size_t iter = 0;
    while (xi_err > 0.5 * target(value) && nodes_used < opt.max_nodes) {
      std::pop_heap(heap.begin(), heap.end(), by_err);
      const detail::Panel worst = heap.back();
      heap.pop_back();
      const double m = 0.5 * (worst.a + worst.b);
      // The parent's half-panel sums are the children's whole-panel values.
      detail::Panel left = make_panel(worst.a, m, worst.left);
      detail::Panel right = make_panel(m, worst.b, worst.right);
      value += left.halves() + right.halves() - worst.halves();
      coarse += left.halves_coarse + right.halves_coarse - worst.halves_coarse;
      xi_err += left.err + right.err - worst.err;
      mass += left.mass + right.mass - worst.mass;
      heap.push_back(std::move(left));
      std::push_heap(heap.begin(), heap.end(), by_err);
      heap.push_back(std::move(right));
      std::push_heap(heap.begin(), heap.end(), by_err);
      if (++iter % 256 == 0) std::tie(value, coarse, xi_err) = totals();
    }
    std::tie(value, coarse, xi_err) = totals();

    const double phi_err = std::abs(value - coarse);
    const double err = xi_err + phi_err;
    if (err <= target(value)) {
      return {value, err, nodes_used, n_phi};
    }
    if (xi_err <= 0.5 * target(value) && 2 * n_phi <= opt.max_resolution) {
      n_phi *= 2;
      continue;
    }
    throw NonConvergence("solid_angle_integrate: error estimate " + std::to_string(err) +
                             " exceeds target " + std::to_string(target(value)) + " after " +
                             std::to_string(nodes_used) + " xi nodes",
                         err);
  }
}

}  // namespace emitrate
