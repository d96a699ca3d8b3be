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

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "emitrate/cavity.hpp"
#include "emitrate/dynamics.hpp"
#include "emitrate/kernel.hpp"
#include "emitrate/mirror.hpp"
#include "emitrate/sweep.hpp"

namespace emitrate {

struct ValidationOptions {
  bool quick = false;
  /// Added to f_kernel in the closed-form and series routes (0 = no fault).
  double kernel_fault = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

struct PerturbedKernel {
  double delta;
  double operator()(double x) const noexcept { return f_kernel(x) + delta; }
};

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

template <class Fn>
CheckResult timed(std::string name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = std::move(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// Runs the invariant suite: oracle equivalences, limits, kernel values,
/// qualitative sign structure, master-equation invariants, trajectory
/// convergence and output determinism.
inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
  using detail::fmt;
  constexpr double pi = std::numbers::pi;
  const detail::PerturbedKernel kernel{opt.kernel_fault};
  std::vector<CheckResult> out;

  out.push_back(detail::timed("mirror_oracle_equivalence", [&] {
    std::vector<double> ks{0.01, 0.1, 0.5, 1.0, pi, 10.0, 50.0};
    if (opt.quick) ks = {0.01, 1.0, 10.0};
    double worst = 0.0;
    for (double k : ks) {
      for (int i = -5; i <= 5; ++i) {
        const double r = 0.2 * i;
        worst = std::max(worst, std::abs(gamma_mirror_closed(r, k, kernel).ratio - gamma_mirror_quadrature(r, k).ratio));
      }
    }
    return CheckResult{{}, worst < 1e-6, worst, 1e-6, std::to_string(ks.size()) + "x11 grid", 0.0};
  }));

  out.push_back(detail::timed("mirror_limits", [&] {
    double near = 0.0, far = 0.0;
    for (int i = -10; i <= 10; ++i) {
      const double r = 0.1 * i;
      near = std::max(near, std::abs(gamma_mirror_closed(r, 1e-2, kernel).ratio - (1.0 + r)));
      far = std::max(far, std::abs(gamma_mirror_closed(r, 50.0, kernel).ratio - 1.0));
    }
    const bool ok = near < 1e-3 && far < 1e-2;
    return CheckResult{{}, ok, std::max(near / 1e-3, far / 1e-2), 1.0,
                       "near-field dev " + fmt(near) + " (< 1e-3), far-field dev " + fmt(far) + " (< 1e-2)", 0.0};
  }));

  const std::vector<double> subwl_r{-0.9, -0.5, 0.0, 0.5, 0.9};
  out.push_back(detail::timed("subwavelength_limit", [&] {
    double worst = 0.0;
    for (double r : subwl_r) {
      const double lim = gamma_subwavelength_limit(r).ratio;
      worst = std::max(worst, std::abs(gamma_cavity_quadrature(CavitySpec(r, 1e-3)).ratio - lim) / lim);
    }
    return CheckResult{{}, worst < 1e-3, worst, 1e-3, "relative deviation at k0d = 1e-3", 0.0};
  }));

  out.push_back(detail::timed("subwavelength_second_order", [&] {
    double worst = 0.0, worst_r = 0.0;
    for (double r : subwl_r) {
      const double q = gamma_cavity_quadrature(CavitySpec(r, 0.1)).ratio;
      const double dev = std::abs(gamma_subwavelength_2nd(r, 0.1).ratio - q) / q;
      if (dev > worst) {
        worst = dev;
        worst_r = r;
      }
    }
    return CheckResult{{}, worst < 5e-3, worst, 5e-3, "relative deviation at k0d = 0.1, worst at r = " + fmt(worst_r), 0.0};
  }));

  out.push_back(detail::timed("optical_asymptote", [&] {
    std::vector<double> rs{-0.8, -0.6, -0.3, 0.3, 0.6, 0.8};
    if (opt.quick) rs = {-0.8, 0.8};
    double worst = 0.0;
    for (double r : rs) {
      for (double k : {20.0 * pi, 50.0 * pi}) {
        worst = std::max(worst, std::abs(gamma_cavity_quadrature(CavitySpec(r, k)).ratio - 1.0));
      }
    }
    return CheckResult{{}, worst < 0.05, worst, 0.05, "deviation from 1 at k0d in {20 pi, 50 pi}", 0.0};
  }));

  out.push_back(detail::timed("cavity_route_equivalence", [&] {
    std::vector<double> rs{-0.8, -0.5, -0.2, 0.2, 0.5, 0.8};
    std::vector<double> ks{0.05, 1.0, pi, 10.0, 50.0};
    if (opt.quick) {
      rs = {-0.5, 0.8};
      ks = {0.05, pi, 50.0};
    }
    double worst = 0.0;
    for (double r : rs) {
      for (double k : ks) {
        const CavitySpec spec(r, k);
        const auto s = gamma_cavity_series(spec, {}, kernel);
        const auto q = gamma_cavity_quadrature(spec);
        const double allowed = std::max(1e-5, s.err_estimate + q.err_estimate);
        worst = std::max(worst, std::abs(s.ratio - q.ratio) / allowed);
      }
    }
    return CheckResult{{}, worst < 1.0, worst, 1.0, "|series - quadrature| / max(1e-5, combined error)", 0.0};
  }));

  out.push_back(detail::timed("f_kernel_values", [&] {
    const double at0 = kernel(0.0);
    const double c = f_kernel_crossover;
    const double cont = std::abs(f_kernel_taylor(c) + opt.kernel_fault - kernel(std::nextafter(c, 2.0 * c)));
    const double at_pi = std::abs(kernel(pi) + 1.0 / (pi * pi));
    const bool ok = at0 == 2.0 / 3.0 && cont < 1e-12 && at_pi < 1e-12;
    return CheckResult{{}, ok, std::max(std::abs(at0 - 2.0 / 3.0), std::max(cont, at_pi)), 1e-12,
                       "f(0) - 2/3 = " + fmt(at0 - 2.0 / 3.0) + ", crossover jump " + fmt(cont) +
                           ", f(pi) + 1/pi^2 = " + fmt(at_pi),
                       0.0};
  }));

  out.push_back(detail::timed("subwavelength_dichotomy", [&] {
    int violations = 0;
    std::vector<double> ks{0.001, 0.01, 0.05, 0.099};
    if (opt.quick) ks = {0.01};
    for (double k : ks) {
      for (int i = -10; i <= 10; ++i) {
        const double r = 0.095 * i;
        const double q = gamma_cavity_quadrature(CavitySpec(r, k)).ratio;
        const bool ok = i > 0 ? q > 1.0 : (i < 0 ? q < 1.0 : std::abs(q - 1.0) < 1e-9);
        if (!ok) ++violations;
      }
    }
    const double peak = gamma_cavity_quadrature(CavitySpec(0.9, 0.01)).ratio;
    const bool ok = violations == 0 && peak > 15.0;
    return CheckResult{{}, ok, peak, 15.0,
                       std::to_string(violations) + " sign violations on 21-point r grid; ratio(0.9, 0.01) = " +
                           fmt(peak) + " (> 15)",
                       0.0};
  }));

  out.push_back(detail::timed("jc_trace_hermiticity", [&] {
    const ModelParams p{1.0, 2.0, 1.0};
    const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), 10.0, 0.005);
    const bool ok = tr.max_trace_drift < 1e-9 && tr.max_hermiticity_error < 1e-10;
    return CheckResult{{}, ok, tr.max_trace_drift, 1e-9,
                       "trace drift " + fmt(tr.max_trace_drift) + " (< 1e-9), hermiticity " +
                           fmt(tr.max_hermiticity_error) + " (< 1e-10) over t = 10 / gamma",
                       0.0};
  }));

  out.push_back(detail::timed("jc_excitation_conservation", [&] {
    const ModelParams p{1.0, 0.0, 0.0};
    const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), 10.0, 0.005);
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.excitation_number() - 1.0));
    return CheckResult{{}, worst < 1e-8, worst, 1e-8, "kappa = gamma = 0", 0.0};
  }));

  out.push_back(detail::timed("jump_ensemble_convergence", [&] {
    const std::size_t n = opt.quick ? 1000 : 10000;
    const auto ts = uniform_times(5.0, 0.1);
    Matrix2 e = Matrix2::Zero();
    e(1, 1) = 1.0;
    const auto ens = unravel_jumps(1.0, e, n, 20240601, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double dev = std::abs(ens.excited_population[i] - std::exp(-ts[i]));
      worst = std::max(worst, ens.excited_stderr[i] > 0.0 ? dev / ens.excited_stderr[i] : (dev > 1e-12 ? 1e9 : 0.0));
    }
    return CheckResult{{}, worst <= 3.0, worst, 3.0,
                       "max deviation in standard errors, n_traj = " + std::to_string(n), 0.0};
  }));

  out.push_back(detail::timed("adiabatic_rate", [&] {
    const ModelParams p{1.0, 20.0, 1.0};
    const double c = cooperativity(p).value;
    const auto ts = uniform_times(6.0, 0.02);
    const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), ts, 0.002);
    std::vector<double> pops;
    for (const auto& s : tr.states) pops.push_back(s.excited_population());
    const double fitted = fit_decay_rate(ts, pops, 1.0, 6.0);
    const double expected = p.gamma * (1.0 + 2.0 * c);
    const double dev = std::abs(fitted - expected) / expected;
    return CheckResult{{}, dev < 0.05, dev, 0.05,
                       "C = " + fmt(c) + ", fitted rate " + fmt(fitted) + " vs gamma (1 + 2C) = " + fmt(expected) +
                           "; gamma + 4 g^2 / kappa = " + fmt(adiabatic_rate(p.g, p.kappa, p.gamma)),
                       0.0};
  }));

  out.push_back(detail::timed("csv_determinism", [&] {
    SweepConfig m;
    m.target = Target::mirror;
    m.r = -1.0;
    m.grid = Range{0.01, 3.0, opt.quick ? 20 : 100, Scale::linear};
    SweepConfig l;
    l.target = Target::lindblad;
    l.n_traj = opt.quick ? 200 : 2000;
    l.seed = 42;
    l.grid = Range{0.0, 5.0, 26, Scale::linear};
    bool same = true;
    for (const auto& cfg : {m, l}) {
      std::ostringstream a, b;
      run_sweep(cfg, a);
      run_sweep(cfg, b);
      same = same && a.str() == b.str();
    }
    return CheckResult{{}, same, same ? 0.0 : 1.0, 0.0, "two runs of a mirror and a lindblad sweep", 0.0};
  }));

  return out;
}

/// One line per check; returns true iff all passed.
inline bool print_report(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": measured " << detail::fmt(r.measured) << ", threshold "
       << detail::fmt(r.threshold) << " (" << r.detail << ") [" << detail::fmt(r.seconds) << " s]\n";
  }
  os << (all ? "all checks passed" : "some checks failed") << '\n';
  return all;
}

}  // namespace emitrate
