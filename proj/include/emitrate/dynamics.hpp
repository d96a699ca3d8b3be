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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emitrate/errors.hpp"
#include "emitrate/parallel.hpp"
#include "emitrate/rng.hpp"

namespace emitrate {

using cplx = std::complex<double>;
using MatrixX = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Resonant Jaynes-Cummings parameters (hbar = 1): coupling g, cavity decay
/// kappa, atomic decay gamma.
struct ModelParams {
  double g = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;

  void validate() const {
    if (!std::isfinite(g)) throw InvalidParams("g must be finite");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidParams("kappa must be finite and >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidParams("gamma must be finite and >= 0");
  }
};

/// Density matrix of a two-level atom times a photon ladder truncated at N.
/// Basis index is atom * (N + 1) + n with atom 0 = ground, 1 = excited.
class AtomCavityState {
 public:
  AtomCavityState(MatrixX rho, int fock_cutoff) : rho_(std::move(rho)), n_(fock_cutoff) {
    if (n_ < 1) throw InvalidParams("Fock cutoff must be >= 1");
    if (rho_.rows() != dim() || rho_.cols() != dim()) {
      throw InvalidParams("density matrix must be " + std::to_string(dim()) + "x" + std::to_string(dim()));
    }
  }

  /// rho_atom (tensor) |0><0| of the cavity.
  static AtomCavityState from_atom(const Matrix2& rho_atom, int fock_cutoff = 5) {
    const int d = 2 * (fock_cutoff + 1);
    MatrixX rho = MatrixX::Zero(d, d);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) rho(a * (fock_cutoff + 1), b * (fock_cutoff + 1)) = rho_atom(a, b);
    }
    return {std::move(rho), fock_cutoff};
  }

  static AtomCavityState excited_vacuum(int fock_cutoff = 5) {
    Matrix2 e = Matrix2::Zero();
    e(1, 1) = 1.0;
    return from_atom(e, fock_cutoff);
  }

  int fock_cutoff() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return 2 * (n_ + 1); }
  Eigen::Index index(int atom, int photons) const noexcept { return atom * (n_ + 1) + photons; }
  const MatrixX& rho() const noexcept { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_diagonal() const { return rho_.diagonal().real().minCoeff(); }
  double max_diagonal() const { return rho_.diagonal().real().maxCoeff(); }

  double excited_population() const {
    double p = 0.0;
    for (int n = 0; n <= n_; ++n) p += rho_(index(1, n), index(1, n)).real();
    return p;
  }

  double photon_number() const {
    double p = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int n = 0; n <= n_; ++n) p += n * rho_(index(a, n), index(a, n)).real();
    }
    return p;
  }

  /// <sigma+ sigma- + a^dagger a>
  double excitation_number() const { return excited_population() + photon_number(); }

  double top_fock_population() const {
    return rho_(index(0, n_), index(0, n_)).real() + rho_(index(1, n_), index(1, n_)).real();
  }

  /// Partial trace over the cavity.
  Matrix2 reduced_atom() const {
    Matrix2 out = Matrix2::Zero();
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int n = 0; n <= n_; ++n) out(a, b) += rho_(index(a, n), index(b, n));
      }
    }
    return out;
  }

 private:
  MatrixX rho_;
  int n_;
};

struct JcTrajectory {
  std::vector<double> times;
  std::vector<AtomCavityState> states;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double max_top_fock_population = 0.0;
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  std::size_t steps = 0;
};

struct JcControls {
  /// Largest allowed population of the top Fock level.
  double leak_threshold = 1e-8;
};

namespace detail {

/// Generator pieces of the two-channel master equation
///   d rho/dt = -i (Heff rho - rho Heff^dagger) + sum_c C rho C^dagger,
///   Heff = H_JC - (i/2) sum_c C^dagger C, C in {sqrt(gamma) sigma-, sqrt(kappa) a}.
struct JcGenerator {
  MatrixX heff;
  MatrixX heff_adj;
  MatrixX sm;  // sqrt(gamma) sigma-
  MatrixX sm_adj;
  MatrixX am;  // sqrt(kappa) a
  MatrixX am_adj;

  JcGenerator(const ModelParams& p, int n_cut) {
    const int d = 2 * (n_cut + 1);
    auto idx = [n_cut](int atom, int n) { return atom * (n_cut + 1) + n; };
    MatrixX sigma_minus = MatrixX::Zero(d, d), a = MatrixX::Zero(d, d);
    for (int n = 0; n <= n_cut; ++n) sigma_minus(idx(0, n), idx(1, n)) = 1.0;
    for (int at = 0; at < 2; ++at) {
      for (int n = 1; n <= n_cut; ++n) a(idx(at, n - 1), idx(at, n)) = std::sqrt(static_cast<double>(n));
    }
    const MatrixX h = p.g * (sigma_minus * a.adjoint() + sigma_minus.adjoint() * a);
    sm = std::sqrt(p.gamma) * sigma_minus;
    am = std::sqrt(p.kappa) * a;
    sm_adj = sm.adjoint();
    am_adj = am.adjoint();
    heff = h - cplx(0.0, 0.5) * (sm_adj * sm + am_adj * am);
    heff_adj = heff.adjoint();
  }

  MatrixX operator()(const MatrixX& rho) const {
    MatrixX out = cplx(0.0, -1.0) * (heff * rho - rho * heff_adj);
    out.noalias() += sm * rho * sm_adj;
    out.noalias() += am * rho * am_adj;
    return out;
  }
};

}  // namespace detail

/// Integrates the Jaynes-Cummings master equation with classical fixed-step
/// RK4 and returns the state at each requested time (times must be
/// non-negative and increasing). Steps between samples are shortened so every
/// sample time is hit exactly; no step exceeds dt.
///
/// Throws StepTooLarge if dt * max(kappa, gamma, |g|) >= 0.1 and
/// TruncationLeak if the top Fock level population exceeds the threshold.
inline JcTrajectory evolve_jc(const ModelParams& params, const AtomCavityState& rho0, std::span<const double> times,
                              double dt, const JcControls& ctl = {}) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepTooLarge("dt must be finite and > 0");
  const double rate = std::max({params.kappa, params.gamma, std::abs(params.g)});
  if (dt * rate >= 0.1) {
    throw StepTooLarge("dt * max(kappa, gamma, |g|) = " + std::to_string(dt * rate) + " violates < 0.1");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InvalidParams("sample times must be non-negative and strictly increasing");
    }
  }

  const int n_cut = rho0.fock_cutoff();
  const detail::JcGenerator gen(params, n_cut);
  const double trace0 = rho0.trace();

  JcTrajectory out;
  out.times.assign(times.begin(), times.end());
  out.states.reserve(times.size());
  out.min_diagonal = rho0.min_diagonal();
  out.max_diagonal = rho0.max_diagonal();

  MatrixX rho = rho0.rho();
  auto monitor = [&](const MatrixX& m) {
    const AtomCavityState s(m, n_cut);
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(s.trace() - trace0));
    out.max_hermiticity_error = std::max(out.max_hermiticity_error, s.hermiticity_error());
    out.max_top_fock_population = std::max(out.max_top_fock_population, s.top_fock_population());
    out.min_diagonal = std::min(out.min_diagonal, s.min_diagonal());
    out.max_diagonal = std::max(out.max_diagonal, s.max_diagonal());
    if (s.top_fock_population() > ctl.leak_threshold) {
      throw TruncationLeak("population of Fock level " + std::to_string(n_cut) + " reached " +
                           std::to_string(s.top_fock_population()));
    }
  };
  monitor(rho);

  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    const auto n_steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    if (n_steps > 0) {
      const double h = span / static_cast<double>(n_steps);
      for (std::size_t s = 0; s < n_steps; ++s) {
        const MatrixX k1 = gen(rho);
        const MatrixX k2 = gen(rho + (0.5 * h) * k1);
        const MatrixX k3 = gen(rho + (0.5 * h) * k2);
        const MatrixX k4 = gen(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        monitor(rho);
      }
      out.steps += n_steps;
    }
    t = target;
    out.states.emplace_back(rho, n_cut);
  }
  return out;
}

/// Uniform sample grid 0, dt, 2 dt, ..., t_final.
inline std::vector<double> uniform_times(double t_final, double dt) {
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw InvalidParams("uniform_times: need t_final >= 0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::llround(t_final / dt));
  std::vector<double> ts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) ts[i] = t_final * static_cast<double>(i) / static_cast<double>(n ? n : 1);
  return ts;
}

/// Convenience overload recording every step up to t_final.
inline JcTrajectory evolve_jc(const ModelParams& params, const AtomCavityState& rho0, double t_final, double dt,
                              const JcControls& ctl = {}) {
  const auto ts = uniform_times(t_final, dt);
  return evolve_jc(params, rho0, ts, dt, ctl);
}

struct AtomTrajectory {
  std::vector<double> times;
  std::vector<Matrix2> states;
};

namespace detail {

inline void check_atom_state(const Matrix2& rho) {
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || (rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidParams("atomic state must be Hermitian with unit trace");
  }
}

}  // namespace detail

/// Closed-form solution of the single-rate atomic master equation
///   d rho/dt = gamma_cav (sigma- rho sigma+ - {sigma+ sigma-, rho} / 2)
/// in the frame rotating at the transition frequency: the excited population
/// decays as e^{-gamma t}, coherences as e^{-gamma t / 2}.
inline AtomTrajectory evolve_single_rate(double gamma_cav, const Matrix2& rho0, std::span<const double> times) {
  if (!(gamma_cav >= 0.0) || !std::isfinite(gamma_cav)) throw InvalidParams("gamma_cav must be >= 0");
  detail::check_atom_state(rho0);
  AtomTrajectory out;
  out.times.assign(times.begin(), times.end());
  for (double t : times) {
    const double pop = std::exp(-gamma_cav * t);
    const double coh = std::exp(-0.5 * gamma_cav * t);
    Matrix2 r;
    r(1, 1) = rho0(1, 1) * pop;
    r(0, 0) = 1.0 - r(1, 1).real();
    r(0, 1) = rho0(0, 1) * coh;
    r(1, 0) = rho0(1, 0) * coh;
    out.states.push_back(r);
  }
  return out;
}

/// Monte Carlo wave-function ensemble of the single-rate model.
struct TrajectoryEnsemble {
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> excited_population;  // ensemble mean
  std::vector<double> excited_stderr;      // standard error of the mean
  std::vector<std::optional<double>> jump_times;  // per trajectory
};

/// Quantum-jump unraveling with H_cond = H_A - (i/2) gamma sigma+ sigma- and
/// reset gamma sigma- rho sigma+.
///
/// Each trajectory starts from an eigenvector of rho_atom0 drawn with its
/// eigenvalue as probability, then draws its jump time by inverting the
/// no-jump norm |c_g|^2 + |c_e|^2 e^{-gamma t}. After the jump the atom sits in
/// the ground state and never jumps again. Trajectory i uses stream (seed, i),
/// so results do not depend on thread count or scheduling.
inline TrajectoryEnsemble unravel_jumps(double gamma_cav, const Matrix2& rho_atom0, std::size_t n_traj,
                                        std::uint64_t seed, std::span<const double> times) {
  if (n_traj < 1) throw InvalidParams("n_traj must be >= 1");
  if (!(gamma_cav >= 0.0) || !std::isfinite(gamma_cav)) throw InvalidParams("gamma_cav must be >= 0");
  detail::check_atom_state(rho_atom0);

  const Eigen::SelfAdjointEigenSolver<Matrix2> eig(rho_atom0);
  const Eigen::Vector2d probs = eig.eigenvalues().cwiseMax(0.0);
  const double p_first = probs(0) / probs.sum();

  struct Draw {
    double excited_weight;  // |c_e|^2 of the sampled pure state
    std::optional<double> jump;
  };
  std::vector<Draw> draws(n_traj);
  parallel_for(n_traj, [&](std::size_t i) {
    rng::Stream stream(seed, i);
    const double u_state = stream.uniform();
    const double u_jump = stream.uniform();
    const Eigen::Vector2cd psi = eig.eigenvectors().col(u_state < p_first ? 0 : 1);
    const double pe = std::norm(psi(1));
    const double pg = 1.0 - pe;
    Draw d{pe, std::nullopt};
    if (gamma_cav > 0.0 && pe > 0.0 && u_jump > pg) d.jump = -std::log((u_jump - pg) / pe) / gamma_cav;
    draws[i] = d;
  });

  TrajectoryEnsemble out;
  out.n_traj = n_traj;
  out.seed = seed;
  out.times.assign(times.begin(), times.end());
  out.jump_times.reserve(n_traj);
  for (const auto& d : draws) out.jump_times.push_back(d.jump);

  const auto n = static_cast<double>(n_traj);
  for (double t : times) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& d : draws) {
      double p = 0.0;
      if (!d.jump || t < *d.jump) {
        const double decayed = d.excited_weight * std::exp(-gamma_cav * t);
        p = decayed / (1.0 - d.excited_weight + decayed);
      }
      sum += p;
      sum_sq += p * p;
    }
    const double mean = sum / n;
    double se = 0.0;
    if (n_traj > 1) se = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
    out.excited_population.push_back(mean);
    out.excited_stderr.push_back(se);
  }
  return out;
}

struct Cooperativity {
  double value;
  bool weak_coupling;  // C <= weak_coupling_threshold
};

inline constexpr double weak_coupling_threshold = 0.1;

/// C = g^2 / (kappa gamma).
inline Cooperativity cooperativity(const ModelParams& p) {
  if (!(p.kappa > 0.0) || !(p.gamma > 0.0) || !std::isfinite(p.g)) {
    throw InvalidParams("cooperativity needs kappa > 0 and gamma > 0");
  }
  const double c = p.g * p.g / (p.kappa * p.gamma);
  return {c, c <= weak_coupling_threshold};
}

/// Least-squares slope of -ln(population) over samples with t in [t_min, t_max].
inline double fit_decay_rate(std::span<const double> times, std::span<const double> populations, double t_min,
                             double t_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size() && i < populations.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max || !(populations[i] > 0.0)) continue;
    const double y = std::log(populations[i]);
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
    ++n;
  }
  if (n < 2) throw InvalidParams("fit_decay_rate: need at least two positive samples in the window");
  const double dn = static_cast<double>(n);
  return -(dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

struct DiscrepancyOptions {
  double dt = 0.0;  // 0 picks 0.02 / max(kappa, gamma, |g|, gamma_cav), capped at 1e-2
  int fock_cutoff = 5;
};

struct ModelDiscrepancy {
  std::vector<double> times;
  std::vector<double> pop_jc;      // excited population, cavity traced out
  std::vector<double> pop_single;  // single-rate model
  std::vector<double> difference;  // pop_jc - pop_single
  double max_abs = 0.0;
};

/// Atomic excited population under the two-channel JC model versus the
/// single-rate model, both started from excited atom and empty cavity.
inline ModelDiscrepancy model_discrepancy(const ModelParams& params, double gamma_cav, std::span<const double> times,
                                          const DiscrepancyOptions& opt = {}) {
  params.validate();
  double dt = opt.dt;
  if (dt <= 0.0) {
    const double rate = std::max({params.kappa, params.gamma, std::abs(params.g), gamma_cav, 1e-300});
    dt = std::min(1e-2, 0.02 / rate);
  }
  const auto rho0 = AtomCavityState::excited_vacuum(opt.fock_cutoff);
  const auto jc = evolve_jc(params, rho0, times, dt);
  const auto single = evolve_single_rate(gamma_cav, rho0.reduced_atom(), times);

  ModelDiscrepancy out;
  out.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double a = jc.states[i].excited_population();
    const double b = single.states[i](1, 1).real();
    out.pop_jc.push_back(a);
    out.pop_single.push_back(b);
    out.difference.push_back(a - b);
    out.max_abs = std::max(out.max_abs, std::abs(a - b));
  }
  return out;
}

}  // namespace emitrate
