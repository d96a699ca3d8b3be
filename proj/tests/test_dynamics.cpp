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
#include <vector>

#include <gtest/gtest.h>

#include "emitrate/dynamics.hpp"

namespace emitrate {
namespace {

Matrix2 excited_atom() {
  Matrix2 e = Matrix2::Zero();
  e(1, 1) = 1.0;
  return e;
}

// Slow eigenvalue of the one-excitation amplitude equations
// d/dt (c_e, c_1) = [[-gamma/2, -i g], [-i g, -kappa/2]] (c_e, c_1),
// doubled to give a population decay rate.
double slow_population_rate(double g, double kappa, double gamma) {
  const double s = 0.25 * (gamma + kappa);
  const double d = 0.25 * (kappa - gamma);
  return 2.0 * (s - std::sqrt(d * d - g * g));
}

TEST(EvolveJc, DecoupledAtomDecaysExponentially) {
  const ModelParams p{0.0, 3.0, 1.0};
  const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), 5.0, 0.01);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    EXPECT_NEAR(tr.states[i].excited_population(), std::exp(-tr.times[i]), 1e-8);
  }
}

TEST(EvolveJc, ClosedRabiOscillation) {
  const ModelParams p{1.0, 0.0, 0.0};
  const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), 10.0, 0.01);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double c = std::cos(tr.times[i]);
    EXPECT_NEAR(tr.states[i].excited_population(), c * c, 1e-7);
  }
}

TEST(EvolveJc, ExcitationNumberConservedWithoutLoss) {
  const ModelParams p{1.7, 0.0, 0.0};
  const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), 10.0, 0.01);
  for (const auto& s : tr.states) EXPECT_NEAR(s.excitation_number(), 1.0, 1e-8);
}

TEST(EvolveJc, TraceHermiticityAndBounds) {
  const ModelParams p{1.0, 2.0, 1.0};
  Matrix2 mixed;
  mixed << 0.3, cplx(0.2, -0.1), cplx(0.2, 0.1), 0.7;
  const auto tr = evolve_jc(p, AtomCavityState::from_atom(mixed), 10.0, 0.005);
  EXPECT_LT(tr.max_trace_drift, 1e-9);
  EXPECT_LT(tr.max_hermiticity_error, 1e-10);
  EXPECT_GE(tr.min_diagonal, -1e-9);
  EXPECT_LE(tr.max_diagonal, 1.0 + 1e-9);
}

TEST(EvolveJc, WeakCouplingEffectiveRate) {
  const ModelParams p{1.0, 20.0, 1.0};
  const auto ts = uniform_times(6.0, 0.01);
  const auto tr = evolve_jc(p, AtomCavityState::excited_vacuum(), ts, 0.001);
  std::vector<double> pops;
  for (const auto& s : tr.states) pops.push_back(s.excited_population());
  const double fitted = fit_decay_rate(ts, pops, 1.0, 6.0);
  EXPECT_NEAR(fitted, 1.2, 0.05 * 1.2);
  EXPECT_NEAR(fitted, slow_population_rate(1.0, 20.0, 1.0), 1e-4);
}

TEST(EvolveJc, HalvingStepBarelyMoves) {
  const ModelParams p{2.0, 3.0, 1.0};
  const auto ts = uniform_times(5.0, 0.25);
  const auto a = evolve_jc(p, AtomCavityState::excited_vacuum(), ts, 0.01);
  const auto b = evolve_jc(p, AtomCavityState::excited_vacuum(), ts, 0.005);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto da = a.states[i].rho().diagonal().real();
    const auto db = b.states[i].rho().diagonal().real();
    EXPECT_LT((da - db).cwiseAbs().maxCoeff(), 1e-7) << "t=" << ts[i];
  }
}

TEST(EvolveJc, GuardsStepAndTruncation) {
  EXPECT_THROW(evolve_jc(ModelParams{1.0, 20.0, 1.0}, AtomCavityState::excited_vacuum(), 1.0, 0.01), StepTooLarge);
  // Two excitations reach Fock level 2 when the ladder stops at N = 2.
  Matrix2 e = excited_atom();
  MatrixX rho = MatrixX::Zero(6, 6);
  rho(4, 4) = 1.0;  // excited atom, one photon
  EXPECT_THROW(evolve_jc(ModelParams{1.0, 0.0, 0.0}, AtomCavityState(rho, 2), 2.0, 0.01), TruncationLeak);
  EXPECT_THROW(evolve_jc(ModelParams{1.0, -1.0, 0.0}, AtomCavityState::from_atom(e), 1.0, 0.01), InvalidParams);
}

TEST(SingleRate, NoDissipationIsStatic) {
  Matrix2 rho;
  rho << 0.4, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.6;
  const std::vector<double> ts{0.0, 1.0, 10.0};
  for (const auto& s : evolve_single_rate(0.0, rho, ts).states) EXPECT_LT((s - rho).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SingleRate, PopulationAndCoherence) {
  const std::vector<double> ts{1.0};
  EXPECT_NEAR(evolve_single_rate(1.0, excited_atom(), ts).states[0](1, 1).real(), std::exp(-1.0), 1e-12);
  Matrix2 rho;
  rho << 0.5, 0.5, 0.5, 0.5;
  const auto s = evolve_single_rate(2.0, rho, ts).states[0];
  EXPECT_NEAR(std::abs(s(0, 1)), 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(s.trace().real(), 1.0, 1e-15);
}

TEST(Jumps, EnsembleMatchesSingleRate) {
  const auto ts = uniform_times(3.0, 0.1);
  const auto ens = unravel_jumps(1.0, excited_atom(), 10000, 12345, ts);
  const auto ref = evolve_single_rate(1.0, excited_atom(), ts);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double expected = ref.states[i](1, 1).real();
    EXPECT_LE(std::abs(ens.excited_population[i] - expected), 3.0 * ens.excited_stderr[i]) << "t=" << ts[i];
  }
}

TEST(Jumps, MixedInitialState) {
  Matrix2 rho;
  rho << 0.5, cplx(0.3, 0.1), cplx(0.3, -0.1), 0.5;
  const auto ts = uniform_times(2.0, 0.2);
  const auto ens = unravel_jumps(1.5, rho, 20000, 99, ts);
  const auto ref = evolve_single_rate(1.5, rho, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_LE(std::abs(ens.excited_population[i] - ref.states[i](1, 1).real()),
              3.0 * ens.excited_stderr[i] + 1e-12)
        << "t=" << ts[i];
  }
}

TEST(Jumps, SingleTrajectoryDeterministic) {
  const std::vector<double> ts{0.0, 1.0};
  const auto a = unravel_jumps(1.0, excited_atom(), 1, 7, ts);
  const auto b = unravel_jumps(1.0, excited_atom(), 1, 7, ts);
  ASSERT_EQ(a.jump_times.size(), 1u);
  ASSERT_TRUE(a.jump_times[0].has_value());
  EXPECT_EQ(*a.jump_times[0], *b.jump_times[0]);
  EXPECT_NE(*unravel_jumps(1.0, excited_atom(), 1, 8, ts).jump_times[0], *a.jump_times[0]);
}

TEST(Jumps, StderrScalesAsInverseRoot) {
  const std::vector<double> ts{1.0};
  const auto a = unravel_jumps(1.0, excited_atom(), 2500, 3, ts);
  const auto b = unravel_jumps(1.0, excited_atom(), 10000, 3, ts);
  EXPECT_NEAR(a.excited_stderr[0] / b.excited_stderr[0], 2.0, 0.2 * 2.0);
}

TEST(Cooperativity, Examples) {
  EXPECT_DOUBLE_EQ(cooperativity({1.0, 1.0, 1.0}).value, 1.0);
  EXPECT_DOUBLE_EQ(cooperativity({2.0, 1.0, 1.0}).value, 4.0);
  const auto weak = cooperativity({1.0, 20.0, 1.0});
  EXPECT_DOUBLE_EQ(weak.value, 0.05);
  EXPECT_TRUE(weak.weak_coupling);
  EXPECT_FALSE(cooperativity({1.0, 1.0, 1.0}).weak_coupling);
  EXPECT_THROW(cooperativity({1.0, 0.0, 1.0}), InvalidParams);
  EXPECT_THROW(cooperativity({1.0, 1.0, 0.0}), InvalidParams);
}

TEST(Discrepancy, WeakCouplingModelsAgree) {
  const ModelParams p{0.1, 1.0, 1.0};  // C = 0.01
  const auto ts = uniform_times(5.0, 0.05);
  const auto d = model_discrepancy(p, p.gamma * (1.0 + 2.0 * 0.01), ts);
  EXPECT_LT(d.max_abs, 0.02);
}

TEST(Discrepancy, UncoupledModelsCoincide) {
  const ModelParams p{0.0, 2.0, 1.0};
  const auto d = model_discrepancy(p, 1.0, uniform_times(5.0, 0.05));
  EXPECT_LT(d.max_abs, 1e-8);
}

TEST(Discrepancy, StrongCouplingModelsDiverge) {
  const ModelParams p{std::sqrt(10.0), 1.0, 1.0};  // C = 10
  const auto d = model_discrepancy(p, 1.0, uniform_times(5.0, 0.05));
  EXPECT_GT(d.max_abs, 0.1);
}

}  // namespace
}  // namespace emitrate
